// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file quadrature.hpp
 * @brief Oscillation-resolving ring integrals with a two-resolution error
 *        estimate, stationary-point scans, and the one-dimensional Airy model.
 */

#pragma once

#include "moyalab/core.hpp"

#include <functional>
#include <string>
#include <vector>

namespace moyalab {

enum class QuadStatus { converged, indistinguishable_from_zero, non_converged };

const char* to_string(QuadStatus s);

struct QuadSpec {
  int radial_panels = 24;        ///< base Gauss panels across one radial interval
  int panel_order = 8;           ///< Gauss-Legendre order per panel
  int angular_samples = 64;      ///< base trapezoid samples on [0, 2 pi)
  int refinement = 2;            ///< resolution ratio between the two runs
  int max_refinements = 3;
  double tolerance = 1e-7;       ///< absolute target on |v(R) - v(2R)|
  double relative_tolerance = 0.1;
  double caustic_width_multiplier = 1.0;
  bool clamp_caustics = true;

  void validate() const;
};

/// Angular and radial oscillation rates of an integrand, used to raise the
/// base resolution: angular samples >= 8 l and >= 6 per period of the
/// fastest angular phase; radial panels chosen so each panel spans at most
/// panel_order / 6 radial oscillations.
struct OscillationRates {
  int l = 0;
  double angular = 0.0;  ///< max |d phase / d theta| (radians per radian)
  double radial = 0.0;   ///< max |d phase / d r| (radians per unit length)
};

struct Resolution {
  int radial_panels = 0;
  int angular_samples = 0;
};

Resolution required_resolution(const QuadSpec& q, const OscillationRates& rates, double r_a, double r_b);

/// Radial integration piece, integrated with panels graded toward both ends.
struct RadialInterval {
  double a = 0.0;
  double b = 0.0;
  std::string tag;
};

struct PieceValue {
  std::string tag;
  double coarse = 0.0;
  double fine = 0.0;
};

struct RingResult {
  double value = 0.0;        ///< fine-resolution total
  double coarse = 0.0;       ///< total at the coarser resolution
  double estimate = 0.0;     ///< |fine - coarse|
  QuadStatus status = QuadStatus::non_converged;
  Resolution resolution;     ///< the coarse resolution of the accepted pair
  std::vector<PieceValue> pieces;  ///< per-interval tallies (main region, caustic layers)
};

using RingIntegrand = std::function<double(double r, double theta)>;

/// int f(r, theta) r dr dtheta over the union of radial intervals. Values at
/// resolution R and refinement * R are compared; on failure both are
/// refined, up to max_refinements times.
RingResult ring_integral(const RingIntegrand& f, const std::vector<RadialInterval>& intervals,
                         const OscillationRates& rates, const QuadSpec& quad);

/// Fixed-resolution polar integral with graded Gauss panels in r and the
/// uniform trapezoid in theta.
double polar_quadrature(const RingIntegrand& f, double r_a, double r_b, int panels, int order, int angular);

/// Status from a value and its estimate.
QuadStatus classify(double value, double estimate, const QuadSpec& quad);

// ---------------------------------------------------------------------------
// Stationary points
// ---------------------------------------------------------------------------

using PolarPhase = std::function<double(double r, double theta)>;

struct StationaryPoint {
  Polar location;
  double phase = 0.0;
  int hessian_sign = 0;  ///< sign of the Hessian determinant in (r, theta)
};

struct StationaryReport {
  std::vector<StationaryPoint> points;
  double min_gradient = 0.0;  ///< min |grad phase| over the seed scan
  Polar min_location;
  bool complex_critical_points = false;  ///< no real root and gradient bounded away from zero
};

/// Newton search for real roots of (d_r phase, d_theta phase / r) on
/// [r_a, r_b] x [0, 2 pi), seeded from a seeds_r x seeds_theta grid.
StationaryReport stationary_points(const PolarPhase& phase, double r_a, double r_b, int seeds_r = 24,
                                   int seeds_theta = 48, double gradient_tol = 1e-8);

// ---------------------------------------------------------------------------
// The one-dimensional Airy model
// ---------------------------------------------------------------------------

/// pi (hbar / eps)^{1/3} Ai(lambda eps^{-1/3} hbar^{-2/3}).
double airy_reference(double lambda, double epsilon, double hbar);

struct ToyResult {
  double value = 0.0;
  double estimate = 0.0;  ///< |value(order) - value(2 order)|
  int panels = 0;
};

/// int_0^{2 pi} cos(lambda theta / hbar + eps theta^3 / (3 hbar)) dtheta with
/// Gauss panels of equal phase increment; estimate by order doubling.
ToyResult toy_integral(double lambda, double epsilon, double hbar);

/// The same integrand on [2 pi, infinity) along the steepest-descent path
/// from 2 pi, so that toy_integral + toy_integral_tail = airy_reference.
ToyResult toy_integral_tail(double lambda, double epsilon, double hbar);

}  // namespace moyalab
