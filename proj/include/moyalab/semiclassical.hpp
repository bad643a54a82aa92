// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file semiclassical.hpp
 * @brief Crude (non-uniform) semiclassical Moyal function of two energy circles.
 *
 *     M_m^n(r, theta) = exp(i l theta) cos(phi(r)/hbar - pi/4) / (sqrt(pi^3 hbar / 2) D(r))
 *
 * phi(r) is half the area of the lens shared by the circle of radius R_m at
 * the origin and the circle of radius R_n centred at 2x; D(r) is the square
 * root of the wedge of the two circle velocities at an intersection point.
 * The expression lives on the ring r_- < r < r_+ and vanishes outside it.
 */

#pragma once

#include "moyalab/core.hpp"

#include <array>

namespace moyalab {

/// Radii of the two energy circles and the caustic radii r_- and r_+.
struct RingGeometry {
  double R_m = 0.0;
  double R_n = 0.0;
  double r_minus = 0.0;
  double r_plus = 0.0;
  double hbar = 1.0;

  RingGeometry() = default;
  RingGeometry(int m, int n, double hbar);
  explicit RingGeometry(const FockPair& pair) : RingGeometry(pair.m, pair.n, pair.hbar) {}

  double e_total() const { return 0.5 * (R_m * R_m + R_n * R_n); }
  double lambda() const { return 0.5 * (R_m * R_m - R_n * R_n); }
  double center_offset(double r) const { return 2.0 * r; }
  bool inside_open(double r) const { return r > r_minus && r < r_plus; }
  bool inside_closed(double r) const { return r >= r_minus && r <= r_plus; }

  /// Squared tangential half-chord e_total - (lambda/2r)^2 - r^2; non-negative on the ring.
  double tangential_sq(double r) const;
  double tangential(double r) const;
};

/// (r_-, r_+) for a Fock pair.
std::array<double, 2> caustic_radii(const FockPair& pair);

struct CircleIntersection {
  enum class Kind { two_points, tangent, disjoint, coincident };
  Kind kind = Kind::disjoint;
  std::array<PhasePoint, 2> points{PhasePoint::Zero(), PhasePoint::Zero()};
};

/// Intersections of the circle R_m at the origin with the circle R_n centred
/// at 2 x(r, theta).
CircleIntersection circle_intersections(double r, double theta, const RingGeometry& geom);

/// Half the lens area; continuous on the closed ring, DomainError outside.
double symplectic_area_phi(const RingGeometry& geom, double r);
inline double symplectic_area_phi(const FockPair& pair, double r) {
  return symplectic_area_phi(RingGeometry(pair), r);
}

/// d phi / dr = -2 T(r) (the lens shrinks as the circles separate).
double phi_derivative(const RingGeometry& geom, double r);

/// |v_m ^ v_n|^{1/2} at an intersection point; zero at the caustics.
/// `which` selects the intersection point (0 or 1).
double amplitude_D(const RingGeometry& geom, double r, int which = 0);
inline double amplitude_D(const FockPair& pair, double r) { return amplitude_D(RingGeometry(pair), r); }

/// Caustic regularization. Inside a layer of the local Airy width around each
/// caustic the amplitude is frozen at its value on the layer edge.
struct CausticPolicy {
  bool clamp = true;
  double width_multiplier = 1.0;
};

/// Evaluator of the semiclassical Moyal (or, for m == n, Wigner) function with
/// its geometry and caustic layers precomputed.
class SemiclassicalMoyal {
 public:
  SemiclassicalMoyal(int m, int n, double hbar, CausticPolicy policy = {});
  explicit SemiclassicalMoyal(const FockPair& pair, CausticPolicy policy = {})
      : SemiclassicalMoyal(pair.m, pair.n, pair.hbar, policy) {}

  const RingGeometry& geometry() const { return geom_; }
  const CausticPolicy& policy() const { return policy_; }
  int l() const { return l_; }
  double hbar() const { return geom_.hbar; }

  /// Layer widths at the inner and outer caustic (before the multiplier cap).
  double inner_layer() const { return w_inner_; }
  double outer_layer() const { return w_outer_; }

  /// True inside one of the clamped boundary layers.
  bool in_caustic_layer(double r) const;

  double phi(double r) const { return symplectic_area_phi(geom_, r); }
  /// 1 / (sqrt(pi^3 hbar / 2) D), clamped per policy; 0 outside the open ring.
  double amplitude(double r) const;
  /// cos(phi/hbar - pi/4) * amplitude: the radial factor of the expression.
  double radial(double r) const;

  Complex operator()(const PhasePoint& x) const;
  Complex operator()(double r, double theta) const;

 private:
  RingGeometry geom_;
  CausticPolicy policy_;
  int l_ = 0;
  double w_inner_ = 0.0;
  double w_outer_ = 0.0;
};

/// Airy width (hbar / 2c)^{2/3} of a fold caustic where T^2 ~ c^2 |r - r_c|.
double airy_layer_width(const RingGeometry& geom, double r_caustic);

/// Semiclassical M_m^n at x; M_n^m is its conjugate.
Complex semi_moyal(int m, int n, double hbar, const PhasePoint& x, CausticPolicy policy = {});
inline Complex semi_moyal(const FockPair& pair, const PhasePoint& x, CausticPolicy policy = {}) {
  return semi_moyal(pair.m, pair.n, pair.hbar, x, policy);
}
inline double semi_wigner(int n, double hbar, const PhasePoint& x, CausticPolicy policy = {}) {
  return semi_moyal(n, n, hbar, x, policy).real();
}

/// Re{M_m^n(x1) M_n^m(x2)} in the product form with the cos(l (theta1 - theta2)) factor.
double cross_term(const FockPair& pair, const PhasePoint& x1, const PhasePoint& x2, CausticPolicy policy = {});

}  // namespace moyalab
