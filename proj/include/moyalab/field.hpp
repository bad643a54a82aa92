// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file field.hpp
 * @brief Sampled phase-space functions on polar or cartesian grids.
 *
 * Polar grids are uniform in r on [r_min, r_max] (endpoints included) and
 * uniform in theta on [0, 2 pi) (periodic). Weights are the trapezoid rule
 * in both directions with the Jacobian r folded in, so a constant
 * integrates to the annulus area exactly.
 */

#pragma once

#include "moyalab/core.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <variant>

namespace moyalab {

struct PolarGrid {
  double r_min = 0.0;
  double r_max = 1.0;
  int nr = 64;   ///< radial intervals; nr + 1 nodes
  int nth = 64;  ///< angular nodes

  PolarGrid() = default;
  PolarGrid(double r_min_, double r_max_, int nr_, int nth_);

  int size() const { return (nr + 1) * nth; }
  int index(int i, int j) const { return i * nth + j; }
  double dr() const { return (r_max - r_min) / nr; }
  double dtheta() const { return kTwoPi / nth; }
  double r(int i) const { return r_min + i * dr(); }
  double theta(int j) const { return j * dtheta(); }
  PhasePoint point(int k) const { return from_polar(r(k / nth), theta(k % nth)); }
  double weight(int k) const;
  double area() const { return kPi * (r_max * r_max - r_min * r_min); }
};

struct CartesianGrid {
  double q_min = -1.0, q_max = 1.0;
  double p_min = -1.0, p_max = 1.0;
  int nq = 64;  ///< nodes along q (endpoints included)
  int np = 64;

  int size() const { return nq * np; }
  int index(int i, int j) const { return i * np + j; }
  double dq() const { return (q_max - q_min) / (nq - 1); }
  double dp() const { return (p_max - p_min) / (np - 1); }
  PhasePoint point(int k) const { return PhasePoint(q_min + (k / np) * dq(), p_min + (k % np) * dp()); }
  double weight(int k) const;
  double area() const { return (q_max - q_min) * (p_max - p_min); }
};

using GridSpec = std::variant<PolarGrid, CartesianGrid>;

int grid_size(const GridSpec& g);
PhasePoint grid_point(const GridSpec& g, int k);
double grid_weight(const GridSpec& g, int k);

struct FieldMeta {
  double hbar = 1.0;
  int m = -1, n = -1, sign = 0;  ///< pair, when the field belongs to one
  std::string channel;           ///< e.g. "exact", "semiclassical", "liouville"
  double time = 0.0;             ///< evolution time of the samples
};

class PhaseSpaceField {
 public:
  PhaseSpaceField() = default;
  PhaseSpaceField(GridSpec grid, Eigen::VectorXcd values, bool complex_valued, FieldMeta meta = {});

  /// Sample f at every grid node.
  static PhaseSpaceField sample(const GridSpec& grid, const std::function<Complex(const PhasePoint&)>& f,
                                bool complex_valued, FieldMeta meta = {});

  const GridSpec& grid() const { return grid_; }
  const Eigen::VectorXcd& values() const { return values_; }
  Eigen::VectorXcd& values() { return values_; }
  bool is_complex() const { return complex_; }
  const FieldMeta& meta() const { return meta_; }
  FieldMeta& meta() { return meta_; }
  int size() const { return static_cast<int>(values_.size()); }

  /// Sum of weight * value (pairwise summation over nodes).
  Complex integral() const;

  /// Catmull-Rom bicubic interpolation in (r, theta), periodic in theta and
  /// reflected through the origin when the stencil crosses r = 0; zero
  /// beyond r_max. Polar grids only.
  Complex interpolate(const PhasePoint& x) const;

 private:
  GridSpec grid_;
  Eigen::VectorXcd values_;
  bool complex_ = false;
  FieldMeta meta_;
};

}  // namespace moyalab
