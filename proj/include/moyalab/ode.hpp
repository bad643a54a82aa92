// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file ode.hpp
 * @brief Dormand-Prince 5(4) integrator with mixed absolute/relative step control.
 */

#pragma once

#include "moyalab/core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace moyalab {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  double initial_step = 1e-2;
  double min_step = 1e-14;
  long max_steps = 2000000;
  double escape_norm = 1e8;  ///< |y| beyond this counts as escape to infinity
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
};

/// Integrate y' = f(t, y) from t0 to t1 (either direction). Throws
/// FlowEscapeError when the step size collapses or the state blows up.
template <typename Vec, typename F>
Vec integrate_dp45(F&& f, Vec y, double t0, double t1, const OdeOptions& opt = {}, OdeStats* stats = nullptr) {
  if (t0 == t1) return y;
  // Dormand-Prince tableau
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double dir = t1 > t0 ? 1.0 : -1.0;
  double t = t0;
  double h = dir * std::min(opt.initial_step, std::abs(t1 - t0));
  Vec k1 = f(t, y);
  long steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > opt.max_steps) throw FlowEscapeError("ODE step budget exhausted", t);
    if (dir * (t + h - t1) > 0.0) h = t1 - t;
    const Vec k2 = f(t + c2 * h, (y + h * (a21 * k1)).eval());
    const Vec k3 = f(t + c3 * h, (y + h * (a31 * k1 + a32 * k2)).eval());
    const Vec k4 = f(t + c4 * h, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
    const Vec k5 = f(t + c5 * h, (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
    const Vec k6 = f(t + h, (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
    const Vec y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec k7 = f(t + h, y5);
    const Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const Vec scale = (opt.atol + opt.rtol * y.cwiseAbs().cwiseMax(y5.cwiseAbs()).array()).matrix();
    const double en = std::sqrt((err.array() / scale.array()).square().mean());
    if (!std::isfinite(en)) {
      h *= 0.2;
    } else if (en <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;
      if (stats) ++stats->accepted;
      if (!y.allFinite() || y.norm() > opt.escape_norm) throw FlowEscapeError("trajectory escaped", t);
      h *= std::clamp(0.9 * std::pow(std::max(en, 1e-10), -0.2), 0.2, 5.0);
    } else {
      if (stats) ++stats->rejected;
      h *= std::clamp(0.9 * std::pow(en, -0.25), 0.1, 0.9);
    }
    if (std::abs(h) < opt.min_step && dir * (t1 - t) > opt.min_step)
      throw FlowEscapeError("ODE step size collapsed", t);
  }
  return y;
}

}  // namespace moyalab
