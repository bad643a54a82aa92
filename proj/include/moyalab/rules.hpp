// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <memory>

namespace moyalab {

/// Nodes and weights of a fixed quadrature rule.
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  int order() const { return static_cast<int>(nodes.size()); }
};

/// Gauss-Legendre rule on [-1, 1]. Rules are cached and immutable.
std::shared_ptr<const GaussRule> gauss_legendre(int order);

/// Gauss-Hermite rule with weights multiplied by exp(u^2), so that
/// sum_i w_i f(u_i) approximates the plain integral of a Gaussian-decaying f
/// without underflow at high order.
std::shared_ptr<const GaussRule> gauss_hermite_scaled(int order);

/// Integrate f over [a, b] with `panels` equal Gauss-Legendre panels.
template <typename F>
double composite_gauss(F&& f, double a, double b, int panels, int order) {
  const auto rule = gauss_legendre(order);
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double mid = a + (k + 0.5) * h;
    double s = 0.0;
    for (int i = 0; i < rule->order(); ++i) s += rule->weights[i] * f(mid + 0.5 * h * rule->nodes[i]);
    total += 0.5 * h * s;
  }
  return total;
}

}  // namespace moyalab
