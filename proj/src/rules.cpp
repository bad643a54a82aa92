// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moyalab/rules.hpp"

#include "moyalab/core.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>

namespace moyalab {

namespace {

GaussRule build_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

// Normalized Hermite functions h_{K-1}, h_K at u as mantissas sharing a log-scale.
struct HermitePair {
  double prev, cur, log_scale;
};

HermitePair hermite_pair(int order, double u) {
  double log_scale = -0.5 * u * u;
  double prev = 0.0;
  double cur = std::pow(kPi, -0.25);
  for (int k = 0; k < order; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * u * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e200) {
      cur /= 1e200;
      prev /= 1e200;
      log_scale += std::log(1e200);
    }
  }
  return {prev, cur, log_scale};
}

GaussRule build_hermite_scaled(int n) {
  // Golub-Welsch seed, Newton polish on the orthonormal recurrence.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  GaussRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double u = rule.nodes[i];
    for (int it = 0; it < 10; ++it) {
      const HermitePair h = hermite_pair(n, u);
      const double du = h.cur / (std::sqrt(2.0 * n) * h.prev);
      u -= du;
      if (std::abs(du) < 1e-15 * std::max(1.0, std::abs(u))) break;
    }
    const HermitePair h = hermite_pair(n, u);
    rule.nodes[i] = u;
    rule.weights[i] = std::exp(-2.0 * h.log_scale - std::log(n * h.prev * h.prev));
  }
  return rule;
}

template <typename Builder>
std::shared_ptr<const GaussRule> cached(std::map<int, std::shared_ptr<const GaussRule>>& cache, std::mutex& mu,
                                        int order, Builder build) {
  if (order < 1) throw DomainError("quadrature order must be positive");
  std::lock_guard lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  auto rule = std::make_shared<const GaussRule>(build(order));
  cache.emplace(order, rule);
  return rule;
}

}  // namespace

std::shared_ptr<const GaussRule> gauss_legendre(int order) {
  static std::map<int, std::shared_ptr<const GaussRule>> cache;
  static std::mutex mu;
  return cached(cache, mu, order, build_legendre);
}

std::shared_ptr<const GaussRule> gauss_hermite_scaled(int order) {
  static std::map<int, std::shared_ptr<const GaussRule>> cache;
  static std::mutex mu;
  return cached(cache, mu, order, build_hermite_scaled);
}

}  // namespace moyalab
