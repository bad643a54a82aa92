// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moyalab/fock.hpp"

#include "moyalab/rules.hpp"
#include "moyalab/special.hpp"

#include <cmath>
#include <string>

namespace moyalab {

namespace {

constexpr int kMaxWeylOrder = 4096;

Complex weyl_sum(int m, int n, const PhasePoint& x, double hbar, int order) {
  const auto rule = gauss_hermite_scaled(order);
  const double sh = std::sqrt(hbar);
  const double q = x.x();
  const double p = x.y();
  double re = 0.0, im = 0.0;
  for (int i = 0; i < order; ++i) {
    const double u = rule->nodes[i];
    const double y = sh * u;
    const double f = rule->weights[i] * hermite_psi(m, q + y, hbar) * hermite_psi(n, q - y, hbar);
    if (f == 0.0) continue;
    const double arg = -2.0 * p * u / sh;
    re += f * std::cos(arg);
    im += f * std::sin(arg);
  }
  return Complex(re, im) * (sh / (kPi * hbar));
}

// h_k = (-1)^k-free Laguerre amplitudes sqrt(k!/(k+l)!) z^{l/2} e^{-z/2} L_k^{(l)}(z)
// for k = 0..kmax.
Eigen::VectorXd laguerre_column(int l, int kmax, double z) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(kmax + 1);
  if (z == 0.0) {
    if (l == 0) out.setOnes();
    return out;
  }
  double log_scale = 0.5 * l * std::log(z) - 0.5 * z - 0.5 * std::lgamma(l + 1.0);
  double prev = 0.0;
  double cur = 1.0;
  out[0] = std::exp(log_scale);
  for (int k = 0; k < kmax; ++k) {
    const double next = ((2.0 * k + l + 1.0 - z) * cur - std::sqrt(static_cast<double>(k) * (k + l)) * prev) /
                        std::sqrt((k + 1.0) * (k + l + 1.0));
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e200) {
      cur /= 1e200;
      prev /= 1e200;
      log_scale += std::log(1e200);
    }
    out[k + 1] = cur * std::exp(log_scale);
  }
  return out;
}

}  // namespace

WeylQuadrature weyl_moyal(int m, int n, const PhasePoint& x, double hbar, double tol) {
  if (m < 0 || n < 0) throw DomainError("Moyal indices must be non-negative");
  int order = 4 * std::max(m, n) + 40;
  Complex prev = weyl_sum(m, n, x, hbar, order);
  while (true) {
    const int next_order = 2 * order;
    if (next_order > kMaxWeylOrder) {
      throw ConvergenceError("Weyl quadrature did not converge for (m, n) = (" + std::to_string(m) + ", " +
                                 std::to_string(n) + ")",
                             prev.real(), prev.real());
    }
    const Complex cur = weyl_sum(m, n, x, hbar, next_order);
    const double diff = std::abs(cur - prev);
    if (diff <= tol) return {cur, next_order, diff};
    if (2 * next_order > kMaxWeylOrder)
      throw ConvergenceError("Weyl quadrature did not converge", std::abs(prev), std::abs(cur));
    prev = cur;
    order = next_order;
  }
}

Complex moyal_laguerre(int m, int n, const PhasePoint& x, double hbar) {
  if (m < 0 || n < 0) throw DomainError("Moyal indices must be non-negative");
  if (m < n) return std::conj(moyal_laguerre(n, m, x, hbar));
  const Polar pol = to_polar(x);
  const int l = m - n;
  const double z = 2.0 * pol.r * pol.r / hbar;
  const double h = laguerre_column(l, n, z)[n];
  const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
  return angular_phase(l, pol.theta) * (sgn * h / (kPi * hbar));
}

MoyalTable::MoyalTable(int nmax, const PhasePoint& x, double hbar) : table_(nmax + 1, nmax + 1) {
  const Polar pol = to_polar(x);
  const double z = 2.0 * pol.r * pol.r / hbar;
  for (int l = 0; l <= nmax; ++l) {
    const Eigen::VectorXd col = laguerre_column(l, nmax - l, z);
    const Complex phase = angular_phase(l, pol.theta) / (kPi * hbar);
    for (int k = 0; k + l <= nmax; ++k) {
      const Complex v = phase * ((k % 2 == 0) ? col[k] : -col[k]);
      table_(k + l, k) = v;
      table_(k, k + l) = std::conj(v);
    }
  }
}

double MoyalTable::weyl_symbol(const Eigen::MatrixXcd& rho) const {
  const Eigen::Index d = std::min(rho.rows(), table_.rows());
  return (rho.topLeftCorner(d, d).array() * table_.topLeftCorner(d, d).array()).sum().real();
}

double entangled_wigner_exact(const FockPair& pair, const PhasePoint& x1, const PhasePoint& x2) {
  const double h = pair.hbar;
  const double wm1 = moyal_laguerre(pair.m, pair.m, x1, h).real();
  const double wn1 = moyal_laguerre(pair.n, pair.n, x1, h).real();
  const double wm2 = moyal_laguerre(pair.m, pair.m, x2, h).real();
  const double wn2 = moyal_laguerre(pair.n, pair.n, x2, h).real();
  const Complex cross = moyal_laguerre(pair.m, pair.n, x1, h) * moyal_laguerre(pair.n, pair.m, x2, h);
  return 0.5 * (wm1 * wn2 + wn1 * wm2) + pair.sign * cross.real();
}

Eigen::MatrixXd position_power_matrix(int k, int N, double hbar) {
  if (k < 1 || k > 8) throw DomainError("position_power_matrix supports powers 1..8");
  if (N < 1) throw DomainError("truncation must be positive");
  const int M = N + k;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(M, M);
  const double s = std::sqrt(hbar / 2.0);
  for (int j = 0; j + 1 < M; ++j) {
    q(j, j + 1) = s * std::sqrt(j + 1.0);
    q(j + 1, j) = q(j, j + 1);
  }
  Eigen::MatrixXd out = q;
  for (int i = 1; i < k; ++i) out = out * q;
  return out.topLeftCorner(N, N);
}

TruncatedState TruncatedState::enlarged(int new_dimension) const {
  if (new_dimension < dimension()) throw DomainError("cannot shrink a truncated state");
  TruncatedState out{Eigen::MatrixXcd::Zero(new_dimension, new_dimension), hbar, sign};
  out.coeffs.topLeftCorner(dimension(), dimension()) = coeffs;
  return out;
}

TruncatedState entangled_state(const FockPair& pair, int dimension) {
  pair.validate();
  if (pair.m == pair.n) throw DomainError("entangled state requires m > n");
  if (dimension <= pair.m) throw DomainError("truncation must exceed m");
  TruncatedState s{Eigen::MatrixXcd::Zero(dimension, dimension), pair.hbar, pair.sign};
  s.coeffs(pair.m, pair.n) = 1.0 / std::sqrt(2.0);
  s.coeffs(pair.n, pair.m) = pair.sign / std::sqrt(2.0);
  return s;
}

}  // namespace moyalab
