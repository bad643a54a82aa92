// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fock.hpp
 * @brief Exact reference layer: oscillator eigenfunctions, Wigner and Moyal
 *        functions, and Fock-basis operator matrices.
 *
 * The Moyal function M_m^n is the Weyl symbol of |e_m><e_n|,
 *
 *     M_m^n(q, p) = (1 / pi hbar) int psi_m(q + y) psi_n(q - y) exp(-2 i p y / hbar) dy,
 *
 * normalized so that the Wigner function W_n = M_n^n integrates to one.
 * Two independent routes are provided: Gauss-Hermite quadrature of the Weyl
 * integral (exact_moyal) and the associated-Laguerre closed form
 * (moyal_laguerre, MoyalTable).
 */

#pragma once

#include "moyalab/core.hpp"

#include <Eigen/Dense>

namespace moyalab {

struct WeylQuadrature {
  Complex value;
  int order = 0;          ///< Gauss-Hermite order of the accepted value
  double difference = 0;  ///< |value(order) - value(order / 2)|
};

/// Weyl-integral quadrature with order doubling from 4 max(m, n) + 40 until
/// successive values agree to `tol`. Throws ConvergenceError otherwise.
WeylQuadrature weyl_moyal(int m, int n, const PhasePoint& x, double hbar, double tol = 1e-10);

inline Complex exact_moyal(int m, int n, const PhasePoint& x, double hbar) {
  return weyl_moyal(m, n, x, hbar).value;
}

inline double exact_wigner(int n, const PhasePoint& x, double hbar) {
  return weyl_moyal(n, n, x, hbar).value.real();
}

/// Laguerre closed form of M_m^n, the second oracle.
Complex moyal_laguerre(int m, int n, const PhasePoint& x, double hbar);

/// All M_j^k(x), 0 <= j, k <= nmax, at one phase point, built with one
/// Laguerre recurrence per diagonal.
class MoyalTable {
 public:
  MoyalTable(int nmax, const PhasePoint& x, double hbar);

  Complex operator()(int j, int k) const { return table_(j, k); }
  const Eigen::MatrixXcd& matrix() const { return table_; }

  /// Weyl symbol of the operator sum_jk rho_jk |j><k| at the table point.
  double weyl_symbol(const Eigen::MatrixXcd& rho) const;

 private:
  Eigen::MatrixXcd table_;
};

/// Exact two-oscillator Wigner function of the (anti)symmetrised eigenstate.
double entangled_wigner_exact(const FockPair& pair, const PhasePoint& x1, const PhasePoint& x2);

/// Fock matrix of q^k (k = 3 or 4) in the first N levels.
Eigen::MatrixXd position_power_matrix(int k, int N, double hbar);

/// Coefficient matrix C(j, k) over |j>_1 |k>_2 of a two-oscillator state.
struct TruncatedState {
  Eigen::MatrixXcd coeffs;
  double hbar = 1.0;
  int sign = +1;

  int dimension() const { return static_cast<int>(coeffs.rows()); }
  double norm() const { return coeffs.norm(); }

  /// Reduced density matrix of oscillator 1, rho_1 = C C^dagger.
  Eigen::MatrixXcd reduced_density_1() const { return coeffs * coeffs.adjoint(); }

  /// Same state embedded in a larger truncation.
  TruncatedState enlarged(int new_dimension) const;
};

/// Default truncation m + n + 32.
inline int default_truncation(const FockPair& pair) { return pair.m + pair.n + 32; }

TruncatedState entangled_state(const FockPair& pair, int dimension);

inline TruncatedState entangled_state(const FockPair& pair) {
  return entangled_state(pair, default_truncation(pair));
}

}  // namespace moyalab
