// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file core.hpp
 * @brief Phase-space points, polar conventions, Fock pairs and the error types
 *        shared by every module.
 *
 * Phase points are Eigen 2-vectors x = (q, p). The polar angle is measured
 * along the harmonic flow (clockwise in the (q, p) plane):
 *
 *     q = r cos(theta),  p = -r sin(theta)
 *
 * so that the oscillator flow simply advances theta, and the Weyl symbol of
 * |e_m><e_n| carries the angular factor exp(i (m - n) theta).
 */

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace moyalab {

using Complex = std::complex<double>;
using PhasePoint = Eigen::Vector2d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the numerically stable range of a kernel.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point outside the domain where an expression is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two successive resolutions disagree beyond tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double coarse, double fine)
      : Error(what), coarse_(coarse), fine_(fine) {}
  double coarse() const { return coarse_; }
  double fine() const { return fine_; }

 private:
  double coarse_;
  double fine_;
};

/// Fock truncation still leaks population into the top levels.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double tail_mass)
      : Error(what), tail_mass_(tail_mass) {}
  double tail_mass() const { return tail_mass_; }

 private:
  double tail_mass_;
};

/// A trajectory left every bounded region before the requested time.
class FlowEscapeError : public Error {
 public:
  FlowEscapeError(const std::string& what, double escape_time)
      : Error(what), escape_time_(escape_time) {}
  double escape_time() const { return escape_time_; }

 private:
  double escape_time_;
};

// ---------------------------------------------------------------------------
// Polar coordinates
// ---------------------------------------------------------------------------

struct Polar {
  double r = 0.0;
  double theta = 0.0;
};

/// Reduce an angle to [0, 2 pi).
inline double canonical_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

inline PhasePoint from_polar(double r, double theta) {
  return PhasePoint(r * std::cos(theta), -r * std::sin(theta));
}

inline PhasePoint from_polar(const Polar& x) { return from_polar(x.r, x.theta); }

inline Polar to_polar(const PhasePoint& x) {
  return {std::hypot(x.x(), x.y()), canonical_angle(std::atan2(-x.y(), x.x()))};
}

/// Unit vectors of the flow-oriented polar frame.
inline PhasePoint radial_unit(double theta) {
  return PhasePoint(std::cos(theta), -std::sin(theta));
}
inline PhasePoint angular_unit(double theta) {
  return PhasePoint(-std::sin(theta), -std::cos(theta));
}

/// Symplectic rotation J(q, p) = (p, -q); Hamilton's equations read x' = J grad H.
inline PhasePoint symplectic_J(const PhasePoint& v) { return PhasePoint(v.y(), -v.x()); }

/// Symplectic form v ^ w = v_q w_p - v_p w_q.
inline double wedge(const PhasePoint& v, const PhasePoint& w) {
  return v.x() * w.y() - v.y() * w.x();
}

/// exp(i l theta) with the argument reduced before the multiplication.
inline Complex angular_phase(int l, double theta) {
  const double arg = canonical_angle(static_cast<double>(l) * canonical_angle(theta));
  return {std::cos(arg), std::sin(arg)};
}

// ---------------------------------------------------------------------------
// Fock pair
// ---------------------------------------------------------------------------

/// Quantum numbers of the (anti)symmetrised two-oscillator eigenstate
/// sqrt(2)|Psi> = |m>|n> + sign |n>|m>, with m > n.
struct FockPair {
  int m = 1;
  int n = 0;
  int sign = +1;
  double hbar = 1.0;

  FockPair() = default;
  FockPair(int m_, int n_, int sign_, double hbar_) : m(m_), n(n_), sign(sign_), hbar(hbar_) {
    validate();
  }

  void validate() const {
    if (n < 0 || m < n) throw DomainError("FockPair requires m >= n >= 0");
    if (sign != 1 && sign != -1) throw DomainError("FockPair sign must be +1 or -1");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("FockPair requires hbar > 0");
  }

  int l() const { return m - n; }
  double lambda() const { return l() * hbar; }
  double e_m() const { return (m + 0.5) * hbar; }
  double e_n() const { return (n + 0.5) * hbar; }
  double e_total() const { return e_m() + e_n(); }
  double radius_m() const { return std::sqrt((2.0 * m + 1.0) * hbar); }
  double radius_n() const { return std::sqrt((2.0 * n + 1.0) * hbar); }
};

// ---------------------------------------------------------------------------
// Summation
// ---------------------------------------------------------------------------

/// Pairwise (cascade) summation; the association order depends only on size.
template <typename T>
T pairwise_sum(std::span<const T> v) {
  if (v.empty()) return T(0);
  if (v.size() <= 8) {
    T s(0);
    for (const T& x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(std::span<const T>(v));
}

}  // namespace moyalab
