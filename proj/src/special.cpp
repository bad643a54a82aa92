// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moyalab/special.hpp"

#include "moyalab/core.hpp"
#include "moyalab/rules.hpp"

#include <cmath>
#include <string>

namespace moyalab {

namespace {

constexpr double kRescale = 1e200;
const double kLogRescale = std::log(kRescale);

void check_hermite_args(int n, double q, double hbar) {
  if (n < 0 || n > kMaxHermiteIndex)
    throw RangeError("hermite index " + std::to_string(n) + " outside [0, " +
                     std::to_string(kMaxHermiteIndex) + "]");
  if (!std::isfinite(q)) throw RangeError("hermite argument is not finite");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw RangeError("hbar must be positive and finite");
}

}  // namespace

// The recurrence runs on h_k(u) = hbar^{1/4} psi_k(sqrt(hbar) u) with the
// Gaussian factor carried separately as a log-scale, so large |u| neither
// underflows the seed nor overflows the intermediate values.
double hermite_psi(int n, double q, double hbar) {
  check_hermite_args(n, q, hbar);
  const double u = q / std::sqrt(hbar);
  double log_scale = -0.5 * u * u;
  double prev = 0.0;
  double cur = std::pow(kPi, -0.25);
  for (int k = 0; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * u * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      log_scale += kLogRescale;
    }
  }
  const double value = cur * std::exp(log_scale) * std::pow(hbar, -0.25);
  if (!std::isfinite(value)) throw RangeError("hermite_psi overflow at n=" + std::to_string(n));
  return value;
}

Eigen::VectorXd hermite_table(int nmax, double q, double hbar) {
  check_hermite_args(nmax, q, hbar);
  Eigen::VectorXd out(nmax + 1);
  const double u = q / std::sqrt(hbar);
  const double norm = std::pow(hbar, -0.25);
  double log_scale = -0.5 * u * u;
  double prev = 0.0;
  double cur = std::pow(kPi, -0.25);
  out[0] = cur * std::exp(log_scale) * norm;
  for (int k = 0; k < nmax; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * u * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      log_scale += kLogRescale;
    }
    out[k + 1] = cur * std::exp(log_scale) * norm;
  }
  if (!out.allFinite()) throw RangeError("hermite_table overflow");
  return out;
}

// ---------------------------------------------------------------------------
// Airy
// ---------------------------------------------------------------------------

namespace {

constexpr long double kAi0 = 0.355028053887817239260063186004183176L;
constexpr long double kAip0 = -0.258819403792806798405183560189203963L;

AiryValue airy_series(double xd) {
  const long double x = xd;
  const long double x3 = x * x * x;
  long double a = 1.0L, f = 0.0L;   // f(x)
  long double b = x, g = 0.0L;      // g(x)
  long double c = 0.5L * x * x, fp = 0.0L;
  long double d = 1.0L, gp = 0.0L;
  for (int k = 0; k < 400; ++k) {
    f += a;
    g += b;
    fp += c;
    gp += d;
    const long double kk = k;
    a *= x3 / ((3 * kk + 2) * (3 * kk + 3));
    b *= x3 / ((3 * kk + 3) * (3 * kk + 4));
    c *= x3 / ((3 * kk + 3) * (3 * kk + 5));
    d *= x3 / ((3 * kk + 1) * (3 * kk + 3));
    const long double tiny = 1e-22L;
    if (k > 4 && std::abs(a) < tiny * (1 + std::abs(f)) && std::abs(b) < tiny * (1 + std::abs(g)) &&
        std::abs(c) < tiny * (1 + std::abs(fp)) && std::abs(d) < tiny * (1 + std::abs(gp)))
      break;
  }
  // Ai = Ai(0) f + Ai'(0) g
  return {static_cast<double>(kAi0 * f + kAip0 * g), static_cast<double>(kAi0 * fp + kAip0 * gp)};
}

// Ai(x) = exp(-zeta)/pi * int_0^inf exp(-sqrt(x) t^2) cos(t^3/3) dt for x > 0.
AiryValue airy_integral(double x) {
  const double sx = std::sqrt(x);
  const double zeta = 2.0 / 3.0 * x * sx;
  const double t_max = std::sqrt(46.0 / sx);
  const int panels = 16;
  const auto rule = gauss_legendre(32);
  const double h = t_max / panels;
  double i0 = 0.0, i2 = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double mid = (k + 0.5) * h;
    for (int j = 0; j < rule->order(); ++j) {
      const double t = mid + 0.5 * h * rule->nodes[j];
      const double w = 0.5 * h * rule->weights[j] * std::exp(-sx * t * t) * std::cos(t * t * t / 3.0);
      i0 += w;
      i2 += w * t * t;
    }
  }
  const double pref = std::exp(-zeta) / kPi;
  const double ai = pref * i0;
  const double aip = -sx * ai - pref * i2 / (2.0 * sx);
  return {ai, aip};
}

AiryValue airy_negative_asymptotic(double x) {
  const double z = -x;
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  // u_k and v_k coefficients, summed to the smallest term.
  double u = 1.0;
  double p_even = 0.0, p_odd = 0.0, q_even = 0.0, q_odd = 0.0;
  double zpow = 1.0;
  double last = 1e300;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
    const double v = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u;
    const double term_u = u / zpow;
    if (std::abs(term_u) > last) break;
    last = std::abs(term_u);
    const double sgn = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p_even += sgn * term_u;
      q_even += sgn * v / zpow;
    } else {
      p_odd += sgn * term_u;
      q_odd += sgn * v / zpow;
    }
    zpow *= zeta;
    if (last < 1e-18) break;
  }
  const double chi = zeta - kPi / 4.0;
  const double z14 = std::pow(z, 0.25);
  const double ai = (std::cos(chi) * p_even + std::sin(chi) * p_odd) / (std::sqrt(kPi) * z14);
  const double aip = z14 * (std::sin(chi) * q_even - std::cos(chi) * q_odd) / std::sqrt(kPi);
  return {ai, aip};
}

}  // namespace

AiryValue airy(double x) {
  if (!std::isfinite(x)) throw RangeError("airy argument is not finite");
  if (x > 2.0) return airy_integral(x);
  if (x >= -9.0) return airy_series(x);
  return airy_negative_asymptotic(x);
}

}  // namespace moyalab
