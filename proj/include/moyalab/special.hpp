// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

namespace moyalab {

/// Largest oscillator index accepted by the Hermite kernels.
inline constexpr int kMaxHermiteIndex = 4096;

/// Normalized oscillator eigenfunction psi_n(q) for H = (p^2 + q^2)/2,
/// real with positive leading coefficient. Throws RangeError outside the
/// stable range.
double hermite_psi(int n, double q, double hbar);

/// psi_0(q) ... psi_nmax(q) in one upward recurrence.
Eigen::VectorXd hermite_table(int nmax, double q, double hbar);

struct AiryValue {
  double ai = 0.0;
  double aip = 0.0;  ///< derivative Ai'(x)
};

/// Airy function Ai and its derivative. Maclaurin series near the origin,
/// the exponentially scaled integral representation for x > 0 and the
/// oscillatory asymptotic expansion far on the negative axis.
AiryValue airy(double x);

inline double airy_ai(double x) { return airy(x).ai; }

}  // namespace moyalab
