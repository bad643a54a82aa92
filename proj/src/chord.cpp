// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moyalab/chord.hpp"

#include "moyalab/ode.hpp"

#include <cmath>
#include <string>

namespace moyalab {

Chord Chord::reversed() const {
  Chord c = *this;
  std::swap(c.tip_plus, c.tip_minus);
  c.xi = -xi;
  return c;
}

double phase_branch(const FockPair& pair, const Polar& x2, Branch branch) {
  const RingGeometry g(pair);
  return symplectic_area_phi(g, x2.r) + branch_sign(branch) * pair.lambda() * canonical_angle(x2.theta);
}

PhasePoint phase_branch_gradient(const FockPair& pair, const Polar& x2, Branch branch) {
  const RingGeometry g(pair);
  if (!(x2.r > 0.0)) throw DomainError("phase branch gradient undefined at the origin");
  const double dr = phi_derivative(g, x2.r);
  return dr * radial_unit(x2.theta) + (branch_sign(branch) * pair.lambda() / x2.r) * angular_unit(x2.theta);
}

Chord chord_from_phase(const FockPair& pair, const PhasePoint& x2, Branch branch, CausticPolicy policy) {
  const SemiclassicalMoyal sm(pair, policy);
  const RingGeometry& g = sm.geometry();
  const Polar pol = to_polar(x2);
  const bool diagonal = pair.l() == 0;
  if (!(pol.r < g.r_plus) || (!diagonal && !(pol.r > g.r_minus)))
    throw DomainError("chord requested outside the open ring");
  Chord c;
  c.center = x2;
  c.branch = branch;
  c.degenerate = sm.in_caustic_layer(pol.r);
  if (pol.r == 0.0) {
    // only reachable for m == n; any diameter is a chord
    c.xi = 2.0 * g.R_m * angular_unit(0.0);
  } else {
    c.xi = -symplectic_J(phase_branch_gradient(pair, pol, branch));
  }
  c.tip_plus = x2 + 0.5 * c.xi;
  c.tip_minus = x2 - 0.5 * c.xi;
  return c;
}

Chord chord_for_closed_form(const FockPair& pair, const PhasePoint& x2, Branch label, CausticPolicy policy) {
  return chord_from_phase(pair, x2, opposite(label), policy).reversed();
}

// ---------------------------------------------------------------------------

void InteractionSpec::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw DomainError("interaction strength must be >= 0");
  if (!(time > 0.0) || !std::isfinite(time)) throw DomainError("interaction time must be > 0");
}

double InteractionSpec::hamiltonian(const PhasePoint& x) const {
  const int k = power();
  const double pert = alpha() * std::pow(x.x(), k) / k;
  if (mode == FlowMode::perturbation_only) return pert;
  return 0.5 * x.squaredNorm() + pert;
}

PhasePoint InteractionSpec::velocity(const PhasePoint& x) const {
  const int k = power();
  double dHdq = alpha() * std::pow(x.x(), k - 1);
  double dHdp = 0.0;
  if (mode == FlowMode::oscillator_plus_perturbation) {
    dHdq += x.x();
    dHdp = x.y();
  }
  return PhasePoint(dHdp, -dHdq);
}

const char* to_string(InteractionKind k) {
  switch (k) {
    case InteractionKind::quadratic: return "quadratic";
    case InteractionKind::cubic: return "cubic";
    case InteractionKind::quartic: return "quartic";
  }
  return "?";
}

const char* to_string(FlowMode m) {
  return m == FlowMode::perturbation_only ? "perturbation_only" : "oscillator_plus_perturbation";
}

InteractionKind parse_interaction_kind(const std::string& s) {
  if (s == "cubic") return InteractionKind::cubic;
  if (s == "quartic") return InteractionKind::quartic;
  if (s == "quadratic") return InteractionKind::quadratic;
  throw DomainError("unknown interaction kind '" + s + "'");
}

FlowMode parse_flow_mode(const std::string& s) {
  if (s == "oscillator_plus_perturbation" || s == "full") return FlowMode::oscillator_plus_perturbation;
  if (s == "perturbation_only" || s == "kick") return FlowMode::perturbation_only;
  throw DomainError("unknown flow mode '" + s + "'");
}

namespace {

using State6 = Eigen::Matrix<double, 6, 1>;

// Signed area term (p_a + p_b)/2 (q_b - q_a) of the straight chord from a to b.
double chord_area(const PhasePoint& a, const PhasePoint& b) {
  return 0.5 * (a.y() + b.y()) * (b.x() - a.x());
}

}  // namespace

FlowResult flow_tips(const Chord& chord, const InteractionSpec& in) {
  in.validate();
  auto rhs = [&](double, const State6& y) {
    State6 d;
    for (int s = 0; s < 2; ++s) {
      const PhasePoint x(y[3 * s], y[3 * s + 1]);
      const PhasePoint v = in.velocity(x);
      d[3 * s] = v.x();
      d[3 * s + 1] = v.y();
      d[3 * s + 2] = x.y() * v.x() - in.hamiltonian(x);
    }
    return d;
  };
  State6 y0;
  y0 << chord.tip_plus.x(), chord.tip_plus.y(), 0.0, chord.tip_minus.x(), chord.tip_minus.y(), 0.0;
  const State6 y = integrate_dp45(rhs, y0, 0.0, in.time);
  FlowResult r;
  r.tip_plus = PhasePoint(y[0], y[1]);
  r.tip_minus = PhasePoint(y[3], y[4]);
  r.action_plus = y[2];
  r.action_minus = y[5];
  r.midpoint_t = 0.5 * (r.tip_plus + r.tip_minus);
  r.xi_t = r.tip_plus - r.tip_minus;
  r.phase_difference = chord_area(chord.tip_minus, chord.tip_plus) + r.action_plus -
                       chord_area(r.tip_minus, r.tip_plus) - r.action_minus;
  return r;
}

PhasePoint flow_point(const PhasePoint& x, const InteractionSpec& in, double t) {
  if (t == 0.0) return x;
  auto rhs = [&](double, const Eigen::Vector2d& y) { return Eigen::Vector2d(in.velocity(y)); };
  return integrate_dp45(rhs, Eigen::Vector2d(x), 0.0, t);
}

// ---------------------------------------------------------------------------

namespace {

// Returns false when the bracket is negative.
bool shift_brace(double r, double theta, double lambda, double e_total, double& plus, double& minus) {
  if (!(r > 0.0)) {
    if (lambda != 0.0) return false;
    plus = minus = std::sin(theta) * std::sqrt(std::max(0.0, e_total));
    return e_total >= 0.0;
  }
  const double a = lambda / (2.0 * r);
  const double bracket = e_total - a * a - r * r;
  if (bracket < 0.0) return false;
  const double s = std::sin(theta) * std::sqrt(bracket);
  const double c = std::cos(theta) * a;
  plus = s + c;
  minus = s - c;
  return true;
}

}  // namespace

PhaseShift phase_shift_cubic(double r2, double theta2, double lambda, double epsilon, double e_total) {
  PhaseShift out;
  double bp, bm;
  if (!shift_brace(r2, theta2, lambda, e_total, bp, bm)) {
    out.allowed = false;
    return out;
  }
  const double k = 2.0 * epsilon / 3.0;
  out.plus = k * bp * bp * bp;
  out.minus = k * bm * bm * bm;
  return out;
}

PhaseShift phase_shift_quartic(double r2, double theta2, double lambda, double epsilon, double e_total) {
  PhaseShift out;
  double bp, bm;
  if (!shift_brace(r2, theta2, lambda, e_total, bp, bm)) {
    out.allowed = false;
    return out;
  }
  const double k = 2.0 * epsilon * r2 * std::cos(theta2);
  out.plus = k * bp * bp * bp;
  out.minus = k * bm * bm * bm;
  return out;
}

PhaseShift phase_shift(InteractionKind kind, double r2, double theta2, double lambda, double epsilon,
                       double e_total) {
  switch (kind) {
    case InteractionKind::cubic: return phase_shift_cubic(r2, theta2, lambda, epsilon, e_total);
    case InteractionKind::quartic: return phase_shift_quartic(r2, theta2, lambda, epsilon, e_total);
    case InteractionKind::quadratic: break;
  }
  return {};
}

double diagonal_phase_shift(InteractionKind kind, double r2, double theta2, double epsilon, double e_n) {
  return phase_shift(kind, r2, theta2, 0.0, epsilon, 2.0 * e_n).plus;
}

}  // namespace moyalab
