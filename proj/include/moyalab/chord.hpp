// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file chord.hpp
 * @brief Chords of the phase branches phi^+- = phi(r) +- lambda theta, classical
 *        transport of their tips, and the closed-form cubic/quartic phase shifts.
 *
 * With J(q, p) = (p, -q) the chord of branch +- is
 *
 *     xi = -J grad phi^+- = 2 T theta_hat +- (lambda / r) r_hat,
 *
 * where T = sqrt(e_total - (lambda/2r)^2 - r^2). Its tips x +- xi/2 sit on
 * the circles of radius R_m and R_n.
 */

#pragma once

#include "moyalab/core.hpp"
#include "moyalab/semiclassical.hpp"

namespace moyalab {

enum class Branch { plus = +1, minus = -1 };

inline double branch_sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }
inline Branch opposite(Branch b) { return b == Branch::plus ? Branch::minus : Branch::plus; }

struct Chord {
  PhasePoint center = PhasePoint::Zero();
  Branch branch = Branch::plus;
  PhasePoint tip_plus = PhasePoint::Zero();
  PhasePoint tip_minus = PhasePoint::Zero();
  PhasePoint xi = PhasePoint::Zero();
  bool degenerate = false;  ///< center inside a caustic layer; tips nearly tangent

  /// Same segment traversed the other way (tips swapped, xi -> -xi).
  Chord reversed() const;
};

/// phi(r) +- lambda theta with theta in [0, 2 pi).
double phase_branch(const FockPair& pair, const Polar& x2, Branch branch);

/// grad phi^+- in (q, p) components.
PhasePoint phase_branch_gradient(const FockPair& pair, const Polar& x2, Branch branch);

/// Chord of a branch at a point of the open ring. DomainError outside it;
/// within the caustic layers the chord is returned with degenerate = true.
Chord chord_from_phase(const FockPair& pair, const PhasePoint& x2, Branch branch,
                       CausticPolicy policy = {});

enum class InteractionKind { quadratic, cubic, quartic };

/// How the tips move during the interaction interval.
enum class FlowMode {
  oscillator_plus_perturbation,  ///< H = H_2 + alpha q^k / k
  perturbation_only,             ///< H = alpha q^k / k (an impulsive kick)
};

/// Interaction alpha q^k / k acting on oscillator 2 for a time t, with
/// strength epsilon = alpha t. The quadratic kind gives a linear flow.
struct InteractionSpec {
  InteractionKind kind = InteractionKind::cubic;
  double epsilon = 0.0;
  double time = 1.0;
  FlowMode mode = FlowMode::oscillator_plus_perturbation;

  double alpha() const { return epsilon / time; }
  int power() const { return kind == InteractionKind::quadratic ? 2 : kind == InteractionKind::cubic ? 3 : 4; }
  void validate() const;

  /// H at a phase point.
  double hamiltonian(const PhasePoint& x) const;
  /// J grad H.
  PhasePoint velocity(const PhasePoint& x) const;
};

const char* to_string(InteractionKind k);
const char* to_string(FlowMode m);
InteractionKind parse_interaction_kind(const std::string& s);
FlowMode parse_flow_mode(const std::string& s);

struct FlowResult {
  PhasePoint tip_plus = PhasePoint::Zero();   ///< evolved tips
  PhasePoint tip_minus = PhasePoint::Zero();
  PhasePoint midpoint_t = PhasePoint::Zero();
  PhasePoint xi_t = PhasePoint::Zero();
  double action_plus = 0.0;   ///< int (p dq - H dt) along each tip
  double action_minus = 0.0;
  /// Midpoint phase difference: chord area at t = 0 plus the tip actions minus
  /// the chord area at time t. Zero for a rigid rotation.
  double phase_difference = 0.0;
};

/// Classical transport of both tips for interaction.time with per-step
/// tolerance 1e-10. Throws FlowEscapeError with the escape time.
FlowResult flow_tips(const Chord& chord, const InteractionSpec& interaction);

/// Flow of a single phase point for a (possibly negative) time.
PhasePoint flow_point(const PhasePoint& x, const InteractionSpec& interaction, double t);

struct PhaseShift {
  double plus = 0.0;
  double minus = 0.0;
  bool allowed = true;  ///< false when the energy-shell bracket is negative (shifts set to 0)
};

/// (2 eps / 3) {sin(theta) sqrt(e - (lambda/2r)^2 - r^2) +- cos(theta) lambda/2r}^3
PhaseShift phase_shift_cubic(double r2, double theta2, double lambda, double epsilon, double e_total);

/// 2 eps r cos(theta) {sin(theta) sqrt(e - (lambda/2r)^2 - r^2) +- cos(theta) lambda/2r}^3
PhaseShift phase_shift_quartic(double r2, double theta2, double lambda, double epsilon, double e_total);

/// Dispatch on kind; the quadratic kind has no phase shift (linear flows
/// transport Weyl symbols without one).
PhaseShift phase_shift(InteractionKind kind, double r2, double theta2, double lambda, double epsilon,
                       double e_total);

/// The lambda = 0 formula with e_total = 2 e_n, for the diagonal terms.
double diagonal_phase_shift(InteractionKind kind, double r2, double theta2, double epsilon, double e_n);

/// The chord whose kicked flow reproduces the closed form with the given
/// label: the reversed chord of the opposite branch. Half its midpoint phase
/// difference under the perturbation-only flow matches phase_shift_*.
Chord chord_for_closed_form(const FockPair& pair, const PhasePoint& x2, Branch label, CausticPolicy policy = {});

}  // namespace moyalab
