// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file propagators.hpp
 * @brief The three evolution channels for oscillator 2 (exact quantum,
 *        classical Liouville, semiclassical phase shifts) and the reduced
 *        Wigner difference of oscillator 1.
 *
 * Only oscillator 2 interacts. x1-dependent factors are never touched, so
 * every channel reduces to a handful of x2-integrals:
 *
 *     dW1(x1) = 1/2 [W_m(x1) dN_n + W_n(x1) dN_m]
 *             +- R(r1) 1/2 [cos(l th1 - pi/4) dIc- - sin(l th1 - pi/4) dIs-
 *                          + cos(l th1 + pi/4) dIc+ + sin(l th1 + pi/4) dIs+]
 *
 * The Liouville channel transports cos(l th) R and sin(l th) R instead and
 * lands directly on the cos(l th1) / sin(l th1) coefficients dA, dB.
 *
 * with R the radial factor of the semiclassical Moyal function and
 * Ic+-, Is+- the x2-integrals of amplitude * cos / sin of the (shifted)
 * branch phase (phi^+- + s^+-)/hbar.
 */

#pragma once

#include "moyalab/chord.hpp"
#include "moyalab/field.hpp"
#include "moyalab/fock.hpp"
#include "moyalab/quadrature.hpp"
#include "moyalab/semiclassical.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace moyalab {

// ---------------------------------------------------------------------------
// Exact quantum channel
// ---------------------------------------------------------------------------

struct QuantumOptions {
  double tail_tolerance = 1e-10;  ///< population allowed in the top tail_levels levels
  int tail_levels = 4;
  int enlarge_step = 16;
  int max_enlargements = 3;
};

struct QuantumEvolution {
  TruncatedState state;
  double tail_mass = 0.0;
  int enlargements = 0;
  double norm_error = 0.0;  ///< |norm - 1| after evolution
};

/// Hamiltonian of oscillator 2 in the first N Fock levels.
Eigen::MatrixXd oscillator2_hamiltonian(const InteractionSpec& interaction, int N, double hbar);

/// Evolve oscillator 2 for interaction.time. The truncation is enlarged by
/// enlarge_step until the tail population is below tolerance; TruncationError
/// after max_enlargements.
QuantumEvolution quantum_evolve(const TruncatedState& state, const InteractionSpec& interaction,
                                const QuantumOptions& opt = {});

// ---------------------------------------------------------------------------
// Reduced fields
// ---------------------------------------------------------------------------

enum class Method { exact, liouville, semiclassical };

const char* to_string(Method m);
Method parse_method(const std::string& s);

struct ReducedField {
  GridSpec x1_grid;
  Eigen::VectorXd values;  ///< finer resolution
  Eigen::VectorXd coarse;  ///< coarser resolution (equal to values when no quadrature is involved)
  Method method = Method::exact;
  QuadStatus status = QuadStatus::converged;
  double estimate = 0.0;  ///< max |values - coarse|
  double max_abs = 0.0;
  double l1 = 0.0;
  std::map<std::string, double> diagnostics;

  /// Throws ConvergenceError when status is non_converged.
  void require_converged() const;
};

/// Wigner function of the reduced density matrix of oscillator 1 on the grid.
ReducedField reduced_wigner_exact(const TruncatedState& state, const GridSpec& x1_grid);

/// Default x1 grid: polar, r in [0, 1.1 r_+], at least 8 l angular samples.
PolarGrid default_x1_grid(const FockPair& pair, int nr = 48, int nth = 64);

// ---------------------------------------------------------------------------
// Liouville channel
// ---------------------------------------------------------------------------

/// Backward-characteristic transport: W_t(y) = W_0(flow_{-t}(y)). The
/// sampled version interpolates bicubically on the source polar grid.
PhaseSpaceField liouville_evolve(const PhaseSpaceField& field, const InteractionSpec& interaction, double t);

/// Same, with the initial field given as a function (no interpolation).
PhaseSpaceField liouville_evolve(const std::function<Complex(const PhasePoint&)>& initial, const GridSpec& grid,
                                 const InteractionSpec& interaction, double t, bool complex_valued = false);

/// 2x2 flow matrix of a linear (quadratic-kind) interaction over time t.
Eigen::Matrix2d linear_flow_matrix(const InteractionSpec& interaction, double t);

// ---------------------------------------------------------------------------
// Semiclassical channel
// ---------------------------------------------------------------------------

enum class ShiftModel {
  closed_form,   ///< phi^+- -> phi^+- + closed-form shift at the same point
  numeric_flow,  ///< evaluate at the back-mapped midpoint, shift by minus half the midpoint phase difference
};

const char* to_string(ShiftModel s);

/// The four-term semiclassical Wigner function of the pair after the
/// interaction. x1 factors are left untouched.
class SemiclassicalEvolution {
 public:
  SemiclassicalEvolution(const FockPair& pair, const InteractionSpec& interaction,
                         ShiftModel model = ShiftModel::closed_form, CausticPolicy policy = {});

  const FockPair& pair() const { return pair_; }
  const InteractionSpec& interaction() const { return in_; }
  ShiftModel model() const { return model_; }
  const SemiclassicalMoyal& cross() const { return cross_; }
  const SemiclassicalMoyal& disk_m() const { return disk_m_; }
  const SemiclassicalMoyal& disk_n() const { return disk_n_; }

  /// Shift applied to the cross-term branch phi^+- at x2.
  double branch_shift(const Polar& x2, Branch b) const;
  /// Shift applied to a diagonal factor (which = m or n) at x2.
  double diagonal_shift(const Polar& x2, int which) const;

  /// Evolved semiclassical W_m(x2) or W_n(x2).
  double diagonal(const PhasePoint& x2, int which) const;
  /// amplitude * cos and sin of the evolved branch phase at x2.
  std::array<double, 2> branch_wave(const PhasePoint& x2, Branch b) const;
  /// Evolved Re{M_m^n(x1) M_n^m(x2)}.
  double cross_term(const PhasePoint& x1, const PhasePoint& x2) const;
  /// The full evolved W(x1, x2).
  double operator()(const PhasePoint& x1, const PhasePoint& x2) const;

  bool shifts_disabled() const { return zero_; }

 private:
  // midpoint x0 whose flowed midpoint lands on y, for one leaf and branch
  PhasePoint back_map(const PhasePoint& y, int leaf, Branch b, double& half_delta) const;

  FockPair pair_;
  InteractionSpec in_;
  ShiftModel model_;
  SemiclassicalMoyal cross_;
  SemiclassicalMoyal disk_m_;
  SemiclassicalMoyal disk_n_;
  bool zero_ = false;
  bool linear_ = false;
  Eigen::Matrix2d inverse_map_ = Eigen::Matrix2d::Identity();
};

// ---------------------------------------------------------------------------
// Semiclassical vs exact
// ---------------------------------------------------------------------------

struct FidelityResult {
  double relative_l2 = 0.0;  ///< ||semi - exact|| / ||exact|| over the band
  double l2_error = 0.0;
  double l2_exact = 0.0;
  double r_a = 0.0, r_b = 0.0;  ///< the mid-ring band
};

/// L2 comparison of semi_moyal against the Laguerre form over the band
/// r_- + margin * width <= r <= r_+ - margin * width.
FidelityResult semiclassical_fidelity(const FockPair& pair, double margin = 0.25, CausticPolicy policy = {});

// ---------------------------------------------------------------------------
// dW1
// ---------------------------------------------------------------------------

struct DeltaOptions {
  QuadSpec quad;
  CausticPolicy policy;
  ShiftModel shift_model = ShiftModel::closed_form;
  QuantumOptions quantum;
  int liouville_nr = 96;    ///< base radial intervals of the Liouville grid
  int liouville_nth = 128;  ///< base angular samples of the Liouville grid
};

/// x2 integrals behind dW1 (differences evolved - initial), at two resolutions.
struct ChannelIntegrals {
  std::array<double, 2> dN_m{}, dN_n{};
  std::array<double, 2> dIc_plus{}, dIs_plus{}, dIc_minus{}, dIs_minus{};
  /// cross change as R(r1) [cos(l th1) dA + sin(l th1) dB]
  std::array<double, 2> dA{}, dB{};
  std::array<double, 2> N_m{}, N_n{};          ///< unshifted diagonal norms
  std::array<double, 2> Nt_m{}, Nt_n{};        ///< evolved diagonal norms
  std::map<std::string, double> layer_tallies;  ///< caustic-layer contributions (fine resolution)
  std::map<std::string, double> estimates;
};

ChannelIntegrals semiclassical_integrals(const SemiclassicalEvolution& evo, const DeltaOptions& opt);
ChannelIntegrals liouville_integrals(const FockPair& pair, const InteractionSpec& interaction,
                                     const DeltaOptions& opt);

/// dW1 on the x1 grid by the requested channel.
ReducedField delta_w1(const FockPair& pair, const InteractionSpec& interaction, Method method,
                      const GridSpec& x1_grid, const DeltaOptions& opt = {});

}  // namespace moyalab
