// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moyalab/propagators.hpp"

#include "moyalab/ode.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace moyalab {

// ---------------------------------------------------------------------------
// Exact quantum channel
// ---------------------------------------------------------------------------

Eigen::MatrixXd oscillator2_hamiltonian(const InteractionSpec& in, int N, double hbar) {
  const int k = in.power();
  Eigen::MatrixXd H = (in.alpha() / k) * position_power_matrix(k, N, hbar);
  if (in.mode == FlowMode::oscillator_plus_perturbation)
    for (int j = 0; j < N; ++j) H(j, j) += (j + 0.5) * hbar;
  return H;
}

QuantumEvolution quantum_evolve(const TruncatedState& state, const InteractionSpec& in, const QuantumOptions& opt) {
  in.validate();
  double tail = 0.0;
  for (int attempt = 0; attempt <= opt.max_enlargements; ++attempt) {
    const int N = state.dimension() + attempt * opt.enlarge_step;
    const TruncatedState s = attempt == 0 ? state : state.enlarged(N);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(oscillator2_hamiltonian(in, N, s.hbar));
    if (eig.info() != Eigen::Success) throw Error("Fock Hamiltonian diagonalization failed");
    const Eigen::MatrixXd& V = eig.eigenvectors();
    Eigen::VectorXcd phase(N);
    for (int j = 0; j < N; ++j) phase[j] = std::polar(1.0, -eig.eigenvalues()[j] * in.time / s.hbar);
    const Eigen::MatrixXcd U = V.cast<Complex>() * phase.asDiagonal() * V.transpose().cast<Complex>();
    QuantumEvolution out;
    out.state = s;
    // oscillator 2 is the column index
    out.state.coeffs = s.coeffs * U.transpose();
    tail = out.state.coeffs.rightCols(opt.tail_levels).squaredNorm();
    out.tail_mass = tail;
    out.enlargements = attempt;
    out.norm_error = std::abs(out.state.norm() - 1.0);
    if (tail < opt.tail_tolerance) return out;
  }
  throw TruncationError("Fock truncation still leaks into the top levels after " +
                            std::to_string(opt.max_enlargements) + " enlargements",
                        tail);
}

// ---------------------------------------------------------------------------
// Reduced fields
// ---------------------------------------------------------------------------

const char* to_string(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::liouville: return "liouville";
    case Method::semiclassical: return "semiclassical";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  if (s == "exact") return Method::exact;
  if (s == "liouville") return Method::liouville;
  if (s == "semiclassical") return Method::semiclassical;
  throw DomainError("unknown method '" + s + "'");
}

const char* to_string(ShiftModel s) { return s == ShiftModel::closed_form ? "closed_form" : "numeric_flow"; }

void ReducedField::require_converged() const {
  if (status == QuadStatus::non_converged)
    throw ConvergenceError(std::string("dW1 (") + to_string(method) + ") did not converge",
                           coarse.cwiseAbs().maxCoeff(), values.cwiseAbs().maxCoeff());
}

ReducedField reduced_wigner_exact(const TruncatedState& state, const GridSpec& x1_grid) {
  const Eigen::MatrixXcd rho = state.reduced_density_1();
  const int n = grid_size(x1_grid);
  ReducedField out;
  out.x1_grid = x1_grid;
  out.method = Method::exact;
  out.values.resize(n);
  for (int k = 0; k < n; ++k) {
    const MoyalTable t(state.dimension() - 1, grid_point(x1_grid, k), state.hbar);
    out.values[k] = t.weyl_symbol(rho);
  }
  out.coarse = out.values;
  out.max_abs = out.values.cwiseAbs().maxCoeff();
  for (int k = 0; k < n; ++k) out.l1 += grid_weight(x1_grid, k) * std::abs(out.values[k]);
  return out;
}

PolarGrid default_x1_grid(const FockPair& pair, int nr, int nth) {
  const RingGeometry g(pair);
  const int need = std::max(nth, 8 * pair.l());
  return PolarGrid(0.0, 1.1 * g.r_plus, nr, (need + 3) / 4 * 4);
}

// ---------------------------------------------------------------------------
// Liouville channel
// ---------------------------------------------------------------------------

Eigen::Matrix2d linear_flow_matrix(const InteractionSpec& in, double t) {
  if (in.kind != InteractionKind::quadratic) throw DomainError("flow is not linear");
  Eigen::Matrix2d M;
  M.col(0) = flow_point(PhasePoint(1.0, 0.0), in, t);
  M.col(1) = flow_point(PhasePoint(0.0, 1.0), in, t);
  return M;
}

namespace {

template <typename Source>
PhaseSpaceField transport(Source&& source, const GridSpec& grid, const InteractionSpec& in, double t,
                          bool complex_valued, FieldMeta meta) {
  const bool linear = in.kind == InteractionKind::quadratic;
  const Eigen::Matrix2d back = linear ? linear_flow_matrix(in, -t) : Eigen::Matrix2d::Identity();
  const int n = grid_size(grid);
  Eigen::VectorXcd v(n);
  for (int k = 0; k < n; ++k) {
    const PhasePoint y = grid_point(grid, k);
    PhasePoint x0;
    if (t == 0.0) x0 = y;
    else if (linear) x0 = back * y;
    else x0 = flow_point(y, in, -t);
    v[k] = source(x0);
    if (!complex_valued) v[k] = Complex(v[k].real(), 0.0);
  }
  meta.time += t;
  return PhaseSpaceField(grid, std::move(v), complex_valued, std::move(meta));
}

}  // namespace

PhaseSpaceField liouville_evolve(const PhaseSpaceField& field, const InteractionSpec& in, double t) {
  FieldMeta meta = field.meta();
  meta.channel = "liouville";
  return transport([&](const PhasePoint& x) { return field.interpolate(x); }, field.grid(), in, t,
                   field.is_complex(), meta);
}

PhaseSpaceField liouville_evolve(const std::function<Complex(const PhasePoint&)>& initial, const GridSpec& grid,
                                 const InteractionSpec& in, double t, bool complex_valued) {
  FieldMeta meta;
  meta.channel = "liouville";
  return transport(initial, grid, in, t, complex_valued, meta);
}

// ---------------------------------------------------------------------------
// Semiclassical channel
// ---------------------------------------------------------------------------

SemiclassicalEvolution::SemiclassicalEvolution(const FockPair& pair, const InteractionSpec& in, ShiftModel model,
                                               CausticPolicy policy)
    : pair_(pair),
      in_(in),
      model_(model),
      cross_(pair.m, pair.n, pair.hbar, policy),
      disk_m_(pair.m, pair.m, pair.hbar, policy),
      disk_n_(pair.n, pair.n, pair.hbar, policy) {
  in_.validate();
  linear_ = in_.kind == InteractionKind::quadratic;
  if (model_ == ShiftModel::closed_form) {
    zero_ = in_.epsilon == 0.0 || linear_;
  } else {
    zero_ = in_.epsilon == 0.0 && in_.mode == FlowMode::perturbation_only;
    if (linear_) inverse_map_ = linear_flow_matrix(in_, -in_.time);
  }
}

double SemiclassicalEvolution::branch_shift(const Polar& x2, Branch b) const {
  if (zero_ || model_ != ShiftModel::closed_form) return 0.0;
  const PhaseShift s = phase_shift(in_.kind, x2.r, x2.theta, pair_.lambda(), in_.epsilon, pair_.e_total());
  // branch phi^+ takes the closed form labelled -, and vice versa
  return b == Branch::plus ? s.minus : s.plus;
}

double SemiclassicalEvolution::diagonal_shift(const Polar& x2, int which) const {
  if (zero_ || model_ != ShiftModel::closed_form) return 0.0;
  const double e = ((which == pair_.m ? pair_.m : pair_.n) + 0.5) * pair_.hbar;
  return diagonal_phase_shift(in_.kind, x2.r, x2.theta, in_.epsilon, e);
}

PhasePoint SemiclassicalEvolution::back_map(const PhasePoint& y, int leaf, Branch b, double& half_delta) const {
  half_delta = 0.0;
  if (linear_) return inverse_map_ * y;
  const FockPair lp = leaf == 0 ? pair_ : leaf == 1 ? FockPair(pair_.m, pair_.m, 1, pair_.hbar)
                                                    : FockPair(pair_.n, pair_.n, 1, pair_.hbar);
  auto midpoint = [&](const PhasePoint& x0, double* hd) {
    const FlowResult fr = flow_tips(chord_from_phase(lp, x0, b), in_);
    if (hd) *hd = 0.5 * fr.phase_difference;
    return fr.midpoint_t;
  };
  PhasePoint x0 = flow_point(y, in_, -in_.time);
  for (int it = 0; it < 12; ++it) {
    double hd = 0.0;
    const PhasePoint res = midpoint(x0, &hd) - y;
    half_delta = hd;
    if (res.norm() < 1e-11 * std::max(1.0, y.norm())) return x0;
    const double h = 1e-6;
    Eigen::Matrix2d Jm;
    for (int c = 0; c < 2; ++c) {
      PhasePoint e = PhasePoint::Zero();
      e[c] = h;
      Jm.col(c) = (midpoint(x0 + e, nullptr) - midpoint(x0 - e, nullptr)) / (2 * h);
    }
    x0 -= Jm.partialPivLu().solve(res);
  }
  return x0;
}

double SemiclassicalEvolution::diagonal(const PhasePoint& x2, int which) const {
  const SemiclassicalMoyal& sm = which == pair_.m ? disk_m_ : disk_n_;
  if (model_ == ShiftModel::closed_form) {
    const Polar p = to_polar(x2);
    const double a = sm.amplitude(p.r);
    if (a == 0.0) return 0.0;
    return a * std::cos((sm.phi(p.r) + diagonal_shift(p, which)) / sm.hbar() - 0.25 * kPi);
  }
  if (zero_) return sm(x2).real();
  double hd = 0.0;
  PhasePoint x0;
  try {
    x0 = back_map(x2, which == pair_.m ? 1 : 2, Branch::plus, hd);
  } catch (const DomainError&) {
    return 0.0;
  }
  const Polar p = to_polar(x0);
  const double a = sm.amplitude(p.r);
  if (a == 0.0) return 0.0;
  return a * std::cos((sm.phi(p.r) - hd) / sm.hbar() - 0.25 * kPi);
}

std::array<double, 2> SemiclassicalEvolution::branch_wave(const PhasePoint& x2, Branch b) const {
  Polar p = to_polar(x2);
  double shift = 0.0;
  if (model_ == ShiftModel::closed_form) {
    shift = branch_shift(p, b);
  } else if (!zero_) {
    double hd = 0.0;
    try {
      p = to_polar(back_map(x2, 0, b, hd));
    } catch (const DomainError&) {
      return {0.0, 0.0};
    }
    shift = -hd;
  }
  const double a = cross_.amplitude(p.r);
  if (a == 0.0) return {0.0, 0.0};
  // l theta is reduced before it is combined with the radial phase
  const double ang = canonical_angle(branch_sign(b) * pair_.l() * p.theta);
  const double psi = (cross_.phi(p.r) + shift) / pair_.hbar + ang;
  return {a * std::cos(psi), a * std::sin(psi)};
}

double SemiclassicalEvolution::cross_term(const PhasePoint& x1, const PhasePoint& x2) const {
  const Polar p1 = to_polar(x1);
  const double R1 = cross_.radial(p1.r);
  if (R1 == 0.0) return 0.0;
  const double a = canonical_angle(pair_.l() * p1.theta);
  const auto wm = branch_wave(x2, Branch::minus);
  const auto wp = branch_wave(x2, Branch::plus);
  const double am = a - 0.25 * kPi, ap = a + 0.25 * kPi;
  const double tm = std::cos(am) * wm[0] - std::sin(am) * wm[1];
  const double tp = std::cos(ap) * wp[0] + std::sin(ap) * wp[1];
  return 0.5 * R1 * (tm + tp);
}

double SemiclassicalEvolution::operator()(const PhasePoint& x1, const PhasePoint& x2) const {
  const double wm1 = disk_m_(x1).real(), wn1 = disk_n_(x1).real();
  return 0.5 * (wm1 * diagonal(x2, pair_.n) + wn1 * diagonal(x2, pair_.m)) + pair_.sign * cross_term(x1, x2);
}

// ---------------------------------------------------------------------------
// Semiclassical vs exact
// ---------------------------------------------------------------------------

FidelityResult semiclassical_fidelity(const FockPair& pair, double margin, CausticPolicy policy) {
  if (!(margin >= 0.0 && margin < 0.5)) throw DomainError("band margin must lie in [0, 0.5)");
  const RingGeometry g(pair);
  const SemiclassicalMoyal sm(pair.m, pair.n, pair.hbar, policy);
  FidelityResult out;
  const double width = g.r_plus - g.r_minus;
  out.r_a = g.r_minus + margin * width;
  out.r_b = g.r_plus - margin * width;
  // both carry the same exp(i l theta), but the comparison is done in the plane
  const int panels = std::max(24, 2 * (pair.m + 1));
  const int nth = std::max(16, 4 * pair.l() + 4);
  const double err = polar_quadrature(
      [&](double r, double th) {
        const PhasePoint x = from_polar(r, th);
        return std::norm(sm(x) - moyal_laguerre(pair.m, pair.n, x, pair.hbar));
      },
      out.r_a, out.r_b, panels, 8, nth);
  const double ref = polar_quadrature(
      [&](double r, double th) { return std::norm(moyal_laguerre(pair.m, pair.n, from_polar(r, th), pair.hbar)); },
      out.r_a, out.r_b, panels, 8, nth);
  out.l2_error = std::sqrt(err);
  out.l2_exact = std::sqrt(ref);
  out.relative_l2 = out.l2_error / out.l2_exact;
  return out;
}

// ---------------------------------------------------------------------------
// dW1
// ---------------------------------------------------------------------------

namespace {

std::vector<RadialInterval> layered_intervals(const SemiclassicalMoyal& sm) {
  const RingGeometry& g = sm.geometry();
  const double a = g.r_minus, b = g.r_plus;
  const double ia = a + sm.inner_layer(), ob = b - sm.outer_layer();
  std::vector<RadialInterval> out;
  if (ia > a) out.push_back({a, ia, "inner_layer"});
  out.push_back({ia, ob, "main"});
  if (b > ob) out.push_back({ob, b, "outer_layer"});
  return out;
}


bool is_rotation(const Eigen::Matrix2d& M) {
  return (M.transpose() * M - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-9;
}

// Largest |ds/dtheta| and |ds/dr| of the applied shifts, in radians of s/hbar.
// which < 0 samples both cross branches, otherwise the diagonal factor.
std::array<double, 2> shift_rates(const SemiclassicalEvolution& evo, const RingGeometry& g, int which) {
  if (evo.shifts_disabled() || evo.model() != ShiftModel::closed_form) return {0.0, 0.0};
  auto s = [&](double r, double th, Branch b) {
    const Polar p{r, th};
    return which < 0 ? evo.branch_shift(p, b) : evo.diagonal_shift(p, which);
  };
  const int nr = 24, nt = 96;
  const double h = 1e-5;
  double ang = 0.0, rad = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double r = g.r_minus + (g.r_plus - g.r_minus) * (i + 0.5) / nr;
    for (int j = 0; j < nt; ++j) {
      const double th = kTwoPi * j / nt;
      for (Branch b : {Branch::plus, Branch::minus}) {
        ang = std::max(ang, std::abs(s(r, th + h, b) - s(r, th - h, b)) / (2 * h));
        rad = std::max(rad, std::abs(s(r + h, th, b) - s(r - h, th, b)) / (2 * h));
        if (which >= 0) break;
      }
    }
  }
  return {ang / g.hbar, rad / g.hbar};
}

struct Integral2 {
  std::array<double, 2> v{};
  double estimate = 0.0;
};

Integral2 integrate(ChannelIntegrals& ci, const std::string& name, const RingIntegrand& f,
                    const std::vector<RadialInterval>& iv, const OscillationRates& rates, const QuadSpec& quad) {
  const RingResult r = ring_integral(f, iv, rates, quad);
  ci.estimates[name] = r.estimate;
  for (const auto& piece : r.pieces)
    if (piece.tag != "main") ci.layer_tallies[name + "." + piece.tag] = piece.fine;
  return {{r.coarse, r.value}, r.estimate};
}

}  // namespace

ChannelIntegrals semiclassical_integrals(const SemiclassicalEvolution& evo, const DeltaOptions& opt) {
  const FockPair& pair = evo.pair();
  const InteractionSpec& in = evo.interaction();
  std::vector<RadialInterval> ring = layered_intervals(evo.cross());
  std::vector<RadialInterval> dm = layered_intervals(evo.disk_m());
  std::vector<RadialInterval> dn = layered_intervals(evo.disk_n());

  if (evo.model() == ShiftModel::numeric_flow && !evo.shifts_disabled()) {
    if (in.kind != InteractionKind::quadratic)
      throw DomainError("numeric_flow integrals are available for linear flows only");
    const Eigen::Matrix2d M = linear_flow_matrix(in, in.time);
    if (!is_rotation(M)) {
      // the support is no longer a ring; integrate over a disk that holds its image
      const double s = M.operatorNorm();
      ring = {{0.0, s * evo.cross().geometry().r_plus, "main"}};
      dm = {{0.0, s * evo.disk_m().geometry().r_plus, "main"}};
      dn = {{0.0, s * evo.disk_n().geometry().r_plus, "main"}};
    }
  }

  const SemiclassicalEvolution base(pair, InteractionSpec{in.kind, 0.0, in.time, FlowMode::perturbation_only},
                                    ShiftModel::closed_form, opt.policy);
  ChannelIntegrals ci;

  auto rates_for = [&](const SemiclassicalMoyal& sm, int which, int l) {
    const RingGeometry& g = sm.geometry();
    const auto sr = shift_rates(evo, g, which);
    OscillationRates r;
    r.l = l;
    r.angular = l + sr[0];
    r.radial = 2.0 * std::sqrt(g.e_total()) / g.hbar + sr[1];
    return r;
  };

  for (int which : {pair.m, pair.n}) {
    const bool is_m = which == pair.m;
    const SemiclassicalMoyal& sm = is_m ? evo.disk_m() : evo.disk_n();
    const auto& iv = is_m ? dm : dn;
    const OscillationRates rates = rates_for(sm, which, 0);
    const std::string tag = is_m ? "N_m" : "N_n";
    const Integral2 n0 = integrate(
        ci, tag, [&](double r, double th) { return base.diagonal(from_polar(r, th), which); }, iv,
        OscillationRates{0, 0.0, rates.radial}, opt.quad);
    const Integral2 d = integrate(
        ci, "d" + tag,
        [&](double r, double th) {
          const PhasePoint x = from_polar(r, th);
          return evo.diagonal(x, which) - base.diagonal(x, which);
        },
        iv, rates, opt.quad);
    (is_m ? ci.N_m : ci.N_n) = n0.v;
    (is_m ? ci.dN_m : ci.dN_n) = d.v;
    for (int k = 0; k < 2; ++k) (is_m ? ci.Nt_m : ci.Nt_n)[k] = n0.v[k] + d.v[k];
    if (pair.m == pair.n) {
      ci.N_n = ci.N_m;
      ci.dN_n = ci.dN_m;
      ci.Nt_n = ci.Nt_m;
      break;
    }
  }

  const OscillationRates cr = rates_for(evo.cross(), -1, pair.l());
  for (Branch b : {Branch::plus, Branch::minus}) {
    const bool plus = b == Branch::plus;
    for (int part = 0; part < 2; ++part) {
      const std::string name = std::string(part == 0 ? "dIc" : "dIs") + (plus ? "_plus" : "_minus");
      const Integral2 d = integrate(
          ci, name,
          [&](double r, double th) {
            const PhasePoint x = from_polar(r, th);
            return evo.branch_wave(x, b)[part] - base.branch_wave(x, b)[part];
          },
          ring, cr, opt.quad);
      if (plus) (part == 0 ? ci.dIc_plus : ci.dIs_plus) = d.v;
      else (part == 0 ? ci.dIc_minus : ci.dIs_minus) = d.v;
    }
  }
  const double c = 0.5 * std::sqrt(0.5);
  for (int k = 0; k < 2; ++k) {
    ci.dA[k] = c * (ci.dIc_minus[k] + ci.dIs_minus[k] + ci.dIc_plus[k] + ci.dIs_plus[k]);
    ci.dB[k] = c * (ci.dIc_minus[k] - ci.dIs_minus[k] - ci.dIc_plus[k] + ci.dIs_plus[k]);
  }
  return ci;
}

ChannelIntegrals liouville_integrals(const FockPair& pair, const InteractionSpec& in, const DeltaOptions& opt) {
  in.validate();
  const SemiclassicalMoyal cross(pair.m, pair.n, pair.hbar, opt.policy);
  const SemiclassicalMoyal wm(pair.m, pair.m, pair.hbar, opt.policy);
  const SemiclassicalMoyal wn(pair.n, pair.n, pair.hbar, opt.policy);
  const int l = pair.l();
  const double R = pair.radius_m();
  const double r_max = 1.3 * R;
  // about a dozen radial nodes per fringe
  const double rate = 2.0 * std::sqrt(pair.e_total()) / pair.hbar;
  const int nr = std::max(opt.liouville_nr, static_cast<int>(std::ceil(2.0 * rate * r_max)));
  const int nth = (std::max(opt.liouville_nth, 8 * l) + 3) / 4 * 4;

  using Source = std::function<double(const PhasePoint&)>;
  const std::array<Source, 4> sources{
      [&](const PhasePoint& x) { return wm(x).real(); },
      [&](const PhasePoint& x) { return wn(x).real(); },
      [&](const PhasePoint& x) {
        const Polar p = to_polar(x);
        return angular_phase(l, p.theta).real() * cross.radial(p.r);
      },
      [&](const PhasePoint& x) {
        const Polar p = to_polar(x);
        return angular_phase(l, p.theta).imag() * cross.radial(p.r);
      }};
  const std::array<const char*, 4> names{"dN_m", "dN_n", "dA", "dB"};

  // the sources are known in closed form, so each node is back-mapped once
  // and the initial functions are evaluated there directly
  const bool linear = in.kind == InteractionKind::quadratic;
  const Eigen::Matrix2d back = linear ? linear_flow_matrix(in, -in.time) : Eigen::Matrix2d::Identity();
  ChannelIntegrals ci;
  std::array<std::array<double, 2>, 4> d{};
  std::array<std::array<double, 2>, 2> n0{};
  for (int level = 0; level < 2; ++level) {
    const PolarGrid g(0.0, r_max, nr << level, nth << level);
    std::array<std::vector<double>, 4> diff;
    std::array<std::vector<double>, 2> init;
    for (auto& v : diff) v.resize(g.size());
    for (auto& v : init) v.resize(g.size());
    for (int k = 0; k < g.size(); ++k) {
      const PhasePoint y = g.point(k);
      const PhasePoint x0 = linear ? PhasePoint(back * y) : flow_point(y, in, -in.time);
      const double w = g.weight(k);
      for (int s = 0; s < 4; ++s) {
        const double f0 = sources[s](y);
        diff[s][k] = w * (sources[s](x0) - f0);
        if (s < 2) init[s][k] = w * f0;
      }
    }
    for (int s = 0; s < 4; ++s) d[s][level] = pairwise_sum(diff[s]);
    for (int s = 0; s < 2; ++s) n0[s][level] = pairwise_sum(init[s]);
  }
  ci.dN_m = d[0];
  ci.dN_n = d[1];
  ci.dA = d[2];
  ci.dB = d[3];
  ci.N_m = n0[0];
  ci.N_n = n0[1];
  for (int k = 0; k < 2; ++k) {
    ci.Nt_m[k] = ci.N_m[k] + ci.dN_m[k];
    ci.Nt_n[k] = ci.N_n[k] + ci.dN_n[k];
  }
  for (int s = 0; s < 4; ++s) ci.estimates[names[s]] = std::abs(d[s][1] - d[s][0]);
  ci.layer_tallies["grid_nr"] = nr;
  ci.layer_tallies["grid_nth"] = nth;
  return ci;
}

ReducedField delta_w1(const FockPair& pair, const InteractionSpec& in, Method method, const GridSpec& x1_grid,
                      const DeltaOptions& opt) {
  pair.validate();
  in.validate();
  opt.quad.validate();
  const int n = grid_size(x1_grid);
  ReducedField out;
  out.x1_grid = x1_grid;
  out.method = method;

  if (method == Method::exact) {
    const TruncatedState s0 = entangled_state(pair);
    const QuantumEvolution ev = quantum_evolve(s0, in, opt.quantum);
    const int N = ev.state.dimension();
    const Eigen::MatrixXcd drho = ev.state.reduced_density_1() - s0.enlarged(N).reduced_density_1();
    out.values.resize(n);
    for (int k = 0; k < n; ++k) out.values[k] = MoyalTable(N - 1, grid_point(x1_grid, k), pair.hbar).weyl_symbol(drho);
    out.coarse = out.values;
    out.diagnostics["dimension"] = N;
    out.diagnostics["enlargements"] = ev.enlargements;
    out.diagnostics["tail_mass"] = ev.tail_mass;
    out.diagnostics["norm_error"] = ev.norm_error;
    out.diagnostics["max_abs_drho"] = drho.cwiseAbs().maxCoeff();
    out.status = QuadStatus::converged;
  } else {
    ChannelIntegrals ci;
    if (method == Method::semiclassical) {
      const SemiclassicalEvolution evo(pair, in, opt.shift_model, opt.policy);
      ci = semiclassical_integrals(evo, opt);
      out.diagnostics["dIc_plus"] = ci.dIc_plus[1];
      out.diagnostics["dIs_plus"] = ci.dIs_plus[1];
      out.diagnostics["dIc_minus"] = ci.dIc_minus[1];
      out.diagnostics["dIs_minus"] = ci.dIs_minus[1];
    } else {
      ci = liouville_integrals(pair, in, opt);
    }
    const SemiclassicalMoyal cross(pair.m, pair.n, pair.hbar, opt.policy);
    const SemiclassicalMoyal wm(pair.m, pair.m, pair.hbar, opt.policy);
    const SemiclassicalMoyal wn(pair.n, pair.n, pair.hbar, opt.policy);
    out.values.resize(n);
    out.coarse.resize(n);
    for (int k = 0; k < n; ++k) {
      const PhasePoint x1 = grid_point(x1_grid, k);
      const Polar p = to_polar(x1);
      const double m1 = wm(x1).real(), n1 = wn(x1).real(), R1 = cross.radial(p.r);
      const Complex e = angular_phase(pair.l(), p.theta);
      for (int lev = 0; lev < 2; ++lev) {
        const double v = 0.5 * (m1 * ci.dN_n[lev] + n1 * ci.dN_m[lev]) +
                         pair.sign * R1 * (e.real() * ci.dA[lev] + e.imag() * ci.dB[lev]);
        (lev == 0 ? out.coarse : out.values)[k] = v;
      }
    }
    out.diagnostics["dN_m"] = ci.dN_m[1];
    out.diagnostics["dN_n"] = ci.dN_n[1];
    out.diagnostics["dA"] = ci.dA[1];
    out.diagnostics["dB"] = ci.dB[1];
    out.diagnostics["N_m"] = ci.N_m[1];
    out.diagnostics["N_n"] = ci.N_n[1];
    out.diagnostics["Nt_m"] = ci.Nt_m[1];
    out.diagnostics["Nt_n"] = ci.Nt_n[1];
    for (const auto& [k, v] : ci.estimates) out.diagnostics["estimate." + k] = v;
    for (const auto& [k, v] : ci.layer_tallies) out.diagnostics["layer." + k] = v;
  }

  out.max_abs = out.values.cwiseAbs().maxCoeff();
  out.estimate = (out.values - out.coarse).cwiseAbs().maxCoeff();
  for (int k = 0; k < n; ++k) out.l1 += grid_weight(x1_grid, k) * std::abs(out.values[k]);
  if (method != Method::exact) out.status = classify(out.max_abs, out.estimate, opt.quad);
  return out;
}

}  // namespace moyalab
