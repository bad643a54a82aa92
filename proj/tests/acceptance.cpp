// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned here.
// Exit status is nonzero when any criterion fails.

#include "moyalab/chord.hpp"
#include "moyalab/fock.hpp"
#include "moyalab/io.hpp"
#include "moyalab/propagators.hpp"
#include "moyalab/quadrature.hpp"
#include "moyalab/semiclassical.hpp"
#include "moyalab/sweep.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

using namespace moyalab;
namespace fs = std::filesystem;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void verdict(int id, bool ok, const std::string& detail, double secs) {
  std::printf("criterion %d %s  %s  [%.1f s]\n", id, ok ? "PASS" : "FAIL", detail.c_str(), secs);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 1: reduced density matrix of oscillator 1 is untouched by any interaction of oscillator 2
void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int sign : {1, -1}) {
    const FockPair pair(14, 10, sign, 1.0);
    const TruncatedState s0 = entangled_state(pair);
    for (auto kind : {InteractionKind::cubic, InteractionKind::quartic})
      for (double eps : {1e-3, 1e-2, 1e-1}) {
        const QuantumEvolution ev = quantum_evolve(s0, {kind, eps, 1.0, FlowMode::oscillator_plus_perturbation});
        const int N = ev.state.dimension();
        const Eigen::MatrixXcd d = ev.state.reduced_density_1() - s0.enlarged(N).reduced_density_1();
        worst = std::max(worst, d.cwiseAbs().maxCoeff());
      }
  }
  const double secs = seconds_since(t0);
  verdict(1, worst < 1e-10 && secs < 60.0, fmt("max |d rho1| = %.3g (tol 1e-10, 12 runs)", worst), secs);
}

// 2: marginals of the pair Wigner function
void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const FockPair pair(14, 10, 1, 1.0);
  const QuadSpec quad;

  // exact: W1 of the pair state equals (W_m + W_n)/2
  const PolarGrid g = default_x1_grid(pair, 24, 32);
  const ReducedField w1 = reduced_wigner_exact(entangled_state(pair), g);
  double exact_err = 0.0;
  for (int k = 0; k < g.size(); ++k) {
    const PhasePoint x = g.point(k);
    exact_err = std::max(exact_err, std::abs(w1.values[k] - 0.5 * (exact_wigner(14, x, 1.0) + exact_wigner(10, x, 1.0))));
  }

  // semiclassical: the cross term integrates to zero, each diagonal to one
  const SemiclassicalEvolution evo(pair, {InteractionKind::cubic, 0.0, 1.0, FlowMode::perturbation_only});
  const RingGeometry rg(pair);
  std::vector<RadialInterval> ring{{rg.r_minus, rg.r_plus, "ring"}};
  OscillationRates rates{pair.l(), double(pair.l()), 2.0 * std::sqrt(rg.e_total()) / pair.hbar};
  double cross_worst = 0.0, cross_est = 0.0;
  for (Branch b : {Branch::plus, Branch::minus})
    for (int part = 0; part < 2; ++part) {
      const RingResult r = ring_integral(
          [&](double rr, double th) { return evo.branch_wave(from_polar(rr, th), b)[part]; }, ring, rates, quad);
      cross_worst = std::max(cross_worst, std::abs(r.value));
      cross_est = std::max(cross_est, r.estimate);
    }
  bool norms_ok = true;
  std::string norms;
  for (int k : {pair.m, pair.n}) {
    const SemiclassicalMoyal& sm = k == pair.m ? evo.disk_m() : evo.disk_n();
    const RingGeometry& dg = sm.geometry();
    const RingResult r = ring_integral([&](double rr, double th) { return sm(from_polar(rr, th)).real(); },
                                       {{0.0, dg.r_plus, "disk"}},
                                       {0, 0.0, 2.0 * std::sqrt(dg.e_total()) / pair.hbar}, quad);
    norms += fmt(" int W_%g dx = ", k) + fmt("%.6f", r.value) + fmt(" (est %.1e)", r.estimate);
    if (!(std::abs(r.value - 1.0) <= std::max(r.estimate, 1e-6))) norms_ok = false;
  }
  const bool exact_ok = exact_err < 1e-10;
  const bool cross_ok = cross_worst <= std::max(cross_est, 1e-12) && cross_est < 1e-6;
  verdict(2, exact_ok && cross_ok && norms_ok,
          fmt("exact marginal err %.2g;", exact_err) + fmt(" |cross integral| %.2g", cross_worst) +
              fmt(" (est %.1e);", cross_est) + norms,
          seconds_since(t0));
}

// 3: an oscillator-only (linear) flow leaves dW1 unchanged in both classical channels
void criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  const FockPair pair(14, 10, 1, 1.0);
  const InteractionSpec rot{InteractionKind::quadratic, 0.0, 1.0, FlowMode::oscillator_plus_perturbation};
  const PolarGrid x1 = default_x1_grid(pair);
  const ReducedField lv = delta_w1(pair, rot, Method::liouville, x1);
  DeltaOptions opt;
  opt.shift_model = ShiftModel::numeric_flow;
  const ReducedField sc = delta_w1(pair, rot, Method::semiclassical, x1, opt);
  const ReducedField cf = delta_w1(pair, rot, Method::semiclassical, x1);
  const bool ok = lv.max_abs < 1e-6 && sc.max_abs < 1e-6 && cf.max_abs < 1e-6;
  verdict(3, ok,
          fmt("max |dW1|: liouville %.2g,", lv.max_abs) + fmt(" phase-shift (flowed) %.2g,", sc.max_abs) +
              fmt(" phase-shift (closed form) %.2g (tol 1e-6)", cf.max_abs),
          seconds_since(t0));
}

// 4: the toy integral against its Airy reference
void criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  const double hs[] = {0.05, 0.02, 0.01, 0.005};
  double rel[4], tail_rel = 0.0;
  std::string detail = "rel err";
  for (int i = 0; i < 4; ++i) {
    const double ref = airy_reference(0.5, 1.0, hs[i]);
    const double toy = toy_integral(0.5, 1.0, hs[i]).value;
    rel[i] = std::abs(toy - ref) / std::abs(ref);
    tail_rel = std::max(tail_rel, std::abs(toy + toy_integral_tail(0.5, 1.0, hs[i]).value - ref) / std::abs(toy));
    detail += fmt(" %.3g", rel[i]);
  }
  const bool decreasing = rel[0] > rel[1] && rel[1] > rel[2] && rel[2] > rel[3];
  detail += fmt(" at hbar 0.05/0.02/0.01/0.005 (tol 5%% at 0.02, decreasing); toy + endpoint tail - ref is %.1e of |toy|", tail_rel);
  verdict(4, rel[1] < 0.05 && decreasing, detail, seconds_since(t0));
}

// 5: semiclassical fidelity improves as hbar shrinks at fixed energies
void criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  SweepConfig cfg;
  std::string detail = "mid-ring rel L2";
  double prev = INFINITY;
  bool mono = true;
  for (double h : {1.0, 0.5, 0.25}) {
    const FockPair p = resolve_pair(cfg, h).pair;
    const double e = semiclassical_fidelity(p).relative_l2;
    detail += fmt(" %.4g", e) + " (" + std::to_string(p.m) + "," + std::to_string(p.n) + ")";
    mono = mono && e < prev;
    prev = e;
  }
  verdict(5, mono, detail + " decreasing", seconds_since(t0));
}

// 6: closed-form phase shifts against the flowed chord tips
void criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  const FockPair pair(14, 10, 1, 1.0);
  const RingGeometry g(pair);
  const double w = g.r_plus - g.r_minus;
  std::string detail;
  bool ok = true;
  for (FlowMode mode : {FlowMode::perturbation_only, FlowMode::oscillator_plus_perturbation}) {
    for (auto kind : {InteractionKind::cubic, InteractionKind::quartic}) {
      std::mt19937_64 rng(606);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      double worst = 0.0;
      for (int i = 0; i < 50; ++i) {
        const Polar p{g.r_minus + (0.25 + 0.5 * u(rng)) * w, kTwoPi * u(rng)};
        const PhaseShift s = phase_shift(kind, p.r, p.theta, pair.lambda(), 1e-3, pair.e_total());
        for (Branch label : {Branch::plus, Branch::minus}) {
          const Chord c = chord_for_closed_form(pair, from_polar(p), label);
          const double num = 0.5 * flow_tips(c, {kind, 1e-3, 1.0, mode}).phase_difference;
          const double cf = label == Branch::plus ? s.plus : s.minus;
          worst = std::max(worst, std::abs(num - cf) / std::abs(cf));
        }
      }
      const bool pass = worst < 0.05;
      if (mode == FlowMode::perturbation_only) ok = ok && pass;
      detail += std::string(to_string(kind)) + "/" + to_string(mode) + fmt(" worst %.3g; ", worst);
    }
  }
  verdict(6, ok, detail + "tol 5% under the impulsive kick", seconds_since(t0));
}

// 7: the starter-experiment dW1 point converges
void criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  SweepConfig cfg;
  const FockPair pair = resolve_pair(cfg, 0.25).pair;
  const InteractionSpec in{InteractionKind::cubic, 5e-2, 1.0, cfg.flow_mode};
  const ReducedField d = delta_w1(pair, in, Method::semiclassical, default_x1_grid(pair));
  const double secs = seconds_since(t0);
  const bool ok = d.status != QuadStatus::non_converged && secs < 600.0;
  verdict(7, ok,
          "(" + std::to_string(pair.m) + "," + std::to_string(pair.n) + ") hbar 0.25 cubic eps 5e-2: " +
              to_string(d.status) + fmt(", max |dW1| %.4g", d.max_abs) + fmt(", estimate %.2g", d.estimate),
          secs);
}

// 8: sweeps are byte-reproducible and resumable
void criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path root = fs::temp_directory_path() / "moyalab_acceptance_sweep";
  fs::remove_all(root);
  SweepConfig cfg;
  cfg.hbars = {1.0, 0.5};
  cfg.epsilons = {1e-3, 1e-2};
  cfg.kinds = {InteractionKind::cubic};
  auto run = [&](const std::string& name, int workers, int stop_after) {
    SweepConfig c = cfg;
    c.output_dir = (root / name).string();
    SweepControl ctl;
    ctl.workers = workers;
    ctl.stop_after = stop_after;
    return run_sweep(c, ctl);
  };
  run("a", 2, -1);
  run("b", 1, -1);
  const SweepOutcome part = run("c", 2, 3);
  const SweepOutcome rest = run("c", 2, -1);
  bool same_rerun = true, same_resume = true;
  for (const char* f : {"records.csv", "sweep.json"}) {
    const std::string a = read_text(root / "a" / f);
    same_rerun = same_rerun && a == read_text(root / "b" / f);
    same_resume = same_resume && a == read_text(root / "c" / f);
  }
  const std::string doc = read_text(root / "a" / "sweep.json");
  const bool round_trip = dump_document(document_from_json(json::parse(doc))) == doc;
  const bool ok = same_rerun && same_resume && round_trip && !part.complete && rest.resumed == 3;
  verdict(8, ok,
          std::string("re-run identical: ") + (same_rerun ? "yes" : "no") + ", resume after 3 of " +
              std::to_string(rest.records.size()) + " identical: " + (same_resume ? "yes" : "no") +
              ", JSON round trip identical: " + (round_trip ? "yes" : "no"),
          seconds_since(t0));
  fs::remove_all(root);
}

}  // namespace

int main() {
  void (*criteria[])() = {criterion1, criterion2, criterion3, criterion4,
                          criterion5, criterion6, criterion7, criterion8};
  for (int i = 0; i < 8; ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      verdict(i + 1, false, std::string("error: ") + e.what(), 0.0);
    }
  }
  std::printf("%d of 8 criteria pass\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}
