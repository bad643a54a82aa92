// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "moyalab/propagators.hpp"

#include <cmath>
#include <random>

using namespace moyalab;

namespace {

InteractionSpec rotation(double t) { return {InteractionKind::quadratic, 0.0, t, FlowMode::oscillator_plus_perturbation}; }

}  // namespace

TEST_CASE("quantum evolution keeps the reduced state of oscillator 1") {
  const FockPair pair(4, 1, 1, 1.0);
  const TruncatedState s0 = entangled_state(pair);
  for (auto kind : {InteractionKind::cubic, InteractionKind::quartic}) {
    const InteractionSpec in{kind, 0.05, 1.0, FlowMode::oscillator_plus_perturbation};
    const QuantumEvolution ev = quantum_evolve(s0, in);
    CHECK(ev.norm_error < 1e-10);
    CHECK(ev.tail_mass < 1e-10);
    const int N = ev.state.dimension();
    const Eigen::MatrixXcd d = ev.state.reduced_density_1() - s0.enlarged(N).reduced_density_1();
    CHECK(d.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("a full oscillator period returns the state up to its phase") {
  const FockPair pair(3, 0, -1, 0.5);
  const TruncatedState s0 = entangled_state(pair);
  const QuantumEvolution ev = quantum_evolve(s0, rotation(kTwoPi));
  // every level picks up exp(-i (j + 1/2) 2 pi) = -1
  CHECK((ev.state.coeffs + s0.coeffs).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(ev.enlargements == 0);
}

TEST_CASE("truncation leakage raises") {
  const FockPair pair(6, 2, 1, 1.0);
  const TruncatedState s0 = entangled_state(pair, 10);
  QuantumOptions opt;
  opt.max_enlargements = 0;
  const InteractionSpec in{InteractionKind::quartic, 0.5, 1.0, FlowMode::perturbation_only};
  CHECK_THROWS_AS(quantum_evolve(s0, in, opt), TruncationError);
}

TEST_CASE("reduced Wigner function of the pair state") {
  const FockPair pair(3, 1, 1, 1.0);
  const PolarGrid g(0.0, 3.0, 6, 8);
  const ReducedField w = reduced_wigner_exact(entangled_state(pair), g);
  for (int k = 0; k < g.size(); ++k) {
    const PhasePoint x = g.point(k);
    const double want = 0.5 * (exact_wigner(3, x, 1.0) + exact_wigner(1, x, 1.0));
    CHECK(w.values[k] == doctest::Approx(want).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("Liouville transport") {
  auto f = [](const PhasePoint& x) { return Complex(x.x() * std::exp(-x.squaredNorm()) + 0.3 * x.y(), 0.0); };
  const PolarGrid g(0.0, 4.0, 80, 64);
  const PhaseSpaceField f0 = PhaseSpaceField::sample(g, f, false);

  SUBCASE("t = 0 is the identity") {
    const PhaseSpaceField ft = liouville_evolve(f0, rotation(1.0), 0.0);
    CHECK((ft.values() - f0.values()).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("quarter turn lands on grid nodes") {
    const PhaseSpaceField ft = liouville_evolve(f0, rotation(0.5 * kPi), 0.5 * kPi);
    const PhaseSpaceField want = liouville_evolve(f, g, rotation(0.5 * kPi), 0.5 * kPi);
    // the flow matrix comes from the integrator, hence not 1e-15
    CHECK((ft.values() - want.values()).cwiseAbs().maxCoeff() < 1e-7);
    // q -> -p after a quarter turn of q' = p, p' = -q; so f_t(q, p) = f_0(-p, q)
    const PhasePoint y(0.7, -0.4);
    CHECK(want.interpolate(y).real() == doctest::Approx(f(PhasePoint(-y.y(), y.x())).real()).epsilon(1e-4));
  }
  SUBCASE("off-grid rotation interpolates") {
    const PhaseSpaceField ft = liouville_evolve(f0, rotation(0.37), 0.37);
    const PhaseSpaceField want = liouville_evolve(f, g, rotation(0.37), 0.37);
    CHECK((ft.values() - want.values()).cwiseAbs().maxCoeff() < 2e-3);
    // Catmull-Rom weights sum to one, so the angular sums are conserved
    CHECK(std::abs(ft.integral().real() - f0.integral().real()) < 1e-12);
  }
  SUBCASE("nonlinear flow against direct integration") {
    const InteractionSpec in{InteractionKind::cubic, 0.1, 1.0, FlowMode::oscillator_plus_perturbation};
    const PhaseSpaceField want = liouville_evolve(f, g, in, 1.0);
    const PhasePoint y = g.point(g.index(20, 5));
    CHECK(want.values()[g.index(20, 5)].real() == doctest::Approx(f(flow_point(y, in, -1.0)).real()));
  }
}

TEST_CASE("linear flow matrices") {
  const Eigen::Matrix2d M = linear_flow_matrix(rotation(0.3), 0.3);
  CHECK(std::abs(M.determinant() - 1.0) < 1e-10);
  CHECK(M(0, 0) == doctest::Approx(std::cos(0.3)));
  const InteractionSpec squeeze{InteractionKind::quadratic, 0.4, 1.0, FlowMode::oscillator_plus_perturbation};
  CHECK(std::abs(linear_flow_matrix(squeeze, 1.0).determinant() - 1.0) < 1e-9);
  CHECK_THROWS_AS(linear_flow_matrix({InteractionKind::cubic, 0.1}, 1.0), DomainError);
}

TEST_CASE("semiclassical evolution without shifts") {
  const FockPair pair(14, 10, 1, 1.0);
  const RingGeometry g(pair);
  const InteractionSpec zero{InteractionKind::cubic, 0.0, 1.0, FlowMode::perturbation_only};
  const SemiclassicalEvolution evo(pair, zero);
  CHECK(evo.shifts_disabled());
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const PhasePoint x1 = from_polar(g.r_plus * 1.05 * u(rng), kTwoPi * u(rng));
    const PhasePoint x2 = from_polar(g.r_plus * 1.05 * u(rng), kTwoPi * u(rng));
    CHECK(evo.cross_term(x1, x2) == doctest::Approx(cross_term(pair, x1, x2)).scale(1e-3));
    CHECK(evo.diagonal(x2, 14) == doctest::Approx(semi_wigner(14, 1.0, x2)));
  }
}

TEST_CASE("numeric shifts under a rotation rotate the field") {
  const FockPair pair(6, 3, 1, 1.0);
  const RingGeometry g(pair);
  const double t = 0.8;
  const SemiclassicalEvolution evo(pair, rotation(t), ShiftModel::numeric_flow);
  CHECK_FALSE(evo.shifts_disabled());
  const Eigen::Matrix2d back = linear_flow_matrix(rotation(t), -t);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const PhasePoint x1 = from_polar(g.r_plus * u(rng), kTwoPi * u(rng));
    const PhasePoint x2 = from_polar(g.r_plus * u(rng), kTwoPi * u(rng));
    CHECK(evo.cross_term(x1, x2) == doctest::Approx(cross_term(pair, x1, back * x2)).scale(1e-3));
    CHECK(evo.diagonal(x2, 3) == doctest::Approx(semi_wigner(3, 1.0, back * x2)).scale(1e-3));
  }
}

TEST_CASE("closed-form shifts are applied per branch") {
  const FockPair pair(14, 10, 1, 1.0);
  const InteractionSpec in{InteractionKind::cubic, 1e-2, 1.0, FlowMode::perturbation_only};
  const SemiclassicalEvolution evo(pair, in);
  const RingGeometry g(pair);
  const Polar p{0.5 * (g.r_minus + g.r_plus), 0.9};
  const PhaseShift s = phase_shift(InteractionKind::cubic, p.r, p.theta, pair.lambda(), 1e-2, pair.e_total());
  CHECK(evo.branch_shift(p, Branch::plus) == s.minus);
  CHECK(evo.branch_shift(p, Branch::minus) == s.plus);
  // the cubic kick is odd, so the diagonal shift flips under x -> -x
  const double s0 = evo.diagonal_shift(p, 10);
  CHECK(std::abs(s0) > 1e-4);
  CHECK(evo.diagonal_shift({p.r, p.theta + kPi}, 10) == doctest::Approx(-s0).epsilon(1e-12));
}

TEST_CASE("dW1 channels") {
  const FockPair pair(3, 1, 1, 1.0);
  const PolarGrid x1 = default_x1_grid(pair, 12, 16);

  SUBCASE("exact channel is identically zero") {
    const InteractionSpec in{InteractionKind::cubic, 0.05, 1.0, FlowMode::oscillator_plus_perturbation};
    const ReducedField d = delta_w1(pair, in, Method::exact, x1);
    CHECK(d.max_abs < 1e-10);
    CHECK(d.diagnostics.at("norm_error") < 1e-10);
  }
  SUBCASE("semiclassical channel at zero coupling") {
    const InteractionSpec in{InteractionKind::cubic, 0.0, 1.0, FlowMode::perturbation_only};
    const ReducedField d = delta_w1(pair, in, Method::semiclassical, x1);
    CHECK(d.max_abs == 0.0);
    CHECK(d.status == QuadStatus::indistinguishable_from_zero);
  }
  SUBCASE("Liouville channel under a rotation") {
    const ReducedField d = delta_w1(pair, rotation(0.6), Method::liouville, x1);
    CHECK(d.max_abs < 1e-10);
  }
  SUBCASE("numeric semiclassical channel under a rotation") {
    DeltaOptions opt;
    opt.shift_model = ShiftModel::numeric_flow;
    const ReducedField d = delta_w1(pair, rotation(0.6), Method::semiclassical, x1, opt);
    CHECK(d.status != QuadStatus::non_converged);
    CHECK(d.max_abs < 1e-6);
  }
  SUBCASE("non-converged results refuse to be used") {
    ReducedField r;
    r.values = Eigen::VectorXd::Ones(2);
    r.coarse = Eigen::VectorXd::Zero(2);
    r.status = QuadStatus::non_converged;
    CHECK_THROWS_AS(r.require_converged(), ConvergenceError);
  }
}
