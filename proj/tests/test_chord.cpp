// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "moyalab/chord.hpp"

#include <cmath>
#include <random>

using namespace moyalab;

namespace {

InteractionSpec kick(InteractionKind kind, double eps) {
  return {kind, eps, 1.0, FlowMode::perturbation_only};
}

double numeric_shift(const FockPair& pair, const PhasePoint& x, Branch label, const InteractionSpec& in) {
  return 0.5 * flow_tips(chord_for_closed_form(pair, x, label), in).phase_difference;
}

double closed_shift(const FockPair& pair, const PhasePoint& x, Branch label, InteractionKind kind, double eps) {
  const Polar p = to_polar(x);
  const PhaseShift s = phase_shift(kind, p.r, p.theta, pair.lambda(), eps, pair.e_total());
  return label == Branch::plus ? s.plus : s.minus;
}

}  // namespace

TEST_CASE("phase branches") {
  const FockPair pair(14, 10, 1, 1.0);
  const RingGeometry g(pair);
  const double r = 0.5 * (g.r_minus + g.r_plus);
  CHECK(phase_branch(pair, {r, 0.0}, Branch::plus) == phase_branch(pair, {r, 0.0}, Branch::minus));
  CHECK(phase_branch(pair, {r, 1.1}, Branch::plus) - phase_branch(pair, {r, 1.1}, Branch::minus) ==
        doctest::Approx(2 * pair.lambda() * 1.1));
  // gradient against centred differences in (q, p)
  for (Branch b : {Branch::plus, Branch::minus}) {
    const Polar p{r, 0.9};
    const PhasePoint x = from_polar(p);
    const PhasePoint grad = phase_branch_gradient(pair, p, b);
    const double h = 1e-6;
    for (int k = 0; k < 2; ++k) {
      PhasePoint e = PhasePoint::Zero();
      e[k] = h;
      const double fd =
          (phase_branch(pair, to_polar(x + e), b) - phase_branch(pair, to_polar(x - e), b)) / (2 * h);
      CHECK(fd == doctest::Approx(grad[k]).epsilon(1e-6));
    }
  }
}

TEST_CASE("chord tips lie on the two circles") {
  const FockPair pair(14, 10, 1, 1.0);
  const RingGeometry g(pair);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ur(g.r_minus + 0.2 * (g.r_plus - g.r_minus),
                                            g.r_minus + 0.8 * (g.r_plus - g.r_minus));
  std::uniform_real_distribution<double> ut(0, kTwoPi);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const PhasePoint x = from_polar(ur(rng), ut(rng));
    const Chord cp = chord_from_phase(pair, x, Branch::plus);
    const Chord cm = chord_from_phase(pair, x, Branch::minus);
    CHECK_FALSE(cp.degenerate);
    worst = std::max({worst, std::abs(cp.tip_plus.norm() - g.R_m), std::abs(cp.tip_minus.norm() - g.R_n),
                      std::abs(cm.tip_plus.norm() - g.R_n), std::abs(cm.tip_minus.norm() - g.R_m)});
    CHECK((cp.tip_plus - cp.tip_minus - cp.xi).norm() < 1e-14);
    CHECK((0.5 * (cp.tip_plus + cp.tip_minus) - x).norm() < 1e-14);
    // branch flip is the lambda -> -lambda reflection: radial part of xi flips, angular part stays
    const Polar p = to_polar(x);
    CHECK(cp.xi.dot(radial_unit(p.theta)) == doctest::Approx(-cm.xi.dot(radial_unit(p.theta))));
    CHECK(cp.xi.dot(angular_unit(p.theta)) == doctest::Approx(cm.xi.dot(angular_unit(p.theta))));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("degenerate chords and the single-circle case") {
  const FockPair pair(14, 10, 1, 1.0);
  const RingGeometry g(pair);
  CHECK(chord_from_phase(pair, from_polar(g.r_plus - 1e-4, 0.3), Branch::plus).degenerate);
  CHECK_THROWS_AS(chord_from_phase(pair, from_polar(1.01 * g.r_plus, 0.3), Branch::plus), DomainError);
  const FockPair d(6, 6, 1, 1.0);
  for (double r : {0.0, 0.7, 2.1}) {
    const Chord c = chord_from_phase(d, from_polar(r, 2.0), Branch::minus);
    CHECK(c.tip_plus.norm() == doctest::Approx(d.radius_m()).epsilon(1e-12));
    CHECK(c.tip_minus.norm() == doctest::Approx(d.radius_m()).epsilon(1e-12));
  }
}

TEST_CASE("pure oscillator: rigid rotation and zero midpoint phase") {
  const FockPair pair(14, 10, 1, 1.0);
  const PhasePoint x = from_polar(2.7, 0.4);
  const Chord c = chord_from_phase(pair, x, Branch::plus);
  InteractionSpec in{InteractionKind::cubic, 0.0, 1.3, FlowMode::oscillator_plus_perturbation};
  const FlowResult r = flow_tips(c, in);
  // the flow advances the clockwise angle
  CHECK((r.midpoint_t - from_polar(2.7, 0.4 + 1.3)).norm() < 1e-9);
  const Polar p0 = to_polar(c.xi), p1 = to_polar(r.xi_t);
  CHECK(p1.r == doctest::Approx(p0.r).epsilon(1e-10));
  CHECK(canonical_angle(p1.theta - p0.theta) == doctest::Approx(1.3).epsilon(1e-9));
  CHECK(std::abs(r.phase_difference) < 1e-9);
}

TEST_CASE("flow reversibility and escape") {
  const InteractionSpec in{InteractionKind::quartic, 0.1, 1.0, FlowMode::oscillator_plus_perturbation};
  const PhasePoint x(1.2, -2.3);
  CHECK((flow_point(flow_point(x, in, 1.0), in, -1.0) - x).norm() < 1e-8);
  const InteractionSpec cubic{InteractionKind::cubic, 50.0, 1.0, FlowMode::perturbation_only};
  const InteractionSpec blow{InteractionKind::cubic, 50.0, 1.0, FlowMode::oscillator_plus_perturbation};
  CHECK_NOTHROW(flow_point(x, cubic, 1.0));
  CHECK_THROWS_AS(flow_point(PhasePoint(-6.0, 0.0), blow, 1.0), FlowEscapeError);
}

TEST_CASE("closed-form phase shifts: special values") {
  const PhaseShift s = phase_shift_cubic(1.5, 0.0, 2.0, 0.3, 12.0);
  const double a = 2.0 / 3.0;
  CHECK(s.plus == doctest::Approx(2 * 0.3 / 3 * a * a * a).epsilon(1e-15));
  CHECK(s.minus == doctest::Approx(-s.plus).epsilon(1e-15));
  const PhaseShift z = phase_shift_cubic(1.5, 0.7, 2.0, 0.0, 12.0);
  CHECK(z.plus == 0.0);
  CHECK(z.minus == 0.0);
  const PhaseShift q = phase_shift_quartic(1.5, kPi / 2, 2.0, 0.3, 12.0);
  CHECK(std::abs(q.plus) < 1e-14);
  CHECK(std::abs(q.minus) < 1e-14);
  CHECK(diagonal_phase_shift(InteractionKind::cubic, 1.0, 0.0, 0.5, 3.0) == 0.0);
  CHECK(diagonal_phase_shift(InteractionKind::quartic, 1.0, 0.8, 0.0, 3.0) == 0.0);
  const PhaseShift out = phase_shift_cubic(0.1, 0.7, 2.0, 0.3, 12.0);
  CHECK_FALSE(out.allowed);
  CHECK(out.plus == 0.0);
}

TEST_CASE("closed-form phase shifts: symmetry and linearity") {
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double r = 0.8 + 0.1 * i, th = kTwoPi * j / 20.0;
      for (auto f : {phase_shift_cubic, phase_shift_quartic}) {
        const PhaseShift a = f(r, th, 2.0, 0.01, 12.0);
        const PhaseShift b = f(r, -th, 2.0, 0.01, 12.0);
        const PhaseShift c = f(r, th, 2.0, 0.02, 12.0);
        // branch exchange under theta -> -theta flips the overall sign
        CHECK(std::abs(a.plus + b.minus) < 1e-12);
        CHECK(std::abs(c.plus - 2 * a.plus) < 1e-15);
        CHECK(std::abs(c.minus - 2 * a.minus) < 1e-15);
      }
    }
}

TEST_CASE("closed forms match the kicked midpoint phase difference") {
  const FockPair pair(3, 2, 1, 2.0);  // lambda = 2, e_total = 12
  CHECK(pair.lambda() == 2.0);
  CHECK(pair.e_total() == 12.0);
  const PhasePoint x = from_polar(1.5, 0.7);
  for (InteractionKind k : {InteractionKind::cubic, InteractionKind::quartic})
    for (Branch b : {Branch::plus, Branch::minus}) {
      const double want = closed_shift(pair, x, b, k, 1e-2);
      CHECK(numeric_shift(pair, x, b, kick(k, 1e-2)) == doctest::Approx(want).epsilon(0.05));
    }

  const FockPair big(14, 10, -1, 1.0);
  const RingGeometry g(big);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ur(g.r_minus + 0.25 * (g.r_plus - g.r_minus),
                                            g.r_minus + 0.75 * (g.r_plus - g.r_minus));
  std::uniform_real_distribution<double> ut(0, kTwoPi);
  for (int i = 0; i < 20; ++i) {
    const PhasePoint y = from_polar(ur(rng), ut(rng));
    for (InteractionKind k : {InteractionKind::cubic, InteractionKind::quartic})
      for (Branch b : {Branch::plus, Branch::minus}) {
        const double want = closed_shift(big, y, b, k, 1e-3);
        const double got = numeric_shift(big, y, b, kick(k, 1e-3));
        CHECK(std::abs(got - want) <= 0.05 * std::abs(want) + 1e-14);
      }
  }
}

TEST_CASE("diagonal shift matches the flow at lambda = 0") {
  const FockPair d(8, 8, 1, 1.0);
  for (double th : {0.4, 1.9, 4.0}) {
    const PhasePoint x = from_polar(2.0, th);
    for (InteractionKind k : {InteractionKind::cubic, InteractionKind::quartic}) {
      const double want = diagonal_phase_shift(k, 2.0, th, 1e-3, d.e_n());
      const double got = numeric_shift(d, x, Branch::plus, kick(k, 1e-3));
      CHECK(got == doctest::Approx(want).epsilon(0.05));
    }
  }
}

TEST_CASE("numeric shift is linear in epsilon for both flow modes") {
  const FockPair pair(14, 10, 1, 1.0);
  const PhasePoint x = from_polar(3.0, 1.0);
  for (FlowMode mode : {FlowMode::perturbation_only, FlowMode::oscillator_plus_perturbation})
    for (InteractionKind k : {InteractionKind::cubic, InteractionKind::quartic}) {
      const double e[3] = {1e-4, 2e-4, 4e-4};
      double v[3];
      for (int i = 0; i < 3; ++i)
        v[i] = flow_tips(chord_from_phase(pair, x, Branch::plus), {k, e[i], 1.0, mode}).phase_difference;
      // least-squares slope through the origin
      const double slope = (e[0] * v[0] + e[1] * v[1] + e[2] * v[2]) / (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
      double res = 0.0, mag = 0.0;
      for (int i = 0; i < 3; ++i) {
        res += std::pow(v[i] - slope * e[i], 2);
        mag += v[i] * v[i];
      }
      CAPTURE(to_string(mode));
      CAPTURE(to_string(k));
      CHECK(std::sqrt(res / mag) < 0.01);
    }
}
