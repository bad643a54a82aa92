// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "moyalab/field.hpp"

#include <cmath>
#include <random>

using namespace moyalab;

TEST_CASE("polar grid weights") {
  const PolarGrid g(0.0, 2.0, 40, 32);
  CHECK(g.size() == 41 * 32);
  double area = 0.0, r2 = 0.0;
  for (int k = 0; k < g.size(); ++k) {
    area += g.weight(k);
    r2 += g.weight(k) * g.point(k).squaredNorm();
  }
  // trapezoid on r dr is exact for the constant, second order for r^2
  CHECK(area == doctest::Approx(g.area()).epsilon(1e-14));
  CHECK(r2 == doctest::Approx(kPi * 8.0).epsilon(1e-3));

  const PolarGrid ann(1.0, 3.0, 10, 8);
  double a = 0.0;
  for (int k = 0; k < ann.size(); ++k) a += ann.weight(k);
  CHECK(a == doctest::Approx(ann.area()).epsilon(1e-14));
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(PolarGrid(0.0, 1.0, 8, 7), DomainError);
  CHECK_NOTHROW(PolarGrid(0.5, 1.0, 8, 7));
  CHECK_THROWS_AS(PolarGrid(1.0, 1.0, 8, 8), DomainError);
  CHECK_THROWS_AS(PhaseSpaceField(PolarGrid(0.0, 1.0, 4, 8), Eigen::VectorXcd::Zero(3), false), DomainError);
}

TEST_CASE("cartesian grid") {
  const CartesianGrid g{-1.0, 1.0, -2.0, 2.0, 21, 41};
  const GridSpec spec = g;
  double a = 0.0;
  for (int k = 0; k < grid_size(spec); ++k) a += grid_weight(spec, k);
  CHECK(a == doctest::Approx(8.0));
  CHECK(grid_point(spec, g.index(20, 40)).isApprox(PhasePoint(1.0, 2.0)));
  const auto f = PhaseSpaceField::sample(spec, [](const PhasePoint&) { return Complex(1.0, 0.0); }, false);
  CHECK_THROWS_AS(f.interpolate(PhasePoint(0.0, 0.0)), DomainError);
}

TEST_CASE("sampling keeps the imaginary part only for complex fields") {
  const PolarGrid g(0.0, 1.0, 4, 8);
  auto f = [](const PhasePoint& x) { return Complex(x.x(), 1.0); };
  CHECK(PhaseSpaceField::sample(g, f, false).values().imag().cwiseAbs().maxCoeff() == 0.0);
  const auto c = PhaseSpaceField::sample(g, f, true);
  CHECK(c.integral().imag() == doctest::Approx(kPi));
}

TEST_CASE("interpolation") {
  const PolarGrid g(0.0, 3.0, 120, 96);
  auto smooth = [](const PhasePoint& x) { return Complex(std::exp(-x.squaredNorm()) * (1.0 + x.x() - 0.5 * x.y()), 0.0); };
  const auto f = PhaseSpaceField::sample(g, smooth, false);

  SUBCASE("reproduces nodes") {
    for (int k : {0, 5, 200, 3000, g.size() - 1}) CHECK(f.interpolate(g.point(k)).real() == doctest::Approx(smooth(g.point(k)).real()));
  }
  SUBCASE("smooth functions off the nodes, including across theta = 0 and the origin") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 400; ++i) {
      const PhasePoint x(u(rng), u(rng));
      if (x.norm() > 2.8) continue;
      worst = std::max(worst, std::abs(f.interpolate(x).real() - smooth(x).real()));
    }
    CHECK(worst < 2e-4);
    CHECK(std::abs(f.interpolate(PhasePoint(0.01, 1e-9)).real() - smooth(PhasePoint(0.01, 1e-9)).real()) < 2e-4);
    CHECK(std::abs(f.interpolate(PhasePoint(1.3, 1e-12)).real() - f.interpolate(PhasePoint(1.3, -1e-12)).real()) < 1e-9);
  }
  SUBCASE("zero outside the grid") { CHECK(f.interpolate(PhasePoint(3.01, 0.0)) == Complex(0.0, 0.0)); }
}

TEST_CASE("field metadata travels with the field") {
  FieldMeta meta{0.5, 3, 1, -1, "exact", 0.0};
  PhaseSpaceField f(PolarGrid(0.0, 1.0, 2, 4), Eigen::VectorXcd::Ones(12), false, meta);
  CHECK(f.meta().m == 3);
  CHECK(f.meta().channel == "exact");
  f.meta().time = 2.0;
  CHECK(f.meta().time == 2.0);
}
