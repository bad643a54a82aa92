// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moyalab/field.hpp"

#include <cmath>
#include <vector>

namespace moyalab {

PolarGrid::PolarGrid(double r_min_, double r_max_, int nr_, int nth_)
    : r_min(r_min_), r_max(r_max_), nr(nr_), nth(nth_) {
  if (!(r_min >= 0.0) || !(r_max > r_min)) throw DomainError("polar grid needs 0 <= r_min < r_max");
  if (nr < 1 || nth < 4) throw DomainError("polar grid needs nr >= 1 and nth >= 4");
  if (r_min == 0.0 && nth % 2 != 0) throw DomainError("polar grids reaching the origin need an even nth");
}

double PolarGrid::weight(int k) const {
  const int i = k / nth;
  const double end = (i == 0 || i == nr) ? 0.5 : 1.0;
  return end * r(i) * dr() * dtheta();
}

double CartesianGrid::weight(int k) const {
  const int i = k / np, j = k % np;
  const double wq = (i == 0 || i == nq - 1) ? 0.5 : 1.0;
  const double wp = (j == 0 || j == np - 1) ? 0.5 : 1.0;
  return wq * wp * dq() * dp();
}

int grid_size(const GridSpec& g) {
  return std::visit([](const auto& x) { return x.size(); }, g);
}

PhasePoint grid_point(const GridSpec& g, int k) {
  return std::visit([k](const auto& x) { return x.point(k); }, g);
}

double grid_weight(const GridSpec& g, int k) {
  return std::visit([k](const auto& x) { return x.weight(k); }, g);
}

PhaseSpaceField::PhaseSpaceField(GridSpec grid, Eigen::VectorXcd values, bool complex_valued, FieldMeta meta)
    : grid_(std::move(grid)), values_(std::move(values)), complex_(complex_valued), meta_(std::move(meta)) {
  if (values_.size() != grid_size(grid_)) throw DomainError("field values do not match the grid size");
}

PhaseSpaceField PhaseSpaceField::sample(const GridSpec& grid, const std::function<Complex(const PhasePoint&)>& f,
                                        bool complex_valued, FieldMeta meta) {
  const int n = grid_size(grid);
  Eigen::VectorXcd v(n);
  for (int k = 0; k < n; ++k) {
    const Complex z = f(grid_point(grid, k));
    v[k] = complex_valued ? z : Complex(z.real(), 0.0);
  }
  return PhaseSpaceField(grid, std::move(v), complex_valued, std::move(meta));
}

Complex PhaseSpaceField::integral() const {
  std::vector<double> re(values_.size()), im(values_.size());
  for (Eigen::Index k = 0; k < values_.size(); ++k) {
    const double w = grid_weight(grid_, static_cast<int>(k));
    re[k] = w * values_[k].real();
    im[k] = w * values_[k].imag();
  }
  return {pairwise_sum(re), pairwise_sum(im)};
}

namespace {

// Catmull-Rom weights for offsets -1, 0, 1, 2 at fraction t.
void catmull_rom(double t, double w[4]) {
  const double t2 = t * t, t3 = t2 * t;
  w[0] = 0.5 * (-t3 + 2 * t2 - t);
  w[1] = 0.5 * (3 * t3 - 5 * t2 + 2);
  w[2] = 0.5 * (-3 * t3 + 4 * t2 + t);
  w[3] = 0.5 * (t3 - t2);
}

}  // namespace

Complex PhaseSpaceField::interpolate(const PhasePoint& x) const {
  const auto* g = std::get_if<PolarGrid>(&grid_);
  if (!g) throw DomainError("interpolation is implemented for polar grids");
  const Polar p = to_polar(x);
  if (p.r > g->r_max) return {0.0, 0.0};
  const double fr = (p.r - g->r_min) / g->dr();
  const double ft = p.theta / g->dtheta();
  int i0 = static_cast<int>(std::floor(fr));
  int j0 = static_cast<int>(std::floor(ft));
  if (i0 >= g->nr) i0 = g->nr - 1;
  double wr[4], wt[4];
  catmull_rom(fr - i0, wr);
  catmull_rom(ft - j0, wt);
  auto node = [&](int i, int j) -> Complex {
    if (i > g->nr) return {0.0, 0.0};
    if (i < 0) {
      if (g->r_min == 0.0) {
        i = -i;
        j += g->nth / 2;
      } else {
        i = 0;
      }
    }
    j %= g->nth;
    if (j < 0) j += g->nth;
    return values_[g->index(i, j)];
  };
  Complex acc(0.0, 0.0);
  for (int a = 0; a < 4; ++a) {
    if (wr[a] == 0.0) continue;
    Complex row(0.0, 0.0);
    for (int b = 0; b < 4; ++b) row += wt[b] * node(i0 - 1 + a, j0 - 1 + b);
    acc += wr[a] * row;
  }
  return acc;
}

}  // namespace moyalab
