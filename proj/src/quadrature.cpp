// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moyalab/quadrature.hpp"

#include "moyalab/rules.hpp"
#include "moyalab/special.hpp"

#include <algorithm>
#include <cmath>

namespace moyalab {

const char* to_string(QuadStatus s) {
  switch (s) {
    case QuadStatus::converged: return "converged";
    case QuadStatus::indistinguishable_from_zero: return "indistinguishable_from_zero";
    case QuadStatus::non_converged: return "non_converged";
  }
  return "?";
}

void QuadSpec::validate() const {
  if (radial_panels < 1 || panel_order < 1 || angular_samples < 4)
    throw DomainError("quadrature spec needs positive panels/orders and >= 4 angular samples");
  if (refinement < 2) throw DomainError("refinement factor must be >= 2");
  if (max_refinements < 0) throw DomainError("max_refinements must be >= 0");
  if (!(tolerance > 0.0) || !(relative_tolerance > 0.0)) throw DomainError("tolerances must be positive");
  if (!(caustic_width_multiplier >= 0.0)) throw DomainError("caustic width multiplier must be >= 0");
}

Resolution required_resolution(const QuadSpec& q, const OscillationRates& rates, double r_a, double r_b) {
  Resolution res;
  int nth = std::max(q.angular_samples, 8 * std::abs(rates.l));
  nth = std::max(nth, static_cast<int>(std::ceil(6.0 * rates.angular)));
  res.angular_samples = (nth + 3) / 4 * 4;
  // graded panels are up to 1.5x wider than uniform ones in the middle
  const double osc = std::abs(r_b - r_a) * rates.radial / kTwoPi;
  const int np = static_cast<int>(std::ceil(1.5 * 6.0 * osc / q.panel_order));
  res.radial_panels = std::max(q.radial_panels, np);
  return res;
}

double polar_quadrature(const RingIntegrand& f, double r_a, double r_b, int panels, int order, int angular) {
  if (!(r_b > r_a)) return 0.0;
  const auto rule = gauss_legendre(order);
  // panel edges on a smoothstep map so panels shrink toward both ends
  std::vector<double> nodes, weights;
  nodes.reserve(static_cast<std::size_t>(panels) * order);
  weights.reserve(nodes.capacity());
  auto edge = [&](int k) {
    const double u = static_cast<double>(k) / panels;
    return r_a + (r_b - r_a) * u * u * (3.0 - 2.0 * u);
  };
  for (int k = 0; k < panels; ++k) {
    const double a = edge(k), b = edge(k + 1);
    const double h = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < rule->order(); ++i) {
      nodes.push_back(mid + h * rule->nodes[i]);
      weights.push_back(h * rule->weights[i] * nodes.back());
    }
  }
  std::vector<double> rows(angular);
  std::vector<double> terms(nodes.size());
  for (int j = 0; j < angular; ++j) {
    const double th = kTwoPi * j / angular;
    for (std::size_t i = 0; i < nodes.size(); ++i) terms[i] = weights[i] * f(nodes[i], th);
    rows[j] = pairwise_sum(terms);
  }
  return pairwise_sum(rows) * kTwoPi / angular;
}

QuadStatus classify(double value, double estimate, const QuadSpec& quad) {
  // a value under the absolute floor is zero as far as the rule can tell
  if (estimate <= quad.tolerance && std::abs(value) <= quad.tolerance) return QuadStatus::indistinguishable_from_zero;
  if (estimate <= quad.relative_tolerance * std::abs(value) || estimate <= quad.tolerance) return QuadStatus::converged;
  return QuadStatus::non_converged;
}

RingResult ring_integral(const RingIntegrand& f, const std::vector<RadialInterval>& intervals,
                         const OscillationRates& rates, const QuadSpec& quad) {
  quad.validate();
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& iv : intervals) {
    lo = std::min(lo, iv.a);
    hi = std::max(hi, iv.b);
  }
  Resolution res = intervals.empty() ? Resolution{quad.radial_panels, quad.angular_samples}
                                     : required_resolution(quad, rates, lo, hi);
  auto evaluate = [&](const Resolution& r, std::vector<double>& out) {
    out.clear();
    for (const auto& iv : intervals) {
      // panels in proportion to the interval width, at least two per piece
      const double frac = (hi > lo) ? (iv.b - iv.a) / (hi - lo) : 1.0;
      const int panels = std::max(2, static_cast<int>(std::ceil(frac * r.radial_panels)));
      out.push_back(polar_quadrature(f, iv.a, iv.b, panels, quad.panel_order, r.angular_samples));
    }
  };
  std::vector<double> coarse, fine;
  evaluate(res, coarse);
  RingResult out;
  for (int level = 0;; ++level) {
    const Resolution finer{res.radial_panels * quad.refinement, res.angular_samples * quad.refinement};
    evaluate(finer, fine);
    out.coarse = pairwise_sum(coarse);
    out.value = pairwise_sum(fine);
    out.estimate = std::abs(out.value - out.coarse);
    out.resolution = res;
    out.status = classify(out.value, out.estimate, quad);
    if (out.status != QuadStatus::non_converged || level >= quad.max_refinements) break;
    res = finer;
    coarse.swap(fine);
  }
  out.pieces.clear();
  for (std::size_t i = 0; i < intervals.size(); ++i) out.pieces.push_back({intervals[i].tag, coarse[i], fine[i]});
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct PolarGrad {
  double dr, dth, hrr, hrt, htt;
};

PolarGrad polar_derivatives(const PolarPhase& f, double r, double th, double hr, double ht) {
  const double f0 = f(r, th);
  const double frp = f(r + hr, th), frm = f(r - hr, th);
  const double ftp = f(r, th + ht), ftm = f(r, th - ht);
  const double fpp = f(r + hr, th + ht), fpm = f(r + hr, th - ht);
  const double fmp = f(r - hr, th + ht), fmm = f(r - hr, th - ht);
  return {(frp - frm) / (2 * hr), (ftp - ftm) / (2 * ht), (frp - 2 * f0 + frm) / (hr * hr),
          (fpp - fpm - fmp + fmm) / (4 * hr * ht), (ftp - 2 * f0 + ftm) / (ht * ht)};
}

}  // namespace

StationaryReport stationary_points(const PolarPhase& phase, double r_a, double r_b, int seeds_r, int seeds_theta,
                                   double gradient_tol) {
  if (!(r_b > r_a) || r_a < 0.0) throw DomainError("stationary_points needs 0 <= r_a < r_b");
  StationaryReport rep;
  rep.min_gradient = INFINITY;
  const double hr = 1e-5 * std::max(1.0, r_b), ht = 1e-5;
  for (int i = 0; i < seeds_r; ++i) {
    for (int j = 0; j < seeds_theta; ++j) {
      double r = r_a + (r_b - r_a) * (i + 0.5) / seeds_r;
      double th = kTwoPi * j / seeds_theta;
      const PolarGrad g0 = polar_derivatives(phase, r, th, hr, ht);
      const double gn0 = std::hypot(g0.dr, g0.dth / r);
      if (gn0 < rep.min_gradient) {
        rep.min_gradient = gn0;
        rep.min_location = {r, th};
      }
      // Newton on (d_r, d_theta)
      bool ok = false;
      for (int it = 0; it < 50; ++it) {
        const PolarGrad g = polar_derivatives(phase, r, th, hr, ht);
        if (std::hypot(g.dr, g.dth / r) < gradient_tol) {
          ok = true;
          break;
        }
        const double det = g.hrr * g.htt - g.hrt * g.hrt;
        if (det == 0.0 || !std::isfinite(det)) break;
        const double dr = (g.htt * g.dr - g.hrt * g.dth) / det;
        const double dt = (-g.hrt * g.dr + g.hrr * g.dth) / det;
        r -= dr;
        th -= dt;
        if (!(r > r_a && r < r_b)) break;
      }
      if (!ok) continue;
      th = canonical_angle(th);
      bool dup = false;
      for (const auto& p : rep.points)
        if (std::abs(p.location.r - r) < 1e-6 && std::abs(p.location.theta - th) < 1e-6) dup = true;
      if (dup) continue;
      const PolarGrad g = polar_derivatives(phase, r, th, hr, ht);
      const double det = g.hrr * g.htt - g.hrt * g.hrt;
      rep.points.push_back({{r, th}, phase(r, th), det > 0 ? 1 : (det < 0 ? -1 : 0)});
      rep.min_gradient = 0.0;
      rep.min_location = {r, th};
    }
  }
  rep.complex_critical_points = rep.points.empty() && rep.min_gradient > 1e3 * gradient_tol;
  return rep;
}

// ---------------------------------------------------------------------------

double airy_reference(double lambda, double epsilon, double hbar) {
  if (!(epsilon > 0.0) || !(hbar > 0.0)) throw DomainError("airy_reference needs epsilon > 0 and hbar > 0");
  const double y = lambda * std::pow(epsilon, -1.0 / 3.0) * std::pow(hbar, -2.0 / 3.0);
  return kPi * std::cbrt(hbar / epsilon) * airy_ai(y);
}

namespace {

double toy_phase(double th, double lambda, double epsilon, double hbar) {
  return (lambda * th + epsilon * th * th * th / 3.0) / hbar;
}

// theta in [0, 2 pi] with toy_phase(theta) = target, by safeguarded Newton.
double invert_phase(double target, double lambda, double epsilon, double hbar, double lo, double hi) {
  double th = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = toy_phase(th, lambda, epsilon, hbar) - target;
    if (f > 0) hi = th;
    else lo = th;
    const double d = (lambda + epsilon * th * th) / hbar;
    double next = th - f / d;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - th) < 1e-15 * std::max(1.0, th)) return next;
    th = next;
  }
  return th;
}

}  // namespace

ToyResult toy_integral(double lambda, double epsilon, double hbar) {
  if (lambda < 0.0 || epsilon < 0.0 || !(hbar > 0.0)) throw DomainError("toy_integral needs lambda, eps >= 0");
  ToyResult out;
  if (lambda == 0.0 && epsilon == 0.0) {
    out.value = kTwoPi;
    return out;
  }
  const double total = toy_phase(kTwoPi, lambda, epsilon, hbar);
  const int panels = std::max(4, static_cast<int>(std::ceil(total / kPi)));
  std::vector<double> edges(panels + 1);
  edges[0] = 0.0;
  edges[panels] = kTwoPi;
  for (int k = 1; k < panels; ++k)
    edges[k] = invert_phase(total * k / panels, lambda, epsilon, hbar, edges[k - 1], kTwoPi);
  auto run = [&](int order) {
    const auto rule = gauss_legendre(order);
    std::vector<double> parts(panels);
    for (int k = 0; k < panels; ++k) {
      const double h = 0.5 * (edges[k + 1] - edges[k]), mid = 0.5 * (edges[k + 1] + edges[k]);
      double s = 0.0;
      for (int i = 0; i < order; ++i)
        s += rule->weights[i] * std::cos(toy_phase(mid + h * rule->nodes[i], lambda, epsilon, hbar));
      parts[k] = h * s;
    }
    return pairwise_sum(parts);
  };
  const double a = run(12), b = run(24);
  out.value = b;
  out.estimate = std::abs(b - a);
  out.panels = panels;
  return out;
}

ToyResult toy_integral_tail(double lambda, double epsilon, double hbar) {
  if (lambda < 0.0 || epsilon < 0.0 || !(hbar > 0.0) || (lambda == 0.0 && epsilon == 0.0))
    throw DomainError("toy_integral_tail needs lambda, eps >= 0, not both zero");
  using C = std::complex<double>;
  const double psi0 = toy_phase(kTwoPi, lambda, epsilon, hbar);
  // path theta(s) with phase(theta(s)) = psi0 + i s; the integrand is
  // exp(i psi0 - s) i / phase'(theta(s)).
  auto solve = [&](double s, C guess) {
    C th = guess;
    for (int it = 0; it < 100; ++it) {
      const C f = (lambda * th + epsilon * th * th * th / 3.0) / hbar - C(psi0, s);
      const C d = (lambda + epsilon * th * th) / hbar;
      const C step = f / d;
      th -= step;
      if (std::abs(step) < 1e-15 * std::abs(th)) break;
    }
    return th;
  };
  auto run = [&](int order) {
    const auto rule = gauss_legendre(order);
    C total(0.0, 0.0);
    C guess(kTwoPi, 0.0);
    double a = 0.0;
    for (double b : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
      const double h = 0.5 * (b - a), mid = 0.5 * (a + b);
      for (int i = 0; i < order; ++i) {
        const double s = mid + h * rule->nodes[i];
        const C th = solve(s, guess);
        guess = th;
        const C d = (lambda + epsilon * th * th) / hbar;
        total += h * rule->weights[i] * std::exp(-s) * C(0.0, 1.0) / d;
      }
      a = b;
    }
    return (std::polar(1.0, psi0) * total).real();
  };
  ToyResult out;
  const double a = run(16), b = run(32);
  out.value = b;
  out.estimate = std::abs(b - a);
  out.panels = 9;
  return out;
}

}  // namespace moyalab
