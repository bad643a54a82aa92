// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moyalab/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace moyalab {

RingGeometry::RingGeometry(int m, int n, double hbar_) : hbar(hbar_) {
  if (m < 0 || n < 0) throw DomainError("ring geometry needs non-negative quantum numbers");
  if (!(hbar_ > 0.0)) throw DomainError("ring geometry needs hbar > 0");
  if (m < n) std::swap(m, n);
  R_m = std::sqrt((2.0 * m + 1.0) * hbar);
  R_n = std::sqrt((2.0 * n + 1.0) * hbar);
  r_minus = 0.5 * (R_m - R_n);
  r_plus = 0.5 * (R_m + R_n);
}

double RingGeometry::tangential_sq(double r) const {
  if (r == 0.0) return lambda() == 0.0 ? e_total() : -INFINITY;
  const double a = lambda() / (2.0 * r);
  return e_total() - a * a - r * r;
}

double RingGeometry::tangential(double r) const { return std::sqrt(std::max(0.0, tangential_sq(r))); }

std::array<double, 2> caustic_radii(const FockPair& pair) {
  const RingGeometry g(pair);
  return {g.r_minus, g.r_plus};
}

CircleIntersection circle_intersections(double r, double theta, const RingGeometry& geom) {
  CircleIntersection out;
  const double d = geom.center_offset(r);
  const double R1 = geom.R_m, R2 = geom.R_n;
  const double tol = 1e-13 * (R1 + R2);
  if (d <= tol && std::abs(R1 - R2) <= tol) {
    out.kind = CircleIntersection::Kind::coincident;
    return out;
  }
  const PhasePoint u = radial_unit(theta);
  if (std::abs(d - (R1 + R2)) <= tol || std::abs(d - std::abs(R1 - R2)) <= tol) {
    out.kind = CircleIntersection::Kind::tangent;
    // tangency point on the line of centres
    const double s = (d >= 0.5 * (R1 + R2 + std::abs(R1 - R2))) ? R1 : (R1 >= R2 ? R1 : -R1);
    out.points = {s * u, s * u};
    return out;
  }
  if (d > R1 + R2 || d < std::abs(R1 - R2)) {
    out.kind = CircleIntersection::Kind::disjoint;
    return out;
  }
  const double a = (d * d + R1 * R1 - R2 * R2) / (2.0 * d);
  const double h = std::sqrt(std::max(0.0, R1 * R1 - a * a));
  const PhasePoint v = angular_unit(theta);
  out.kind = CircleIntersection::Kind::two_points;
  out.points = {a * u + h * v, a * u - h * v};
  return out;
}

namespace {

double safe_acos(double x) { return std::acos(std::clamp(x, -1.0, 1.0)); }

// Area shared by the disk of radius R1 at the origin and the disk of radius
// R2 whose centre is at distance d.
double lens_area(double R1, double R2, double d) {
  if (d >= R1 + R2) return 0.0;
  if (d <= std::abs(R1 - R2)) {
    const double rmin = std::min(R1, R2);
    return kPi * rmin * rmin;
  }
  const double a1 = R1 * R1 * safe_acos((d * d + R1 * R1 - R2 * R2) / (2.0 * d * R1));
  const double a2 = R2 * R2 * safe_acos((d * d + R2 * R2 - R1 * R1) / (2.0 * d * R2));
  const double k = (-d + R1 + R2) * (d + R1 - R2) * (d - R1 + R2) * (d + R1 + R2);
  return a1 + a2 - 0.5 * std::sqrt(std::max(0.0, k));
}

void check_closed_ring(const RingGeometry& geom, double r, const char* what) {
  const double slack = 1e-12 * geom.r_plus;
  if (r < geom.r_minus - slack || r > geom.r_plus + slack || r < 0.0)
    throw DomainError(std::string(what) + ": r = " + std::to_string(r) + " outside the ring [" +
                      std::to_string(geom.r_minus) + ", " + std::to_string(geom.r_plus) + "]");
}

}  // namespace

double symplectic_area_phi(const RingGeometry& geom, double r) {
  check_closed_ring(geom, r, "symplectic_area_phi");
  return 0.5 * lens_area(geom.R_m, geom.R_n, geom.center_offset(r));
}

double phi_derivative(const RingGeometry& geom, double r) {
  check_closed_ring(geom, r, "phi_derivative");
  return -2.0 * geom.tangential(r);
}

double amplitude_D(const RingGeometry& geom, double r, int which) {
  check_closed_ring(geom, r, "amplitude_D");
  const CircleIntersection hit = circle_intersections(r, 0.0, geom);
  if (hit.kind != CircleIntersection::Kind::two_points) return 0.0;
  const PhasePoint& y = hit.points[which == 0 ? 0 : 1];
  const PhasePoint c = 2.0 * from_polar(r, 0.0);
  // forward flow on circle m, reversed flow on circle n
  const PhasePoint vm = symplectic_J(y);
  const PhasePoint vn = -symplectic_J(y - c);
  return std::sqrt(std::abs(wedge(vm, vn)));
}

double airy_layer_width(const RingGeometry& geom, double r_caustic) {
  if (r_caustic <= 0.0) return geom.hbar / (2.0 * geom.R_m);
  const double lam = geom.lambda();
  const double c2 = std::abs(lam * lam / (2.0 * r_caustic * r_caustic * r_caustic) - 2.0 * r_caustic);
  return std::pow(geom.hbar / (2.0 * std::sqrt(c2)), 2.0 / 3.0);
}

SemiclassicalMoyal::SemiclassicalMoyal(int m, int n, double hbar, CausticPolicy policy)
    : geom_(m, n, hbar), policy_(policy), l_(m - n) {
  const double cap = 0.25 * (geom_.r_plus - geom_.r_minus);
  w_inner_ = std::min(cap, policy_.width_multiplier * airy_layer_width(geom_, geom_.r_minus));
  w_outer_ = std::min(cap, policy_.width_multiplier * airy_layer_width(geom_, geom_.r_plus));
}

bool SemiclassicalMoyal::in_caustic_layer(double r) const {
  return r < geom_.r_minus + w_inner_ || r > geom_.r_plus - w_outer_;
}

double SemiclassicalMoyal::amplitude(double r) const {
  const bool diagonal = l_ == 0;
  if (!(r < geom_.r_plus) || r < 0.0) return 0.0;
  if (!diagonal && !(r > geom_.r_minus)) return 0.0;
  double re = r;
  if (policy_.clamp) re = std::clamp(r, geom_.r_minus + w_inner_, geom_.r_plus - w_outer_);
  const double D = std::sqrt(2.0 * re * geom_.tangential(re));
  // the raw expression is singular exactly on a caustic; that set has measure zero
  if (D == 0.0) return 0.0;
  return 1.0 / (std::sqrt(kPi * kPi * kPi * geom_.hbar / 2.0) * D);
}

double SemiclassicalMoyal::radial(double r) const {
  const double a = amplitude(r);
  if (a == 0.0) return 0.0;
  return std::cos(phi(r) / geom_.hbar - 0.25 * kPi) * a;
}

Complex SemiclassicalMoyal::operator()(double r, double theta) const {
  const double rad = radial(r);
  if (rad == 0.0) return {0.0, 0.0};
  return angular_phase(l_, theta) * rad;
}

Complex SemiclassicalMoyal::operator()(const PhasePoint& x) const {
  const Polar p = to_polar(x);
  return (*this)(p.r, p.theta);
}

Complex semi_moyal(int m, int n, double hbar, const PhasePoint& x, CausticPolicy policy) {
  return SemiclassicalMoyal(m, n, hbar, policy)(x);
}

double cross_term(const FockPair& pair, const PhasePoint& x1, const PhasePoint& x2, CausticPolicy policy) {
  const SemiclassicalMoyal sm(pair, policy);
  const Polar p1 = to_polar(x1), p2 = to_polar(x2);
  const double a = sm.radial(p1.r);
  if (a == 0.0) return 0.0;
  const double b = sm.radial(p2.r);
  return std::cos(pair.l() * (p1.theta - p2.theta)) * a * b;
}

}  // namespace moyalab
