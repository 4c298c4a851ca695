// Invariant suites behind `verify`: short versions of the acceptance checks
// that run in seconds on a laptop.
#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "lorentzian/lorentzian.hpp"

namespace lorentzian::cli {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace suites {

inline std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

inline Check bound(const std::string& name, double value, double limit) {
  return {name, value < limit, "value " + num(value) + " limit " + num(limit)};
}

inline std::vector<Check> kernel(std::uint64_t) {
  std::vector<Check> out;
  std::vector<double> rhos;
  for (int i = 0; i < 200; ++i) rhos.push_back(0.05 + (10 - 0.05) * i / 199.0);
  for (int d = 1; d <= 3; ++d) {
    KernelContext ctx(d);
    double m = 0;
    for (double r : kernel_ode_residual(ctx, rhos)) m = std::max(m, r);
    out.push_back(bound("ode residual d=" + std::to_string(d), m, 1e-6));
    out.push_back(bound("flux at 1e-3 d=" + std::to_string(d), std::abs(kernel_flux(ctx, 1e-3) - 1), 1e-2));
  }
  KernelContext k1(1), k2(2);
  double m = 0;
  for (double r : rhos) m = std::max(m, std::abs(kernel_k(k1, r) + 0.5 * std::exp(-r)));
  out.push_back(bound("d=1 exponential", m, 1e-12));
  out.push_back(bound("d=2 closed form vs quadrature", std::abs(kernel_k(k2, 1.0) - kernel_k_quadrature(k2, 1.0)), 1e-9));
  return out;
}

inline Cellulation random_arrangement(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<Wall> ws;
  for (int i = 0; i < n; ++i) {
    const double a = U(rng) * numeric::pi, z = U(rng);
    Vec v(3);
    v << std::cos(a) * std::cosh(z), std::sin(a) * std::cosh(z), std::sinh(z);
    ws.push_back({v, 1.0 + 0.9 * U(rng)});
  }
  return Cellulation::arrangement(2, ws);
}

inline std::vector<Check> polyhedral(std::uint64_t seed) {
  std::vector<Check> out;
  double path = 0, s1 = 0;
  bool gauss = true, closure = true;
  for (int k = 0; k < 20; ++k) {
    std::mt19937_64 rng(seed * 1000 + k);
    const Cellulation c = random_arrangement(rng, 1 + k % 5);
    closure = closure && check_closure(c).ok;
    const PolyhedralFConvex P = build_polyhedron(c);
    path = std::max(path, verify_path_independence(P, 20, seed + k));
    gauss = gauss && verify_gauss_decomposition(P, 20).ok;
    s1 = std::max(s1, recompute_s1(P).max_deviation);
  }
  out.push_back({"closure", closure, "20 random arrangements"});
  out.push_back(bound("path independence", path, 1e-9));
  out.push_back({"gauss decomposition", gauss, "20 random arrangements"});
  out.push_back(bound("edge lengths", s1, 1e-10));
  Vec v(3);
  v << 1, 0, 0;
  const PolyhedralFConvex P = build_polyhedron(Cellulation::arrangement(2, {Wall{v, 2.0}}));
  const bool one = P.n_cells() == 2 && P.vertices[0].norm() == 0.0 && (P.vertices[1] - 2.0 * v).norm() == 0.0;
  out.push_back({"one wall vertices {0, a v}", one, ""});
  return out;
}

inline std::vector<Check> elementary(std::uint64_t) {
  std::vector<Check> out;
  KernelContext ctx(2);
  Vec v(3);
  v << 1, 0, 0;
  const Wall w{v, 1.0};
  double m = 0;
  for (int i = 0; i < 20; ++i) {
    const Vec x = polar_to(origin(2), 0.1 * i, direction_from_angles(2, 0.7 * i));
    m = std::max(m, std::abs(wall_solution(ctx, w, x) - elementary_closed_form(1.0, v, x)));
  }
  out.push_back(bound("wall solution vs closed form", m, 1e-4));
  const SupportSpec h = closed_form("elementary", {1.0}, v);
  std::vector<Vec> far;
  for (double z : {1.5, 2.0, 3.0}) far.push_back(polar_to(origin(2), std::asinh(z), direction_from_angles(2, 0.0)));
  const ConvexityReport r = check_convexity_pointwise(h, far);
  out.push_back({"violation reported for |z| > 1", r.verdict == Verdict::violated, to_string(r.verdict)});
  return out;
}

inline std::vector<Check> area(std::uint64_t seed) {
  std::vector<Check> out;
  const RegionSpec w = RegionSpec::polar_rect(origin(2), 0, 1, 0, 2 * numeric::pi);
  std::vector<double> eps;
  for (int i = 1; i <= 20; ++i) eps.push_back(0.05 * i);
  const AreaFit f = fit_area_polynomial(cone_apex(Vec::Zero(3)), w, eps, 1000000, seed);
  out.push_back(bound("cone S0 / area - 1", std::abs(f.reports[0].value / w.volume() - 1), 0.03));
  out.push_back(bound("B_1 smooth S1 / area - 1", std::abs(smooth_area_integral(constant(-1.0), w, 1) / w.volume() - 1), 1e-12));
  Vec v(3);
  v << 1, 0, 0;
  const PolyhedralFConvex P = build_polyhedron(Cellulation::arrangement(2, {Wall{v, 1.5}}));
  const RegionSpec slab = RegionSpec::facet_subset(v, origin(2), 0.8, 0.3);
  out.push_back(bound("polyhedral S1 of a slab", std::abs(polyhedral_area(P, slab, 1).value - 1.5 * 0.8), 1e-9));
  return out;
}

inline std::vector<Check> duality(std::uint64_t) {
  std::vector<Check> out;
  const Vec e = polar_to(origin(2), 0.7, direction_from_angles(2, 1.0));
  out.push_back(bound("R(B_2) = 2", std::abs(radial_function(constant(-2.0), e).R - 2), 1e-8));
  const SupportSpec bc = minkowski_sum(constant(-1.0), cone_apex(origin(2)));
  double m = 0;
  for (double r : {0.0, 0.5, 1.0})
    for (double a : {0.0, 2.0}) {
      const Vec x = polar_to(origin(2), r, direction_from_angles(2, a));
      m = std::max(m, std::abs(radial_function(bc, x).R - 2 * x[2]));
    }
  out.push_back(bound("R(B + C(e)) = 2 eta_{d+1}", m, 1e-8));
  DualGrid g;
  g.rho_max = 1.0;
  g.n_rho = 8;
  g.n1 = 8;
  const SolutionField f = dual_field(constant(-2.0), origin(2), g);
  double md = 0;
  for (double v : f.values) md = std::max(md, std::abs(v + 0.5));
  out.push_back(bound("dual(B_2) = B_1/2", md, 1e-8));
  return out;
}

inline std::vector<Check> one_dim(std::uint64_t) {
  std::vector<Check> out;
  OneDimMeasure dirac;
  dirac.atoms = {{0.0, 1.0}};
  const Solution1D s = solve_1d(dirac);
  double m = 0;
  for (double c : {-0.5, 0.0, 0.3})
    m = std::max(m, std::abs(pairing_1d(s.as_function(), {c, 1.0}, {0.0}) - measure_pairing_1d(dirac, {c, 1.0})));
  out.push_back(bound("dirac pairing", m, 1e-8));
  std::vector<std::pair<double, double>> samples;
  for (double r = -2; r <= 2; r += 0.25)
    for (double a : {0.1, 0.5, 1.0, 2.0}) samples.push_back({r, a});
  const auto sinh_half = [](double t) { return std::abs(std::sinh(t)) / 2; };
  const auto bad = [](double t) { return std::exp(-std::abs(t)) / 2; };
  out.push_back({"|sinh t|/2 convex", convexity_1d(sinh_half, samples).verdict == Verdict::certified_on_samples, ""});
  out.push_back({"+e^{-|t|}/2 not convex", convexity_1d(bad, samples).verdict == Verdict::violated, ""});
  const PolyhedralFConvex P = build_d1({{-1.0, 1.0}, {1.0, 1.0}});
  out.push_back(bound("polygon edge lengths", recompute_s1(P).max_deviation, 1e-12));
  const InvariantBuildResult inv = build_invariant_d1(1.0, {{0.3, 0.5}});
  out.push_back({"cocycle check", inv.cocycle_report.ok, "max error " + num(inv.cocycle_report.max_error)});
  out.push_back(bound("coboundary residual", inv.coboundary_residual, 1e-10));
  const auto zm = [](double t) { return std::sinh(t) * std::atan(1 / std::sinh(t)) - 1; };
  double mr = 0;
  for (double t : {0.5, 1.0, 2.0}) mr = std::max(mr, std::abs(radius_1d(zm, t) + 1 / (std::cosh(t) * std::cosh(t))));
  out.push_back(bound("zero-mean-radius profile radius", mr, 1e-8));
  return out;
}

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> n{"kernel", "polyhedral", "elementary", "area", "duality", "one-dim"};
  return n;
}

inline std::vector<Check> run(const std::string& name, std::uint64_t seed) {
  if (name == "kernel") return kernel(seed);
  if (name == "polyhedral") return polyhedral(seed);
  if (name == "elementary") return elementary(seed);
  if (name == "area") return area(seed);
  if (name == "duality") return duality(seed);
  if (name == "one-dim") return one_dim(seed);
  throw ValidationError("verify: unknown suite '" + name + "'");
}

}  // namespace suites
}  // namespace lorentzian::cli
