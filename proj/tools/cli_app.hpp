// Config-driven front end. One task per JSON document; results go to a CSV
// (or mesh) file plus a JSON run report next to it.
#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "lorentzian/lorentzian.hpp"
#include "suites.hpp"

namespace lorentzian::cli {

enum ExitCode : int { ok = 0, verify_failed = 1, validation = 2, refusal = 3, not_convex = 4 };

struct Options {
  std::string out;  ///< overrides the config's "output"
  bool require_convex = false;
};

struct Warning {
  std::string operation, location, message;
};

struct Run {
  json cfg;
  int d = 2;
  std::string task;
  std::uint64_t seed = 0;
  std::string out;
  json results = json::object();
  std::vector<Warning> warnings;
  bool violated = false;
  std::string csv;  ///< body written to `out`
};

inline std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string coords(const Vec& x) {
  std::string s;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += (i ? "," : "") + fmt17(x[i]);
  return s;
}

inline std::string coord_header(int d, const char* prefix = "x") {
  std::string s;
  for (int i = 0; i <= d; ++i) s += (i ? "," : "") + std::string(prefix) + std::to_string(i + 1);
  return s;
}

inline std::string location(const Vec& x) { return "[" + coords(x) + "]"; }

// --- inputs ---------------------------------------------------------------

/// "points": explicit list, or "grid": polar grid about "base" (default
/// e_{d+1}) with rho in (0, rho_max], n_rho levels, n_theta directions.
inline std::vector<Vec> query_points(const json& cfg, int d) {
  std::vector<Vec> pts;
  if (cfg.contains("points")) {
    for (const json& p : cfg.at("points")) {
      Vec x = io::vec(p, "points");
      io::check_dim(x, d, "points");
      pts.push_back(HPoint::from(x, 1e-9).vec);
    }
    return pts;
  }
  const json g = cfg.value("grid", json::object());
  Vec base = g.contains("base") ? io::vec(g.at("base"), "grid") : origin(d);
  io::check_dim(base, d, "grid");
  const double rmax = io::number_or(g, "rho_max", 1.0);
  const int nr = static_cast<int>(io::number_or(g, "n_rho", 4));
  const int nt = static_cast<int>(io::number_or(g, "n_theta", 8));
  if (!(rmax > 0) || nr < 1 || nt < 1) throw ValidationError("grid: need rho_max > 0, n_rho >= 1, n_theta >= 1");
  pts.push_back(base);
  const auto dirs = numeric::sphere_directions(d, nt);
  for (int j = 1; j <= nr; ++j)
    for (const Vec& th : dirs) pts.push_back(polar_to(base, rmax * j / nr, th));
  return pts;
}

inline SupportSpec config_spec(const Run& r) { return spec_from_json(io::require(r.cfg, "spec", r.task), r.d); }

// --- tasks ---------------------------------------------------------------

inline void task_kernel(Run& r) {
  const json g = r.cfg.value("grid", json::object());
  const double lo = io::number_or(g, "rho_min", 0.05), hi = io::number_or(g, "rho_max", 10.0);
  const int n = static_cast<int>(io::number_or(g, "n", 200));
  if (!(lo > 0) || !(hi > lo) || n < 2) throw ValidationError("kernel: need 0 < rho_min < rho_max and n >= 2");
  KernelContext ctx(r.d);
  std::ostringstream os;
  os << "rho,k,dk,ode_residual\n";
  double mx = 0;
  for (int i = 0; i < n; ++i) {
    const double rho = lo + (hi - lo) * i / (n - 1);
    const KernelDerivs k = kernel_derivatives(ctx, rho);
    const double res = kernel_ode_residual(ctx, {rho})[0];
    mx = std::max(mx, res);
    os << fmt17(rho) << ',' << fmt17(k.k) << ',' << fmt17(k.dk) << ',' << fmt17(res) << '\n';
  }
  r.results["max_ode_residual"] = mx;
  r.csv = os.str();
}

inline void task_solve_smooth(Run& r) {
  KernelContext ctx(r.d);
  const Bump phi = bump_from_json(io::require(r.cfg, "density", r.task), r.d);
  const QuadratureSpec q = quadrature_from_json(r.cfg.value("quadrature", json()));
  const bool residuals = r.cfg.value("residuals", true);
  const auto pts = query_points(r.cfg, r.d);
  std::vector<double> h(pts.size()), res(pts.size(), std::numeric_limits<double>::quiet_NaN());
  auto sol = [&](const Vec& x) { return solve_smooth(ctx, phi, x, q); };
  numeric::parallel_for(pts.size(), [&](std::size_t i) {
    h[i] = sol(pts[i]);
    if (residuals) res[i] = residual_wave(sol, phi(pts[i]), pts[i]);
  });
  std::ostringstream os;
  os << coord_header(r.d) << ",h,residual\n";
  double mx = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    os << coords(pts[i]) << ',' << fmt17(h[i]) << ',' << fmt17(res[i]) << '\n';
    if (residuals) mx = std::max(mx, res[i]);
  }
  if (residuals) r.results["max_residual"] = mx;
  r.results["quadrature"] = quadrature_to_json(q);
  r.csv = os.str();
}

/// Pairwise Lambda(eta, nu) >= 0 with nu one geodesic step from eta in each frame direction.
inline void measure_convexity(Run& r, const KernelContext& ctx, const MeasureSpec& mu, const std::vector<Vec>& pts,
                              const QuadratureSpec& q) {
  double worst = std::numeric_limits<double>::infinity();
  Vec where;
  for (const Vec& x : pts)
    for (int i = 0; i < r.d; ++i) {
      Vec s = Vec::Zero(r.d);
      s[i] = 0.5;
      const double lam = convexity_lambda(ctx, mu, x, exp_map(x, s), q);
      if (lam < worst) {
        worst = lam;
        where = x;
      }
    }
  r.results["min_convexity_lambda"] = worst;
  if (worst < -1e-10) {
    r.violated = true;
    r.warnings.push_back({"convexity_lambda", location(where), "solution not convex: Lambda = " + fmt17(worst)});
  }
}

inline void task_solve_measure(Run& r) {
  KernelContext ctx(r.d);
  const MeasureSpec mu = measure_from_json(io::require(r.cfg, "measure", r.task), r.d);
  const QuadratureSpec q = quadrature_from_json(r.cfg.value("quadrature", json()));
  const auto pts = query_points(r.cfg, r.d);
  const bool elementary = r.d == 2 && mu.atoms.empty() && !mu.density && mu.walls.size() == 1;
  std::vector<double> h(pts.size());
  numeric::parallel_for(pts.size(), [&](std::size_t i) { h[i] = solve_measure(ctx, mu, pts[i], q); });
  std::ostringstream os;
  os << coord_header(r.d) << ",h" << (elementary ? ",closed_form,difference" : "") << '\n';
  double mx = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    os << coords(pts[i]) << ',' << fmt17(h[i]);
    if (elementary) {
      const double c = elementary_closed_form(mu.walls[0].weight, mu.walls[0].normal, pts[i]);
      mx = std::max(mx, std::abs(h[i] - c));
      os << ',' << fmt17(c) << ',' << fmt17(h[i] - c);
    }
    os << '\n';
  }
  if (elementary) r.results["max_closed_form_difference"] = mx;
  if (r.cfg.value("check_convexity", true)) measure_convexity(r, ctx, mu, pts, q);
  r.csv = os.str();
}

inline void task_solve_poly(Run& r) {
  const Cellulation c = cellulation_from_json(io::require(r.cfg, "cellulation", r.task), r.d);
  const ClosureReport cl = check_closure(c);
  if (!cl.ok) throw ValidationError("check_closure: closure fails at ridge " + std::to_string(cl.failing_ridge));
  const PolyhedralFConvex P = build_polyhedron(c, static_cast<int>(io::number_or(r.cfg, "base", 0)));
  r.results["cells"] = P.n_cells();
  r.results["path_deviation"] = verify_path_independence(P, 20, r.seed);
  r.results["edge_length_deviation"] = recompute_s1(P).max_deviation;
  r.results["gauss_decomposition"] = verify_gauss_decomposition(P, 20).ok;
  for (const auto& w : P.warnings) r.warnings.push_back({"build_polyhedron", "cellulation", w});
  std::ostringstream os;
  P.write_csv(os);
  r.csv = os.str();
}

inline OneDimMeasure measure_1d_from_json(const json& j) {
  OneDimMeasure mu;
  if (j.contains("atoms"))
    for (const json& a : j.at("atoms")) {
      if (!a.is_array() || a.size() != 2) throw ValidationError("solve-1d: atoms are [t, w] pairs");
      mu.atoms.push_back({a[0].get<double>(), a[1].get<double>()});
    }
  if (j.contains("density")) {
    const json& b = j.at("density");
    const Bump1D bump{io::number(b, "center", "density"), io::number(b, "radius", "density")};
    const double amp = io::number_or(b, "amplitude", 1.0);
    if (!(bump.R > 0)) throw ValidationError("solve-1d: density radius must be > 0");
    mu.density = Density1D{[bump, amp](double t) { return amp * bump.f(t); }, bump.c - bump.R, bump.c + bump.R, 0.0};
  }
  mu.validate();
  return mu;
}

inline void task_solve_1d(Run& r) {
  if (r.d != 1) throw ValidationError("solve-1d: needs d=1");
  const OneDimMeasure mu = measure_1d_from_json(r.cfg.value("measure", json::object()));
  const Solution1D s = solve_1d(mu, io::number_or(r.cfg, "A", 0.0), io::number_or(r.cfg, "B", 0.0));
  const json g = r.cfg.value("grid", json::object());
  const double lo = io::number_or(g, "t_min", -3.0), hi = io::number_or(g, "t_max", 3.0);
  const int n = static_cast<int>(io::number_or(g, "n", 61));
  if (!(hi > lo) || n < 2) throw ValidationError("solve-1d: need t_min < t_max and n >= 2");
  std::vector<double> ts;
  for (int i = 0; i < n; ++i) ts.push_back(lo + (hi - lo) * i / (n - 1));
  const Fn1 h = s.as_function();
  std::ostringstream os;
  os << "t,h,radius\n";
  for (double t : ts) {
    double rad = std::numeric_limits<double>::quiet_NaN();
    try {
      rad = radius_1d(h, t);
    } catch (const NonDifferentiable&) {
    }
    os << fmt17(t) << ',' << fmt17(h(t)) << ',' << fmt17(rad) << '\n';
  }
  std::vector<std::pair<double, double>> samples;
  for (double t : ts)
    for (double a : {0.1, 0.5, 1.0}) samples.push_back({t, a});
  const ConvexityReport cr = convexity_1d(h, samples);
  r.results["convexity"] = to_string(cr.verdict);
  if (cr.verdict == Verdict::violated) {
    r.violated = true;
    r.warnings.push_back({"convexity_1d", location(cr.witnesses[0].point), cr.witnesses[0].detail});
  }
  if (r.cfg.contains("curve_output")) {
    std::ofstream f(r.cfg.at("curve_output").get<std::string>());
    if (!f) throw ValidationError("solve-1d: cannot open curve_output");
    write_curve_csv(f, curve_from_support(h, ts));
  }
  r.csv = os.str();
}

inline void task_convexity(Run& r) {
  const SupportSpec s = config_spec(r);
  const json sm = r.cfg.value("samples", json::object());
  const double rmax = io::number_or(sm, "rho_max", 2.0);
  const int n = static_cast<int>(io::number_or(sm, "n", 200));
  const std::string method = r.cfg.value("method", std::string("pointwise"));
  const Vec o = origin(r.d);
  std::vector<Vec> pts;
  for (const Vec& sv : numeric::ball_spiral(r.d, n, rmax)) pts.push_back(exp_map(o, sv));
  ConvexityReport rep;
  if (method == "pointwise") {
    rep = check_convexity_pointwise(s, pts);
  } else if (method == "subadditivity") {
    std::vector<std::pair<Vec, Vec>> pairs;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) pairs.push_back({pts[i], 1.7 * pts[i + 1]});
    rep = check_subadditivity(s, pairs);
  } else if (method == "radial") {
    std::vector<std::pair<double, double>> rs;
    for (int i = 0; i < n; ++i) rs.push_back({-rmax + 2 * rmax * i / std::max(1, n - 1), 0.5});
    for (const Vec& th : numeric::sphere_directions(r.d, 8)) {
      const ConvexityReport part = check_radial_convexity(s, o, th, rs);
      rep.checked += part.checked;
      rep.min_eigenvalue = std::min(rep.min_eigenvalue, part.min_eigenvalue);
      rep.witnesses.insert(rep.witnesses.end(), part.witnesses.begin(), part.witnesses.end());
    }
    finish_report(rep);
  } else {
    throw ValidationError("convexity: method must be pointwise, radial or subadditivity");
  }
  r.results["verdict"] = to_string(rep.verdict);
  r.results["checked"] = rep.checked;
  r.results["skipped"] = rep.skipped;
  r.results["min_value"] = rep.min_eigenvalue;
  r.results["note"] = rep.note;
  if (rep.verdict == Verdict::violated) {
    r.violated = true;
    r.warnings.push_back({"check_convexity_" + method, location(rep.witnesses[0].point), rep.witnesses[0].detail});
  }
  std::ostringstream os;
  os << coord_header(r.d) << ",value,detail\n";
  for (const Witness& w : rep.witnesses) os << coords(w.point) << ',' << fmt17(w.value) << ',' << w.detail << '\n';
  r.csv = os.str();
}

inline void task_area(Run& r) {
  const RegionSpec w = region_from_json(io::require(r.cfg, "region", r.task), r.d);
  const std::string method = r.cfg.value("method", std::string("mc"));
  std::vector<AreaReport> rows;
  if (method == "mc") {
    const SupportSpec s = config_spec(r);
    std::vector<double> eps;
    for (const json& e : io::require(r.cfg, "epsilons", r.task)) eps.push_back(e.get<double>());
    const auto n = static_cast<std::uint64_t>(io::number_or(r.cfg, "samples", 1e6));
    const AreaFit f = fit_area_polynomial(s, w, eps, n, r.seed);
    rows = f.reports;
    r.results["chi2"] = f.chi2;
    r.results["samples"] = n;
  } else if (method == "smooth") {
    const SupportSpec s = config_spec(r);
    for (int i = 0; i <= r.d; ++i) rows.push_back({i, smooth_area_integral(s, w, i), 0.0, "smooth", r.seed});
  } else if (method == "polyhedral") {
    const PolyhedralFConvex P = build_polyhedron(cellulation_from_json(io::require(r.cfg, "cellulation", r.task), r.d));
    for (int i = 0; i <= r.d; ++i) rows.push_back(polyhedral_area(P, w, i));
  } else {
    throw ValidationError("area: method must be mc, smooth or polyhedral");
  }
  r.results["region_volume"] = w.volume();
  std::ostringstream os;
  os.precision(17);
  write_area_csv(os, rows);
  r.csv = os.str();
}

inline void task_dual(Run& r) {
  const SupportSpec s = config_spec(r);
  const json g = r.cfg.value("grid", json::object());
  DualGrid dg;
  dg.rho_max = io::number_or(g, "rho_max", dg.rho_max);
  dg.n_rho = static_cast<int>(io::number_or(g, "n_rho", dg.n_rho));
  dg.n1 = static_cast<int>(io::number_or(g, "n1", dg.n1));
  dg.n2 = static_cast<int>(io::number_or(g, "n2", dg.n2));
  Vec base = g.contains("base") ? io::vec(g.at("base"), "grid") : origin(r.d);
  io::check_dim(base, r.d, "grid");
  const SolutionField f = dual_field(s, base, dg);
  std::ostringstream os;
  os << coord_header(r.d) << ",h_dual\n";
  for (int j = 0; j <= f.n_rho; ++j)
    for (int a = 0; a < f.n1; ++a)
      for (int b = 0; b < f.n2; ++b) os << coords(f.node(j, a, b)) << ',' << fmt17(f.values[f.index(j, a, b)]) << '\n';
  r.results["nodes"] = f.values.size();
  r.csv = os.str();
}

/// Mesh: "n_vertices n_faces", then "x1 .. x_{d+1} s1 marker" per vertex
/// (marker 0 regular, 1 non-differentiable, 2 whole sphere collapsed to a
/// point), then "i j k" per triangle (0-based).
inline void task_sample_surface(Run& r) {
  if (r.d > 2) throw ValidationError("sample-surface: meshes are produced for d=1 and d=2");
  const SupportSpec s = config_spec(r);
  const json g = r.cfg.value("grid", json::object());
  Vec base = g.contains("base") ? io::vec(g.at("base"), "grid") : origin(r.d);
  io::check_dim(base, r.d, "grid");
  const double r0 = io::number_or(g, "rho_min", 0.0), r1 = io::number_or(g, "rho_max", 1.0);
  const int nr = static_cast<int>(io::number_or(g, "n_rho", 20));
  const double t0 = io::number_or(g, "theta_min", 0.0), t1 = io::number_or(g, "theta_max", 2 * numeric::pi);
  const int nt = r.d == 1 ? 1 : static_cast<int>(io::number_or(g, "n_theta", 40));
  if (!(r1 > r0) || nr < 1 || nt < 1) throw ValidationError("sample-surface: bad grid");
  struct V {
    Vec x;
    double s1;
    int marker;
  };
  std::vector<V> verts;
  std::vector<Vec> params;
  if (r.d == 1) {
    for (int i = 0; i <= 2 * nr; ++i) {
      const double t = -r1 + r1 * i / nr;
      params.push_back(polar_to(base, std::abs(t), direction_from_angles(1, t >= 0 ? 1.0 : -1.0)));
    }
  } else {
    for (int i = 0; i <= nr; ++i)
      for (int j = 0; j <= nt; ++j)
        params.push_back(polar_to(base, r0 + (r1 - r0) * i / nr, direction_from_angles(2, t0 + (t1 - t0) * j / nt)));
  }
  double max_s1 = 0;
  for (const Vec& eta : params) {
    const NormalResult n = normal_representation(s, eta);
    if (!n.differentiable) {
      verts.push_back({n.tie_set.front(), std::numeric_limits<double>::quiet_NaN(), 1});
      r.warnings.push_back({"normal_representation", location(eta), "non-differentiable point"});
      continue;
    }
    const double s1 = smooth_area_density(s, eta, 1);
    max_s1 = std::max(max_s1, std::abs(s1));
    verts.push_back({n.chi, s1, 0});
  }
  double spread = 0;
  for (const V& v : verts) spread = std::max(spread, (v.x - verts.front().x).norm());
  std::ostringstream os;
  if (spread < 1e-12) {
    os << "1 0\n";
    for (Eigen::Index i = 0; i < verts.front().x.size(); ++i) os << fmt17(verts.front().x[i]) << ' ';
    os << "0 2\n";
    r.results["collapsed"] = true;
  } else {
    std::vector<std::array<int, 3>> faces;
    if (r.d == 2) {
      auto id = [&](int i, int j) { return i * (nt + 1) + j; };
      for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nt; ++j) {
          faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
          faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    } else {
      for (int i = 0; i + 1 < static_cast<int>(verts.size()); ++i) faces.push_back({i, i + 1, i + 1});
    }
    os << verts.size() << ' ' << faces.size() << '\n';
    for (const V& v : verts) {
      for (Eigen::Index i = 0; i < v.x.size(); ++i) os << fmt17(v.x[i]) << ' ';
      os << fmt17(v.s1) << ' ' << v.marker << '\n';
    }
    for (const auto& f : faces) os << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  }
  r.results["vertices"] = verts.size();
  r.results["max_abs_s1"] = max_s1;
  r.csv = os.str();
}

inline bool task_verify(Run& r) {
  const std::string suite = io::require(r.cfg, "suite", r.task).get<std::string>();
  std::vector<std::string> names = suite == "all" ? suites::names() : std::vector<std::string>{suite};
  std::ostringstream os;
  os << "suite,check,result,detail\n";
  bool all = true;
  json rows = json::array();
  for (const std::string& n : names) {
    for (const Check& c : suites::run(n, r.seed)) {
      all = all && c.pass;
      os << n << ',' << c.name << ',' << (c.pass ? "PASS" : "FAIL") << ',' << c.detail << '\n';
      std::cout << (c.pass ? "PASS " : "FAIL ") << n << ": " << c.name << "  " << c.detail << '\n';
      rows.push_back({{"suite", n}, {"check", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
  }
  r.results["checks"] = rows;
  r.results["all_pass"] = all;
  r.csv = os.str();
  return all;
}

// --- driver --------------------------------------------------------------

inline json report_json(const Run& r, double seconds) {
  json w = json::array();
  for (const auto& x : r.warnings) w.push_back({{"operation", x.operation}, {"location", x.location}, {"message", x.message}});
  return {{"task", r.task}, {"d", r.d}, {"seed", r.seed}, {"output", r.out}, {"wall_time_s", seconds},
          {"results", r.results}, {"warnings", w}, {"config", r.cfg}};
}

inline int run_config(const json& cfg, const Options& opt, std::ostream& err = std::cerr) {
  const auto t0 = std::chrono::steady_clock::now();
  Run r;
  r.cfg = cfg;
  try {
    if (!cfg.is_object()) throw ValidationError("config: top level must be an object");
    r.task = io::require(cfg, "task", "config").get<std::string>();
    r.d = static_cast<int>(io::number_or(cfg, "d", 2));
    require_dimension(r.d);
    r.seed = static_cast<std::uint64_t>(io::number_or(cfg, "seed", 0));
    r.out = !opt.out.empty() ? opt.out : cfg.value("output", r.task + (r.task == "sample-surface" ? ".mesh" : ".csv"));
    bool verified = true;
    if (r.task == "kernel") task_kernel(r);
    else if (r.task == "solve-smooth") task_solve_smooth(r);
    else if (r.task == "solve-measure") task_solve_measure(r);
    else if (r.task == "solve-poly") task_solve_poly(r);
    else if (r.task == "solve-1d") task_solve_1d(r);
    else if (r.task == "convexity") task_convexity(r);
    else if (r.task == "area") task_area(r);
    else if (r.task == "dual") task_dual(r);
    else if (r.task == "sample-surface") task_sample_surface(r);
    else if (r.task == "verify") verified = task_verify(r);
    else throw ValidationError("config: unknown task '" + r.task + "'");

    std::ofstream f(r.out, std::ios::binary);
    if (!f) throw ValidationError("cannot open output file '" + r.out + "'");
    f << r.csv;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ofstream rep(r.out + ".report.json");
    rep << report_json(r, secs).dump(2) << '\n';
    for (const auto& w : r.warnings) err << "warning: " << w.operation << " at " << w.location << ": " << w.message << '\n';
    if (!verified) return verify_failed;
    if (r.violated && opt.require_convex) {
      err << "convexity violated (--require-convex)\n";
      return not_convex;
    }
    return ok;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return validation;
  } catch (const json::exception& e) {
    err << "validation error: config: " << e.what() << '\n';
    return validation;
  } catch (const NumericalRefusal& e) {
    err << "numerical refusal: " << e.what() << '\n';
    return refusal;
  } catch (const NonDifferentiable& e) {
    err << "numerical refusal: " << e.what() << '\n';
    return refusal;
  }
}

inline int run_file(const std::string& path, const Options& opt, std::ostream& err = std::cerr) {
  std::ifstream in(path);
  if (!in) {
    err << "validation error: cannot read config '" << path << "'\n";
    return validation;
  }
  json cfg;
  try {
    cfg = json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    err << "validation error: config does not parse: " << e.what() << '\n';
    return validation;
  }
  return run_config(cfg, opt, err);
}

}  // namespace lorentzian::cli
