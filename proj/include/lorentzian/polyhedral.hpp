// Polyhedral Christoffel problem: from a weighted cell decomposition of H^d
// to the vertices X(cell) of a polyhedral F-convex set, with closure, path
// independence, Gauss decomposition and S_1 round-trip checks, and the d=1
// polygon constructions (plain and group-invariant).
#pragma once

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "core.hpp"
#include "measure.hpp"
#include "numeric.hpp"
#include "support.hpp"

namespace lorentzian {

/// Explicit complexes are supported for d=2 only (hand-built tests).
struct ExplicitFacet {
  int a = 0, b = 0;  ///< the two cells; normal points toward b
  double weight = 1.0;
  Vec normal;
  std::vector<Vec> points;  ///< points on the facet (endpoints, or a far point for rays)
};

struct ExplicitRidge {
  Vec point;
  std::vector<int> facets;
};

struct Cellulation {
  enum class Kind { arrangement, explicit_complex };
  Kind kind = Kind::arrangement;
  int d = 2;
  std::vector<Wall> walls;  // arrangement
  int n_cells = 0;  // explicit
  std::vector<ExplicitFacet> facets;
  std::vector<ExplicitRidge> ridges;
  std::vector<std::vector<Vec>> interior_points;  ///< per cell, for Gauss checks

  static Cellulation arrangement(int d, std::vector<Wall> walls) {
    Cellulation c;
    c.d = d;
    c.walls = std::move(walls);
    c.validate();
    return c;
  }

  void validate() const {
    require_dimension(d);
    if (kind == Kind::arrangement) {
      for (std::size_t i = 0; i < walls.size(); ++i) {
        if (walls[i].normal.size() != d + 1) throw ValidationError("cellulation: wall dimension mismatch");
        SpacelikeUnit::from(walls[i].normal, 1e-9);
        if (!(walls[i].weight > 0)) throw ValidationError("cellulation: weights must be > 0");
        for (std::size_t j = 0; j < i; ++j)
          if ((walls[i].normal - walls[j].normal).norm() < 1e-9 || (walls[i].normal + walls[j].normal).norm() < 1e-9)
            throw ValidationError("cellulation: wall normals must be pairwise distinct hyperplanes");
      }
      return;
    }
    if (d != 2) throw ValidationError("cellulation: explicit complexes are supported for d=2 only");
    for (const auto& f : facets) {
      if (f.a < 0 || f.b < 0 || f.a >= n_cells || f.b >= n_cells || f.a == f.b)
        throw ValidationError("cellulation: facet must bound two distinct existing cells");
      if (!(f.weight > 0)) throw ValidationError("cellulation: weights must be > 0");
      SpacelikeUnit::from(f.normal, 1e-9);
      if (f.points.empty()) throw ValidationError("cellulation: facet needs at least one point");
    }
    for (const auto& r : ridges) {
      HPoint::from(r.point, 1e-9);
      for (int f : r.facets)
        if (f < 0 || f >= static_cast<int>(facets.size())) throw ValidationError("cellulation: bad ridge incidence");
    }
  }
};

struct ClosureReport {
  bool ok = true;
  double max_defect = 0;
  int failing_ridge = -1;
  std::string note;
};

/// Sum over facets around each codimension-2 face of lambda * u = 0.
inline ClosureReport check_closure(const Cellulation& c, double tol = 1e-9) {
  c.validate();
  ClosureReport r;
  if (c.kind == Cellulation::Kind::arrangement) {
    r.note = "arrangement: opposite half-facets of one wall carry the same weight, closure holds identically";
    return r;
  }
  for (std::size_t k = 0; k < c.ridges.size(); ++k) {
    const Vec& P = c.ridges[k].point;
    Vec sum = Vec::Zero(c.d);
    for (int fi : c.ridges[k].facets) {
      const ExplicitFacet& f = c.facets[fi];
      const Vec* Q = nullptr;
      for (const Vec& q : f.points)
        if (hyperbolic_distance(P, q) > 1e-9) {
          Q = &q;
          break;
        }
      if (!Q) throw ValidationError("cellulation: facet has no point distinct from its ridge");
      Vec u = frame_coords(P, tangent_part(P, *Q));
      sum += f.weight * u / u.norm();
    }
    const double defect = sum.norm();
    r.max_defect = std::max(r.max_defect, defect);
    if (defect > tol && r.ok) {
      r.ok = false;
      r.failing_ridge = static_cast<int>(k);
    }
  }
  return r;
}

// --- arrangement cells --------------------------------------------------------

namespace detail {

/// Sample points in every open cell of the arrangement traced on
/// W = cons^perp (a Lorentzian subspace) intersected with H^d. Each cell of
/// a nonempty arrangement has a facet on some wall, and the cells of the
/// arrangement induced on that wall give points of every such facet; a small
/// normal offset to each side then lands in the adjacent cells.
inline std::vector<Vec> arrangement_probes(const std::vector<Vec>& normals, const std::vector<Vec>& cons, int dim) {
  const int n = static_cast<int>(cons.size());
  Mat Ginv;
  if (n > 0) {
    Mat G(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) G(a, b) = minkowski_form(cons[a], cons[b]);
    Ginv = G.inverse();
  }
  auto project = [&](const Vec& v) {
    Vec out = v;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) out -= cons[a] * Ginv(a, b) * minkowski_form(cons[b], v);
    return out;
  };
  Vec base = project(origin(dim));
  if (base[dim] < 0) base = -base;
  base = renormalize(base);

  std::vector<Vec> traces;
  for (const Vec& v : normals) {
    const Vec t = project(v);
    const double e2 = t.squaredNorm();
    if (e2 < 1e-20) continue;
    const double q = minkowski_sq(t);
    if (q <= 1e-12 * e2) continue;  // trace misses H^d inside W
    const Vec tn = t / std::sqrt(q);
    bool dup = false;
    for (const Vec& o : traces)
      if ((o - tn).norm() < 1e-9 || (o + tn).norm() < 1e-9) dup = true;
    if (!dup) traces.push_back(tn);
  }
  if (traces.empty()) return {base};

  std::vector<Vec> out;
  for (std::size_t j = 0; j < traces.size(); ++j) {
    std::vector<Vec> sub_cons = cons;
    sub_cons.push_back(traces[j]);
    for (const Vec& s : arrangement_probes(normals, sub_cons, dim)) {
      double eps = 0.25;
      for (std::size_t k = 0; k < traces.size(); ++k)
        if (k != j) {
          const double dk = std::asinh(std::abs(minkowski_form(s, traces[k])));
          if (dk > 0) eps = std::min(eps, 0.5 * dk);
        }
      out.push_back(renormalize(std::cosh(eps) * s + std::sinh(eps) * traces[j]));
      out.push_back(renormalize(std::cosh(eps) * s - std::sinh(eps) * traces[j]));
    }
  }
  return out;
}

inline std::vector<int> sign_vector(const std::vector<Wall>& walls, const Vec& x) {
  std::vector<int> s(walls.size());
  for (std::size_t i = 0; i < walls.size(); ++i) s[i] = minkowski_form(x, walls[i].normal) > 0 ? 1 : -1;
  return s;
}

}  // namespace detail

struct Adjacency {
  int a = 0, b = 0;  ///< cells
  int wall = -1;  ///< arrangement wall index, or explicit facet index
  double weight = 0;
  Vec v;  ///< unit normal pointing from a toward b
};

struct PolyhedralFConvex {
  int d = 2;
  Cellulation source;
  std::vector<std::vector<int>> cell_signs;  ///< arrangement only
  std::vector<std::vector<Vec>> samples;  ///< interior points per cell
  std::vector<Adjacency> adjacency;
  std::vector<Vec> vertices;  ///< X(cell)
  int base = 0;
  double shortcut_deviation = 0;  ///< arrangement: BFS vs separating-walls formula
  SupportSpec spec;
  std::vector<std::string> warnings;

  int n_cells() const { return static_cast<int>(vertices.size()); }

  /// Vertex CSV: cell, sign vector, coordinates (17 significant digits).
  void write_csv(std::ostream& os) const {
    const auto old = os.precision(17);
    os << "cell,signs";
    for (int i = 0; i <= d; ++i) os << ",x" << i + 1;
    os << '\n';
    for (int k = 0; k < n_cells(); ++k) {
      os << k << ',';
      if (k < static_cast<int>(cell_signs.size()))
        for (int s : cell_signs[k]) os << (s > 0 ? '+' : '-');
      for (int i = 0; i <= d; ++i) os << ',' << vertices[k][i];
      os << '\n';
    }
    os.precision(old);
  }
};

namespace detail {

inline void enumerate_cells(PolyhedralFConvex& P, int extra_samples = 2000) {
  const Cellulation& c = P.source;
  const int d = c.d;
  std::vector<Vec> normals;
  for (const Wall& w : c.walls) normals.push_back(w.normal);
  std::vector<Vec> pts = arrangement_probes(normals, {}, d);
  double reach = 1.0;
  for (const Vec& p : pts) reach = std::max(reach, hyperbolic_distance(p, origin(d)));
  std::map<std::vector<int>, std::vector<Vec>> cells;
  for (const Vec& p : pts) cells[sign_vector(c.walls, p)].push_back(p);
  const Vec o = origin(d);
  for (const Vec& s : numeric::ball_spiral(d, extra_samples, reach + 1.0)) {
    const Vec p = exp_map(o, s);
    auto it = cells.find(sign_vector(c.walls, p));
    bool clean = true;
    for (const Wall& w : c.walls)
      if (std::abs(minkowski_form(p, w.normal)) < 1e-9) clean = false;
    if (it != cells.end() && clean) it->second.push_back(p);
  }
  for (auto& [signs, samp] : cells) {
    P.cell_signs.push_back(signs);
    P.samples.push_back(samp);
  }
  const int n = static_cast<int>(P.cell_signs.size());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      int diff = 0, wall = -1;
      for (std::size_t i = 0; i < c.walls.size(); ++i)
        if (P.cell_signs[a][i] != P.cell_signs[b][i]) {
          ++diff;
          wall = static_cast<int>(i);
        }
      if (diff != 1) continue;
      const Wall& w = c.walls[wall];
      P.adjacency.push_back({a, b, wall, w.weight, P.cell_signs[b][wall] * w.normal});
    }
}

inline std::vector<std::vector<std::pair<int, int>>> neighbours(const PolyhedralFConvex& P) {
  std::vector<std::vector<std::pair<int, int>>> nb(P.vertices.size());
  for (std::size_t e = 0; e < P.adjacency.size(); ++e) {
    nb[P.adjacency[e].a].push_back({P.adjacency[e].b, static_cast<int>(e)});
    nb[P.adjacency[e].b].push_back({P.adjacency[e].a, static_cast<int>(e)});
  }
  return nb;
}

/// X(to) - X(from) across adjacency e.
inline Vec step_vector(const Adjacency& e, int from) {
  return from == e.a ? Vec(e.weight * e.v) : Vec(-e.weight * e.v);
}

}  // namespace detail

/// X(cell) by breadth-first paths from the base cell; for arrangements the
/// result is cross-checked against the separating-walls formula
///   X(cell) = sum over walls separating cell from base of a_i sigma_i(cell) v_i.
inline PolyhedralFConvex build_polyhedron(const Cellulation& c, int base = 0) {
  const ClosureReport cl = check_closure(c);
  if (!cl.ok) throw ValidationError("build_polyhedron: closure condition violated at ridge " + std::to_string(cl.failing_ridge));
  PolyhedralFConvex P;
  P.d = c.d;
  P.source = c;
  if (c.kind == Cellulation::Kind::arrangement) {
    detail::enumerate_cells(P);
    for (const Wall& w : c.walls)
      if (w.weight < 1e-12) P.warnings.push_back("build_polyhedron: wall weight below 1e-12");
  } else {
    P.samples = c.interior_points;
    P.samples.resize(c.n_cells);
    for (std::size_t f = 0; f < c.facets.size(); ++f) {
      const auto& F = c.facets[f];
      P.adjacency.push_back({F.a, F.b, static_cast<int>(f), F.weight, F.normal});
    }
  }
  const int n = c.kind == Cellulation::Kind::arrangement ? static_cast<int>(P.cell_signs.size()) : c.n_cells;
  if (base < 0 || base >= n) throw ValidationError("build_polyhedron: base cell out of range");
  P.base = base;
  P.vertices.assign(n, Vec::Constant(c.d + 1, std::numeric_limits<double>::quiet_NaN()));
  P.vertices[base] = Vec::Zero(c.d + 1);
  const auto nb = detail::neighbours(P);
  std::deque<int> queue{base};
  std::vector<char> seen(n, 0);
  seen[base] = 1;
  while (!queue.empty()) {
    const int a = queue.front();
    queue.pop_front();
    for (auto [b, e] : nb[a])
      if (!seen[b]) {
        seen[b] = 1;
        P.vertices[b] = P.vertices[a] + detail::step_vector(P.adjacency[e], a);
        queue.push_back(b);
      }
  }
  for (int k = 0; k < n; ++k)
    if (!seen[k]) throw ValidationError("build_polyhedron: cell " + std::to_string(k) + " is not connected to the base");
  if (c.kind == Cellulation::Kind::arrangement) {
    for (int k = 0; k < n; ++k) {
      Vec X = Vec::Zero(c.d + 1);
      for (std::size_t i = 0; i < c.walls.size(); ++i)
        if (P.cell_signs[k][i] != P.cell_signs[base][i]) X += c.walls[i].weight * P.cell_signs[k][i] * c.walls[i].normal;
      P.shortcut_deviation = std::max(P.shortcut_deviation, (X - P.vertices[k]).norm());
    }
    if (P.shortcut_deviation > 1e-9)
      throw NumericalRefusal("build_polyhedron: path realization disagrees with the separating-walls formula");
  }
  P.spec = polyhedral_max(P.vertices);
  return P;
}

/// Random walks from the base through the adjacency graph; returns the max
/// distance between the path-accumulated vertex and the tree vertex.
inline double verify_path_independence(const PolyhedralFConvex& P, int n_paths, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto nb = detail::neighbours(P);
  double dev = 0;
  const int len = 3 * P.n_cells() + 3;
  for (int p = 0; p < n_paths; ++p) {
    int cur = P.base;
    Vec X = P.vertices[P.base];
    for (int s = 0; s < len && !nb[cur].empty(); ++s) {
      std::uniform_int_distribution<std::size_t> pick(0, nb[cur].size() - 1);
      auto [nxt, e] = nb[cur][pick(rng)];
      X += detail::step_vector(P.adjacency[e], cur);
      cur = nxt;
      dev = std::max(dev, (X - P.vertices[cur]).norm());
    }
  }
  return dev;
}

struct GaussReport {
  bool ok = true;
  std::size_t checked = 0, failures = 0;
  int first_failing_cell = -1;
};

/// For sample points inside each cell, the support function's maximum is
/// attained exactly at that cell's vertex (uniquely, up to relative 1e-9).
inline GaussReport verify_gauss_decomposition(const PolyhedralFConvex& P, std::size_t per_cell = 50) {
  GaussReport r;
  for (int k = 0; k < P.n_cells(); ++k) {
    const auto& samp = P.samples[k];
    const std::size_t stride = std::max<std::size_t>(1, samp.size() / std::max<std::size_t>(1, per_cell));
    for (std::size_t s = 0; s < samp.size(); s += stride) {
      const Vec& eta = samp[s];
      const double own = minkowski_form(eta, P.vertices[k]);
      double best = -std::numeric_limits<double>::infinity();
      for (const Vec& X : P.vertices) best = std::max(best, minkowski_form(eta, X));
      const double tol = detail::polyhedral_tie_tol(P.vertices, eta, best);
      bool good = own >= best - tol;
      for (int j = 0; j < P.n_cells() && good; ++j)
        if (j != k && (P.vertices[j] - P.vertices[k]).norm() > 1e-12 &&
            minkowski_form(eta, P.vertices[j]) >= best - tol)
          good = false;
      ++r.checked;
      if (!good) {
        ++r.failures;
        if (r.ok) r.first_failing_cell = k;
        r.ok = false;
      }
    }
  }
  return r;
}

struct S1Entry {
  int a, b, wall;
  double weight, length, deviation;
};

struct S1Report {
  std::vector<S1Entry> entries;
  double max_deviation = 0;
};

/// Edge lengths sqrt(<e,e>_-) of the spacelike edges X(b) - X(a) against the
/// facet weights.
inline S1Report recompute_s1(const PolyhedralFConvex& P) {
  S1Report r;
  for (const Adjacency& e : P.adjacency) {
    const Vec edge = P.vertices[e.b] - P.vertices[e.a];
    const double q = minkowski_sq(edge);
    const double len = q > 0 ? std::sqrt(q) : -std::sqrt(-q);
    const double dev = std::abs(len - e.weight);
    r.entries.push_back({e.a, e.b, e.wall, e.weight, len, dev});
    r.max_deviation = std::max(r.max_deviation, dev);
  }
  return r;
}

// --- d = 1 ---------------------------------------------------------------------

/// eta(t) = (sinh t, cosh t) and its increasing unit normal v(t) = (cosh t, sinh t).
inline Vec h1_point(double t) {
  Vec v(2);
  v << std::sinh(t), std::cosh(t);
  return v;
}
inline Vec h1_normal(double t) {
  Vec v(2);
  v << std::cosh(t), std::sinh(t);
  return v;
}

/// Space-like polygon with X_k = sum_{j<k} a_j v(t_j); cell k is the interval
/// (t_{k-1}, t_k) after sorting.
inline PolyhedralFConvex build_d1(std::vector<std::pair<double, double>> points) {
  std::sort(points.begin(), points.end());
  std::vector<Wall> walls;
  for (auto [t, a] : points) walls.push_back({h1_normal(t), a});
  return build_polyhedron(Cellulation::arrangement(1, std::move(walls)), 0);
}

struct InvariantBuildResult {
  PolyhedralFConvex polygon;  ///< over 2N+1 periods, base cell at period 0
  CocycleD1 cocycle;
  Vec coboundary_vector;
  CocycleReport cocycle_report;
  double coboundary_residual = 0;
  double invariance_error = 0;  ///< of the translated polygon X - w
  int per_period = 0;
};

/// Extends one period of weights by the boost orbit, reads off
/// tau = X(gamma0 base) from the polygon, checks the cocycle relation against
/// the polygon itself and solves tau = w - gamma0 w.
inline InvariantBuildResult build_invariant_d1(double t0, std::vector<std::pair<double, double>> period, int N = 4) {
  if (t0 == 0.0) throw ValidationError("build_invariant_d1: boost parameter must be nonzero");
  if (period.empty()) throw ValidationError("build_invariant_d1: no weights");
  const double T = std::abs(t0);
  for (auto& [t, a] : period) {
    t = std::fmod(t, T);
    if (t < 0) t += T;
  }
  std::sort(period.begin(), period.end());
  const int m = static_cast<int>(period.size());
  std::vector<std::pair<double, double>> all;
  for (int n = -N; n <= N; ++n)
    for (auto [t, a] : period) all.push_back({t + n * T, a});
  std::sort(all.begin(), all.end());
  std::vector<Wall> walls;
  for (auto [t, a] : all) walls.push_back({h1_normal(t), a});
  const int base = N * m;  // interval just before the first point of period 0
  InvariantBuildResult r;
  r.per_period = m;
  r.polygon = build_polyhedron(Cellulation::arrangement(1, std::move(walls)), base);
  for (auto [t, a] : period)
    if (a < 1e-12) r.polygon.warnings.push_back("build_invariant_d1: weight below the lower bound 1e-12");
  const LorentzIsometry g0 = boost_d1(T);
  const auto& X = r.polygon.vertices;
  const Vec tau = X[base + m] - X[base];
  r.cocycle = {g0, tau};

  std::vector<Word> words;
  for (int len = 1; len <= 3; ++len)
    for (int mask = 0; mask < (1 << len); ++mask) {
      Word w;
      for (int i = 0; i < len; ++i) w.push_back(mask >> i & 1 ? -1 : 1);
      words.push_back(w);
    }
  auto tau_of = [&](const Word& w) {
    int p = 0;
    for (int k : w) p += k;
    return Vec(X[base + p * m] - X[base]);
  };
  r.cocycle_report = cocycle_check({LorentzIsometry{g0.linear, tau}}, words, tau_of);
  r.coboundary_vector = coboundary_solve_d1(r.cocycle);
  r.coboundary_residual = ((Mat::Identity(2, 2) - g0.linear) * r.coboundary_vector - tau).norm();
  const Vec& w = r.coboundary_vector;
  for (int k = 0; k + m < static_cast<int>(X.size()); ++k)
    r.invariance_error =
        std::max(r.invariance_error, (g0.linear * (X[k] - w) - (X[k + m] - w)).norm() / std::max(1.0, X[k + m].norm()));
  return r;
}

}  // namespace lorentzian
