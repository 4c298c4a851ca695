// Area measures S_i(K, omega): smooth densities, polyhedral face sums,
// Monte-Carlo epsilon-collar volumes with a polynomial fit, the distributional
// S_1 pairing, and the orthogonal projection / cosmological time.
#pragma once

#include <Eigen/Cholesky>

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "core.hpp"
#include "measure.hpp"
#include "numeric.hpp"
#include "polyhedral.hpp"
#include "support.hpp"

namespace lorentzian {

struct RegionSpec {
  enum class Kind { polar_rect, facet_subset, fundamental_domain };
  Kind kind = Kind::polar_rect;
  int d = 2;
  // polar rectangle about base: rho in [rho0, rho1]; d=1: directions with
  // sign in [a0, a1]; d=2: theta in [a0, a1]; d=3: polar angle in [a0, a1],
  // azimuth in [b0, b1]
  Vec base;
  double rho0 = 0, rho1 = 1, a0 = 0, a1 = 0, b0 = 0, b1 = 0;
  // slab of half-width w about the geodesic ball of radius r (centered at
  // foot) inside the wall <x, normal> = 0
  Vec normal, foot;
  double radius = 0, half_width = 0;
  // d=1: t in [t_start, t_start + period)
  double t_start = 0, period = 0;

  static RegionSpec polar_rect(const Vec& base, double rho0, double rho1, double a0 = 0, double a1 = 0,
                               double b0 = 0, double b1 = 0) {
    RegionSpec r;
    r.kind = Kind::polar_rect;
    r.d = static_cast<int>(base.size()) - 1;
    r.base = base;
    r.rho0 = rho0;
    r.rho1 = rho1;
    r.a0 = a0;
    r.a1 = a1;
    r.b0 = b0;
    r.b1 = b1;
    r.validate();
    return r;
  }
  static RegionSpec facet_subset(const Vec& normal, const Vec& foot, double radius, double half_width) {
    RegionSpec r;
    r.kind = Kind::facet_subset;
    r.d = static_cast<int>(normal.size()) - 1;
    r.normal = normal;
    r.foot = foot;
    r.radius = radius;
    r.half_width = half_width;
    r.validate();
    return r;
  }
  static RegionSpec fundamental_domain(double t_start, double period) {
    RegionSpec r;
    r.kind = Kind::fundamental_domain;
    r.d = 1;
    r.t_start = t_start;
    r.period = period;
    r.validate();
    return r;
  }

  void validate() const {
    require_dimension(d);
    switch (kind) {
      case Kind::polar_rect:
        HPoint::from(base, 1e-9);
        if (!(rho1 > rho0) || rho0 < 0) throw ValidationError("region: need 0 <= rho0 < rho1");
        if (d == 1 && !(a1 >= a0)) throw ValidationError("region: empty direction set");
        if (d == 2 && !(a1 > a0 && a1 - a0 <= 2 * numeric::pi + 1e-12)) throw ValidationError("region: bad theta range");
        if (d == 3 && !(a1 > a0 && a0 >= 0 && a1 <= numeric::pi + 1e-12 && b1 > b0 && b1 - b0 <= 2 * numeric::pi + 1e-12))
          throw ValidationError("region: bad angular box");
        break;
      case Kind::facet_subset:
        SpacelikeUnit::from(normal, 1e-9);
        HPoint::from(foot, 1e-9);
        if (std::abs(minkowski_form(foot, normal)) > 1e-9) throw ValidationError("region: foot must lie on the wall");
        if (!(half_width > 0) || (d > 1 && !(radius > 0))) throw ValidationError("region: empty slab");
        break;
      case Kind::fundamental_domain:
        if (d != 1 || !(period > 0)) throw ValidationError("region: fundamental domain needs d=1 and period > 0");
        break;
    }
  }

  static bool in_arc(double x, double lo, double hi) {
    double u = std::fmod(x - lo, 2 * numeric::pi);
    if (u < 0) u += 2 * numeric::pi;
    return u <= hi - lo + 1e-15;
  }

  bool contains(const Vec& eta) const {
    switch (kind) {
      case Kind::polar_rect: {
        const Polar p = polar_from(base, eta);
        if (p.rho < rho0 || p.rho > rho1) return false;
        if (p.degenerate) return rho0 == 0;
        if (d == 1) return p.theta[0] >= a0 && p.theta[0] <= a1;
        if (d == 2) return in_arc(std::atan2(p.theta[1], p.theta[0]), a0, a1);
        const double th = std::acos(std::clamp(p.theta[2], -1.0, 1.0));
        return th >= a0 && th <= a1 && in_arc(std::atan2(p.theta[1], p.theta[0]), b0, b1);
      }
      case Kind::facet_subset: {
        const double z = minkowski_form(eta, normal);
        if (std::asinh(std::abs(z)) > half_width) return false;
        const Vec f = renormalize(eta - z * normal);
        return hyperbolic_distance(f, foot) <= radius;
      }
      case Kind::fundamental_domain: {
        const double t = std::asinh(eta[0]);
        return t >= t_start && t < t_start + period;
      }
    }
    return false;
  }

  /// Hyperbolic d-volume.
  double volume() const {
    switch (kind) {
      case Kind::polar_rect: {
        const double dr = rho1 - rho0;
        if (d == 1) return dr * ((a0 <= 1 && a1 >= 1) + (a0 <= -1 && a1 >= -1));
        if (d == 2) return (a1 - a0) * (std::cosh(rho1) - std::cosh(rho0));
        auto F = [](double r) { return std::sinh(2 * r) / 4 - r / 2; };
        return (std::cos(a0) - std::cos(a1)) * (b1 - b0) * (F(rho1) - F(rho0));
      }
      case Kind::facet_subset: {
        const double w = half_width;
        if (d == 1) return 2 * w;
        if (d == 2) return 2 * std::sinh(w) * 2 * radius;
        return (w + std::sinh(2 * w) / 2) * 2 * numeric::pi * (std::cosh(radius) - 1);
      }
      case Kind::fundamental_domain: return period;
    }
    return 0;
  }

  /// A geodesic ball containing the region.
  std::pair<Vec, double> bounding_ball() const {
    switch (kind) {
      case Kind::polar_rect: return {base, rho1};
      case Kind::facet_subset: return {foot, radius + half_width};
      case Kind::fundamental_domain: {
        Vec c(2);
        c << std::sinh(t_start + period / 2), std::cosh(t_start + period / 2);
        return {c, period / 2};
      }
    }
    return {base, 0};
  }

  /// Points covering the region (interior and boundary), n per parameter.
  std::vector<Vec> grid(int n) const {
    std::vector<Vec> out;
    auto lin = [n](double lo, double hi, int i) { return lo + (hi - lo) * i / (n - 1); };
    switch (kind) {
      case Kind::polar_rect:
        for (int i = 0; i < n; ++i) {
          const double r = lin(rho0, rho1, i);
          if (d == 1) {
            for (int s : {-1, 1})
              if (s >= a0 && s <= a1) out.push_back(polar_to(base, r, direction_from_angles(1, s)));
          } else if (d == 2) {
            for (int j = 0; j < n; ++j) out.push_back(polar_to(base, r, direction_from_angles(2, lin(a0, a1, j))));
          } else {
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k)
                out.push_back(polar_to(base, r, direction_from_angles(3, lin(a0, a1, j), lin(b0, b1, k))));
          }
        }
        break;
      case Kind::facet_subset: {
        const Mat E = tangent_frame(foot);
        // frame directions of the wall at foot: project the frame off the normal
        Vec nf = frame_coords(foot, normal);
        for (int i = 0; i < n; ++i) {
          const double s = lin(-half_width, half_width, i);
          const int m = d == 1 ? 1 : n;
          for (int j = 0; j < m; ++j) {
            Vec p = foot;
            if (d == 2) {
              Vec t(2);
              t << -nf[1], nf[0];
              p = exp_map(foot, lin(-radius, radius, j) * t / t.norm());
            } else if (d == 3) {
              Eigen::Vector3d n3(nf[0], nf[1], nf[2]);
              Eigen::Vector3d e1 = n3.unitOrthogonal(), e2 = n3.cross(e1).normalized();
              for (int k = 0; k < n; ++k) {
                const double ang = 2 * numeric::pi * k / n, rr = lin(0, radius, j);
                Vec t(3);
                t = (std::cos(ang) * e1 + std::sin(ang) * e2) * rr;
                Vec q = exp_map(foot, t);
                out.push_back(renormalize(std::cosh(s) * q + std::sinh(s) * normal));
              }
              continue;
            }
            out.push_back(renormalize(std::cosh(s) * p + std::sinh(s) * normal));
          }
        }
        (void)E;
        break;
      }
      case Kind::fundamental_domain:
        for (int i = 0; i < n; ++i) {
          const double t = lin(t_start, t_start + period, i);
          Vec p(2);
          p << std::sinh(t), std::cosh(t);
          out.push_back(p);
        }
        break;
    }
    return out;
  }
};

struct AreaReport {
  int order = 0;
  double value = 0;
  double error = 0;
  std::string method;
  std::uint64_t seed = 0;
};

inline void write_area_csv(std::ostream& os, const std::vector<AreaReport>& rows) {
  const auto old = os.precision(17);
  os << "order,value,error,method,seed\n";
  for (const auto& r : rows) os << r.order << ',' << r.value << ',' << r.error << ',' << r.method << ',' << r.seed << '\n';
  os.precision(old);
}

/// s_i: the normalized i-th elementary symmetric function of the radii.
inline double smooth_area_density(const SupportSpec& s, const Vec& eta, int i) {
  const int d = static_cast<int>(eta.size()) - 1;
  if (i < 0 || i > d) throw ValidationError("smooth_area_density: order out of range");
  if (i == 0) return 1.0;
  return numeric::elementary_symmetric_mean(curvature(s, eta).radii, i);
}

/// Int_omega s_i dH^d over a polar rectangle by Gauss quadrature.
inline double smooth_area_integral(const SupportSpec& s, const RegionSpec& w, int i, int nodes = 64) {
  if (w.kind != RegionSpec::Kind::polar_rect) throw ValidationError("smooth_area_integral: polar rectangles only");
  const int d = w.d, panels = std::max(1, nodes / 32);
  auto radial = [&](const Vec& th) {
    return numeric::gauss_panels(
        [&](double r) { return std::pow(std::sinh(r), d - 1) * smooth_area_density(s, polar_to(w.base, r, th), i); },
        w.rho0, w.rho1, panels);
  };
  if (d == 1) {
    double acc = 0;
    for (int sg : {-1, 1})
      if (sg >= w.a0 && sg <= w.a1) acc += radial(direction_from_angles(1, sg));
    return acc;
  }
  if (d == 2) return numeric::gauss_panels([&](double a) { return radial(direction_from_angles(2, a)); }, w.a0, w.a1, panels);
  return numeric::gauss_panels(
      [&](double a) {
        return std::sin(a) *
               numeric::gauss_panels([&](double b) { return radial(direction_from_angles(3, a, b)); }, w.b0, w.b1, panels);
      },
      w.a0, w.a1, panels);
}

// --- polyhedral area --------------------------------------------------------

namespace detail {

/// Base point and orthonormal tangent basis of the flat cons^perp cap H^d.
struct Flat {
  Vec p;
  std::vector<Vec> tangents;
};

inline std::optional<Flat> make_flat(const std::vector<Vec>& cons, int d) {
  const int n = static_cast<int>(cons.size());
  Mat G(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) G(a, b) = minkowski_form(cons[a], cons[b]);
  Eigen::LLT<Mat> llt(G);
  if (n > 0 && (llt.info() != Eigen::Success || G.determinant() < 1e-14)) return std::nullopt;
  const Mat Ginv = n > 0 ? Mat(G.inverse()) : Mat();
  auto project = [&](const Vec& v) {
    Vec out = v;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) out -= cons[a] * Ginv(a, b) * minkowski_form(cons[b], v);
    return out;
  };
  Flat f;
  Vec p = project(origin(d));
  if (!(minkowski_sq(p) < 0)) return std::nullopt;
  if (p[d] < 0) p = -p;
  f.p = renormalize(p);
  for (int i = 0; i < d && static_cast<int>(f.tangents.size()) < d - n; ++i) {
    Vec t = project(basis_vector(d, i));
    t += minkowski_form(t, f.p) * f.p;
    for (const Vec& o : f.tangents) t -= minkowski_form(t, o) * o;
    const double q = minkowski_sq(t);
    if (q > 1e-12) f.tangents.push_back(t / std::sqrt(q));
  }
  return f;
}

/// Length of {t : gamma(t) in omega} on a geodesic, by a scan plus bisection.
inline double line_measure(const RegionSpec& w, const Vec& p, const Vec& e, int scan = 4096) {
  auto [c, R] = w.bounding_ball();
  const double L = hyperbolic_distance(p, c) + R + 1e-9;
  auto in = [&](double t) { return w.contains(std::cosh(t) * p + std::sinh(t) * e); };
  auto edge = [&](double lo, double hi, bool in_lo) {
    for (int k = 0; k < 60; ++k) {
      const double m = 0.5 * (lo + hi);
      (in(m) == in_lo ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
  };
  double total = 0, start = -L;
  bool state = in(-L);
  const double h = 2 * L / scan;
  for (int k = 1; k <= scan; ++k) {
    const double t0 = -L + (k - 1) * h, t1 = -L + k * h;
    const bool s1 = in(t1);
    if (s1 != state) {
      const double x = edge(t0, t1, state);
      if (state) total += x - start;
      else start = x;
      state = s1;
    }
  }
  if (state) total += L - start;
  return total;
}

/// Area of omega cap a totally geodesic H^2, polar quadrature about p.
inline double plane_measure(const RegionSpec& w, const Flat& f, int n_theta = 512, int scan = 1024) {
  auto [c, R] = w.bounding_ball();
  const double L = hyperbolic_distance(f.p, c) + R + 1e-9;
  double total = 0;
  for (int j = 0; j < n_theta; ++j) {
    const double a = 2 * numeric::pi * (j + 0.5) / n_theta;
    const Vec e = std::cos(a) * f.tangents[0] + std::sin(a) * f.tangents[1];
    auto in = [&](double r) { return w.contains(std::cosh(r) * f.p + std::sinh(r) * e); };
    double start = 0;
    bool state = in(0.0);
    const double h = L / scan;
    double ray = 0;
    for (int k = 1; k <= scan; ++k) {
      const double r0 = (k - 1) * h, r1 = k * h;
      const bool s1 = in(r1);
      if (s1 != state) {
        double lo = r0, hi = r1;
        for (int it = 0; it < 60; ++it) {
          const double m = 0.5 * (lo + hi);
          (in(m) == state ? lo : hi) = m;
        }
        const double x = 0.5 * (lo + hi);
        if (state) ray += std::cosh(x) - std::cosh(start);
        else start = x;
        state = s1;
      }
    }
    if (state) ray += std::cosh(L) - std::cosh(start);
    total += ray;
  }
  return total * 2 * numeric::pi / n_theta;
}

inline Vec wall_point_d1(const Vec& v) {
  Vec p(2);
  p << v[1], v[0];
  if (p[1] < 0) p = -p;
  return p;
}

}  // namespace detail

/// binom(d,i)^{-1} sum over open i-faces e of lambda_i(e) nu_{d-i}(omega cap G(e)).
/// For an arrangement the i-faces are the zonotopes dual to codimension-i
/// flats; summing over i-subsets T of walls with a spacelike span,
///   lambda = prod_{t in T} a_t * sqrt(det Gram(v_T)).
inline AreaReport polyhedral_area(const PolyhedralFConvex& P, const RegionSpec& w, int i) {
  const int d = P.d;
  if (i < 0 || i > d) throw ValidationError("polyhedral_area: order out of range");
  if (w.d != d) throw ValidationError("polyhedral_area: region dimension mismatch");
  AreaReport r;
  r.order = i;
  r.method = "polyhedral";
  if (i == 0) {
    r.value = w.volume();
    return r;
  }
  if (P.source.kind != Cellulation::Kind::arrangement)
    throw NumericalRefusal("polyhedral_area: region overlaps an unrepresented part of the decomposition (explicit complex)");
  const auto& walls = P.source.walls;
  const int n = static_cast<int>(walls.size());
  double total = 0;
  std::vector<int> idx(i);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == i) {
      std::vector<Vec> cons;
      double weight = 1;
      Mat G(i, i);
      for (int a = 0; a < i; ++a) {
        cons.push_back(walls[idx[a]].normal);
        weight *= walls[idx[a]].weight;
        for (int b = 0; b < i; ++b) G(a, b) = minkowski_form(walls[idx[a]].normal, walls[idx[b]].normal);
      }
      const double det = G.determinant();
      if (!(det > 1e-14)) return;
      const auto flat = detail::make_flat(cons, d);
      if (!flat) return;
      const int k = d - i;
      double nu = 0;
      if (k == 0) nu = w.contains(d == 1 ? detail::wall_point_d1(cons[0]) : flat->p) ? 1.0 : 0.0;
      else if (k == 1) nu = detail::line_measure(w, flat->p, flat->tangents.at(0));
      else nu = detail::plane_measure(w, *flat);
      total += weight * std::sqrt(det) * nu;
      return;
    }
    for (int s = start; s < n; ++s) {
      idx[depth] = s;
      rec(s + 1, depth + 1);
    }
  };
  rec(0, 0);
  r.value = total / numeric::binom(d, i);
  return r;
}

// --- projection and cosmological time ------------------------------------------

struct ProjectionResult {
  bool inside = false;
  double T = -std::numeric_limits<double>::infinity();
  Vec r, N;
  double error = 0;
};

namespace detail {

/// h = c + <p, eta> for Constant / ConeApex / Sum / Scale trees.
inline std::optional<std::pair<double, Vec>> ball_like(const SupportSpec& s, int d) {
  return std::visit(
      overloaded{
          [&](const spec::Constant& n) -> std::optional<std::pair<double, Vec>> {
            return std::pair<double, Vec>{n.c, Vec::Zero(d + 1)};
          },
          [&](const spec::ConeApex& n) -> std::optional<std::pair<double, Vec>> { return std::pair<double, Vec>{0.0, n.p}; },
          [&](const spec::Sum& n) -> std::optional<std::pair<double, Vec>> {
            std::pair<double, Vec> acc{0.0, Vec::Zero(d + 1)};
            for (const auto& t : n.terms) {
              auto b = ball_like(t, d);
              if (!b) return std::nullopt;
              acc.first += b->first;
              acc.second += b->second;
            }
            return acc;
          },
          [&](const spec::Scale& n) -> std::optional<std::pair<double, Vec>> {
            auto b = ball_like(n.child, d);
            if (!b) return std::nullopt;
            return std::pair<double, Vec>{n.lambda * b->first, n.lambda * b->second};
          },
          [&](const auto&) -> std::optional<std::pair<double, Vec>> { return std::nullopt; },
      },
      s.node().v);
}

inline double future_norm(const Vec& w) {
  const double q = minkowski_sq(w);
  return (q < 0 && w[w.size() - 1] > 0) ? std::sqrt(-q) : 0.0;
}

}  // namespace detail

/// T(k) = min over eta of h(eta) - <k, eta>, N the minimizer, r = k - T N.
inline ProjectionResult project_and_time(const SupportSpec& s, const Vec& k) {
  const int d = static_cast<int>(k.size()) - 1;
  ProjectionResult out;
  if (auto b = detail::ball_like(s, d)) {
    const Vec w = k - b->second;
    const double n = detail::future_norm(w);
    if (n == 0.0) return out;
    out.N = w / n;
    out.T = n + b->first;
    out.r = k - out.T * out.N;
    out.inside = out.T > 0;
    return out;
  }
  if (const auto* pm = std::get_if<spec::PolyhedralMax>(&s.node().v); pm && pm->vertices.size() <= 2) {
    const Vec& p0 = pm->vertices.front();
    const Vec& p1 = pm->vertices.back();
    auto f = [&](double l) { return detail::future_norm(k - (1 - l) * p0 - l * p1); };
    numeric::LineMax lm{0.0, f(0.0), 0.0};
    if (pm->vertices.size() == 2) {
      lm = numeric::golden_max(f, 0.0, 1.0, 80);
      if (f(0.0) > lm.fx) lm = {0.0, f(0.0), lm.width};
      if (f(1.0) > lm.fx) lm = {1.0, f(1.0), lm.width};
    }
    if (lm.fx == 0.0) return out;
    out.T = lm.fx;
    out.r = (1 - lm.x) * p0 + lm.x * p1;
    out.N = (k - out.r) / out.T;
    out.inside = true;
    out.error = lm.width;
    return out;
  }
  // general: minimize h(eta) - <k, eta> over H^d
  if (classify(k) != CausalClass::future_timelike) return out;
  const Vec c = normalize_future(k).first.vec;
  auto obj = [&](const Vec& eta) {
    try {
      return -(eval_h(s, eta) - minkowski_form(k, eta));
    } catch (const DomainError&) {
      return -std::numeric_limits<double>::infinity();
    }
  };
  Vec best = c;
  double fb = obj(c);
  for (const Vec& sv : numeric::ball_spiral(d, 4096, 6.0)) {
    const Vec e = exp_map(c, sv);
    const double v = obj(e);
    if (v > fb) {
      fb = v;
      best = e;
    }
  }
  auto [x, fx, last] = numeric::geodesic_ascent(obj, best, fb, 0.1, 50);
  out.T = -fx;
  out.N = x;
  out.r = k - out.T * out.N;
  out.inside = out.T > 0;
  out.error = last;
  return out;
}

// --- Monte Carlo collar volumes --------------------------------------------------

struct CollarBox {
  Vec lo, hi;
  double volume() const { return (hi - lo).prod(); }
};

/// Euclidean box of {chi(eta) + s eta : eta in omega, s in [0, eps]}, padded by 10%.
inline CollarBox collar_box(const SupportSpec& s, const RegionSpec& w, double eps, int n = 24) {
  const int d = w.d;
  Vec lo = Vec::Constant(d + 1, std::numeric_limits<double>::infinity()), hi = -lo;
  auto add = [&](const Vec& x) {
    lo = lo.cwiseMin(x);
    hi = hi.cwiseMax(x);
  };
  for (const Vec& eta : w.grid(n)) {
    const NormalResult nr = normal_representation(s, eta);
    std::vector<Vec> chis;
    if (nr.differentiable) chis.push_back(nr.chi);
    else chis = nr.tie_set;
    for (const Vec& c : chis) {
      add(c);
      add(c + eps * eta);
    }
  }
  const Vec ext = hi - lo;
  for (int i = 0; i <= d; ++i) {
    const double pad = 0.1 * std::max(ext[i], 1e-3 * eps);
    lo[i] -= pad;
    hi[i] += pad;
  }
  return {lo, hi};
}

struct CollarCounts {
  CollarBox box;
  std::vector<double> eps;
  std::vector<std::uint64_t> counts;  ///< nested: T in (0, eps_j] and N in omega
  std::uint64_t n = 0;
};

inline CollarCounts collar_counts(const SupportSpec& s, const RegionSpec& w, std::vector<double> eps, std::uint64_t n,
                                  std::uint64_t seed) {
  if (eps.empty() || n == 0) throw ValidationError("epsilon_volume_mc: need epsilons and samples");
  for (double e : eps)
    if (!(e > 0)) throw ValidationError("epsilon_volume_mc: epsilons must be > 0");
  const double emax = *std::max_element(eps.begin(), eps.end());
  CollarCounts cc;
  cc.box = collar_box(s, w, emax);
  if (!std::isfinite(cc.box.volume())) throw NumericalRefusal("epsilon_volume_mc: bounding box construction failed");
  cc.eps = eps;
  cc.n = n;
  constexpr std::uint64_t block = 1 << 15;
  const std::uint64_t nb = (n + block - 1) / block;
  const std::size_t m = eps.size();
  std::vector<std::vector<std::uint64_t>> per(nb, std::vector<std::uint64_t>(m, 0));
  const int d = w.d;
  numeric::parallel_for(nb, [&](std::size_t b) {
    std::seed_seq sq{static_cast<std::uint64_t>(seed), static_cast<std::uint64_t>(b)};
    std::mt19937_64 rng(sq);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const std::uint64_t cnt = std::min<std::uint64_t>(block, n - b * block);
    Vec x(d + 1);
    for (std::uint64_t j = 0; j < cnt; ++j) {
      for (int i = 0; i <= d; ++i) x[i] = cc.box.lo[i] + (cc.box.hi[i] - cc.box.lo[i]) * U(rng);
      const ProjectionResult pr = project_and_time(s, x);
      if (!pr.inside || !(pr.T <= emax) || !w.contains(pr.N)) continue;
      for (std::size_t e = 0; e < m; ++e)
        if (pr.T <= eps[e]) ++per[b][e];
    }
  });
  cc.counts.assign(m, 0);
  for (const auto& v : per)
    for (std::size_t e = 0; e < m; ++e) cc.counts[e] += v[e];
  return cc;
}

struct VolumeEstimate {
  double volume = 0, stderr_ = 0;
};

inline VolumeEstimate epsilon_volume_mc(const SupportSpec& s, const RegionSpec& w, double eps, std::uint64_t n,
                                        std::uint64_t seed) {
  const CollarCounts cc = collar_counts(s, w, {eps}, n, seed);
  const double B = cc.box.volume(), p = static_cast<double>(cc.counts[0]) / n;
  return {B * p, B * std::sqrt(p * (1 - p) / n)};
}

struct AreaFit {
  std::vector<AreaReport> reports;  ///< orders 0..d
  std::vector<double> eps, volumes, volume_errors;
  double chi2 = 0;
};

/// Generalized least squares of V_eps = (1/(d+1)) sum_i binom(d+1,i) eps^{d+1-i} S_i
/// on nested counts from a single run at the largest epsilon. The nested
/// estimates are multinomial: Cov(p_j, p_l) = p_min (1 - p_max) / n.
inline AreaFit fit_area_polynomial(const SupportSpec& s, const RegionSpec& w, std::vector<double> eps, std::uint64_t n,
                                   std::uint64_t seed) {
  const int d = w.d;
  std::sort(eps.begin(), eps.end());
  eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
  if (static_cast<int>(eps.size()) < d + 1)
    throw ValidationError("fit_area_polynomial: ill-conditioned fit, need at least d+1 distinct epsilons");
  const CollarCounts cc = collar_counts(s, w, eps, n, seed);
  const int m = static_cast<int>(eps.size());
  const double B = cc.box.volume();
  Vec V(m);
  for (int j = 0; j < m; ++j) V[j] = B * static_cast<double>(cc.counts[j]) / n;
  Mat A(m, d + 1);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i <= d; ++i) A(j, i) = numeric::binom(d + 1, i) / (d + 1) * std::pow(eps[j], d + 1 - i);
  // Weights from observed counts correlate with the noise and bias the fit
  // low; iterate with the covariance evaluated at the fitted model instead.
  Vec p(m);
  for (int j = 0; j < m; ++j) p[j] = static_cast<double>(cc.counts[j]) / n;
  Mat Sig(m, m), Minv;
  Vec S;
  Eigen::LDLT<Mat> ldlt;
  for (int it = 0; it < 4; ++it) {
    for (int j = 0; j < m; ++j)
      for (int l = 0; l < m; ++l) {
        const double pj = std::clamp(p[j], 1.0 / n, 1.0), pl = std::clamp(p[l], 1.0 / n, 1.0);
        Sig(j, l) = B * B * std::min(pj, pl) * (1 - std::max(pj, pl)) / n;
      }
    Sig.diagonal().array() += B * B * 1e-12 / n;
    ldlt.compute(Sig);
    const Mat M = A.transpose() * ldlt.solve(A);
    Minv = M.inverse();
    S = Minv * (A.transpose() * ldlt.solve(V));
    p = (A * S) / B;
  }
  const Vec res = V - A * S;
  AreaFit f;
  f.chi2 = res.dot(ldlt.solve(res));
  f.eps = eps;
  for (int j = 0; j < m; ++j) {
    f.volumes.push_back(V[j]);
    f.volume_errors.push_back(std::sqrt(Sig(j, j)));
  }
  for (int i = 0; i <= d; ++i) f.reports.push_back({i, S[i], std::sqrt(std::max(0.0, Minv(i, i))), "mc-fit", seed});
  return f;
}

// --- distributional S_1 ----------------------------------------------------------

struct PairingQuadrature {
  int radial_panels = 8;
  int angular_nodes = 720;
};

/// (S_1(h), f) = Int h ((1/d) Laplacian f - f) over the bump support, polar
/// quadrature about the bump center.
inline double s1_pairing(const SupportSpec& h, const Bump& f, const PairingQuadrature& q = {}) {
  f.validate();
  const int d = f.dim();
  auto sphere = [&](double rho) {
    if (d == 1) {
      double a = 0;
      for (int sg : {-1, 1}) a += eval_h(h, polar_to(f.center, rho, direction_from_angles(1, sg)));
      return a;
    }
    if (d == 2) {
      double a = 0;
      for (int j = 0; j < q.angular_nodes; ++j)
        a += eval_h(h, polar_to(f.center, rho, direction_from_angles(2, 2 * numeric::pi * j / q.angular_nodes)));
      return a * 2 * numeric::pi / q.angular_nodes;
    }
    const int nphi = q.angular_nodes / 2;
    const int pan = std::max(1, q.angular_nodes / 64);
    return numeric::gauss_panels(
        [&](double th) {
          double a = 0;
          for (int j = 0; j < nphi; ++j)
            a += eval_h(h, polar_to(f.center, rho, direction_from_angles(3, th, 2 * numeric::pi * j / nphi)));
          return std::sin(th) * a * 2 * numeric::pi / nphi;
        },
        0.0, numeric::pi, pan);
  };
  return numeric::gauss_panels(
      [&](double rho) {
        const double g = f.laplacian(rho) / d - f.profile(rho);
        return std::pow(std::sinh(rho), d - 1) * g * sphere(rho);
      },
      0.0, f.radius, q.radial_panels);
}

}  // namespace lorentzian
