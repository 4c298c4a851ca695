// The d=1 theory: h'' - h = mu on the real line (H^1 parametrized by
// t -> (sinh t, cosh t)), convexity, curves and radii of curvature.
//
// The Dirac solution is h = -e^{-|t|}/2; its convex representative modulo
// cosh/sinh is |sinh t|/2. The opposite sign +e^{-|t|}/2 fails the
// distributional test and the convexity inequality.
#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "core.hpp"
#include "numeric.hpp"
#include "support.hpp"

namespace lorentzian {

using Fn1 = std::function<double(double)>;

/// Continuous density phi on [lo, hi] with a stated bound |phi(s)| <= C e^{growth |s|}.
struct Density1D {
  Fn1 phi;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  double growth = 0.0;
};

struct OneDimMeasure {
  std::vector<std::pair<double, double>> atoms;  ///< (t, w), w > 0
  std::optional<Density1D> density;

  void validate() {
    for (const auto& [t, w] : atoms) {
      if (!std::isfinite(t)) throw ValidationError("one-dim measure: atom location must be finite");
      if (!(w > 0)) throw ValidationError("one-dim measure: atom weights must be > 0");
    }
    std::sort(atoms.begin(), atoms.end());
    if (density) {
      if (!density->phi) throw ValidationError("one-dim measure: density has no function");
      if (!(density->hi > density->lo)) throw ValidationError("one-dim measure: empty density support");
      const bool unbounded = !std::isfinite(density->lo) || !std::isfinite(density->hi);
      if (unbounded && !(density->growth < 1.0))
        throw ValidationError("one-dim measure: density tail check fails, need growth < 1 for Int e^{-|t|} dmu < inf");
    }
  }
};

struct Solution1D {
  Fn1 particular;
  double A = 0.0, B = 0.0;  ///< coefficients of cosh t and sinh t
  std::vector<double> kinks;

  double operator()(double t) const { return particular(t) + A * std::cosh(t) + B * std::sinh(t); }
  Fn1 as_function() const {
    return [s = *this](double t) { return s(t); };
  }
};

namespace detail {

/// Int_a^b f over a possibly infinite interval.
inline double integrate_1d(const Fn1& f, double a, double b) {
  if (!(b > a)) return 0.0;
  if (std::isfinite(a) && std::isfinite(b)) return numeric::adaptive(f, a, b, 1e-14, 25);
  boost::math::quadrature::exp_sinh<double> es;
  if (std::isfinite(a)) return es.integrate([&](double u) { return f(a + u); }, 0.0, std::numeric_limits<double>::infinity());
  if (std::isfinite(b)) return es.integrate([&](double u) { return f(b - u); }, 0.0, std::numeric_limits<double>::infinity());
  return integrate_1d(f, -std::numeric_limits<double>::infinity(), 0.0) +
         integrate_1d(f, 0.0, std::numeric_limits<double>::infinity());
}

}  // namespace detail

/// h = -sum w_i e^{-|t-t_i|}/2 - Int e^{-|t-s|}/2 phi(s) ds + A cosh t + B sinh t.
inline Solution1D solve_1d(OneDimMeasure mu, double A = 0.0, double B = 0.0) {
  mu.validate();
  Solution1D s;
  s.A = A;
  s.B = B;
  for (const auto& a : mu.atoms) s.kinks.push_back(a.first);
  s.particular = [mu](double t) {
    double h = 0;
    for (const auto& [ti, w] : mu.atoms) h -= 0.5 * w * std::exp(-std::abs(t - ti));
    if (mu.density) {
      const Density1D& D = *mu.density;
      const double m = std::clamp(t, D.lo, D.hi);
      auto g = [&](double x) { return std::exp(-std::abs(t - x)) * D.phi(x); };
      h -= 0.5 * (detail::integrate_1d(g, D.lo, m) + detail::integrate_1d(g, m, D.hi));
    }
    return h;
  };
  return s;
}

/// h = Int_1^t sinh(t-s) phi(s) ds + C cosh t + D sinh t.
inline Solution1D solve_1d_smooth(const Fn1& phi, double C = 0.0, double D = 0.0) {
  if (!phi) throw ValidationError("solve_1d_smooth: no density");
  Solution1D s;
  s.A = C;
  s.B = D;
  s.particular = [phi](double t) {
    if (t == 1.0) return 0.0;
    return numeric::adaptive([&](double x) { return std::sinh(t - x) * phi(x); }, 1.0, t, 1e-14, 25);
  };
  return s;
}

/// I_- = Int_{-inf}^1 e^s phi, I_+ = Int_1^inf e^{-s} phi.
inline std::pair<double, double> tail_moments_1d(const Density1D& D) {
  const double im = detail::integrate_1d([&](double x) { return std::exp(x) * D.phi(x); }, D.lo, std::min(1.0, D.hi));
  const double ip = detail::integrate_1d([&](double x) { return std::exp(-x) * D.phi(x); }, std::max(1.0, D.lo), D.hi);
  return {im, ip};
}

/// (C, D) of the smooth form -> (A, B) of the Green form for the same h.
inline std::pair<double, double> cd_to_ab(const Density1D& D, double C, double Dc) {
  const auto [im, ip] = tail_moments_1d(D);
  return {C + 0.5 * (im + ip), Dc - 0.5 * (im - ip)};
}

inline std::pair<double, double> ab_to_cd(const Density1D& D, double A, double B) {
  const auto [im, ip] = tail_moments_1d(D);
  return {A - 0.5 * (im + ip), B + 0.5 * (im - ip)};
}

/// (1 - ((t-c)/R)^2)^3 and its second derivative.
struct Bump1D {
  double c = 0.0, R = 1.0;
  double f(double t) const {
    const double u = (t - c) / R;
    if (std::abs(u) >= 1) return 0.0;
    const double s = 1 - u * u;
    return s * s * s;
  }
  double f2(double t) const {
    const double u = (t - c) / R;
    if (std::abs(u) >= 1) return 0.0;
    const double s = 1 - u * u;
    return (-6.0 * s * s + 24.0 * u * u * s) / (R * R);
  }
};

/// Int h (f'' - f) dt, split at the given breakpoints.
inline double pairing_1d(const Fn1& h, const Bump1D& b, std::vector<double> breaks = {}) {
  std::vector<double> pts{b.c - b.R, b.c + b.R};
  for (double x : breaks)
    if (x > b.c - b.R && x < b.c + b.R) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  double s = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    s += numeric::gauss_panels([&](double t) { return h(t) * (b.f2(t) - b.f(t)); }, pts[i], pts[i + 1], 8);
  return s;
}

/// Int f dmu.
inline double measure_pairing_1d(const OneDimMeasure& mu, const Bump1D& b) {
  double s = 0;
  for (const auto& [t, w] : mu.atoms) s += w * b.f(t);
  if (mu.density) {
    const double lo = std::max(mu.density->lo, b.c - b.R), hi = std::min(mu.density->hi, b.c + b.R);
    if (hi > lo) s += numeric::adaptive([&](double t) { return b.f(t) * mu.density->phi(t); }, lo, hi, 1e-14, 25);
  }
  return s;
}

/// h(rho+a) + h(rho-a) >= 2 cosh(a) h(rho) - tol.
inline ConvexityReport convexity_1d(const Fn1& h, const std::vector<std::pair<double, double>>& samples,
                                    double tol = 1e-9) {
  ConvexityReport r;
  for (auto [rho, a] : samples) {
    const double gap = h(rho + a) + h(rho - a) - 2 * std::cosh(a) * h(rho);
    ++r.checked;
    r.min_eigenvalue = std::min(r.min_eigenvalue, gap);
    if (gap < -tol) {
      Vec p(2), dir(1);
      p << std::sinh(rho), std::cosh(rho);
      dir << 1.0;
      r.witnesses.push_back({p, gap, dir, "h(rho+a)+h(rho-a) < 2cosh(a)h(rho) at rho=" + std::to_string(rho) +
                                              " a=" + std::to_string(a)});
    }
  }
  finish_report(r);
  return r;
}

struct CurvePoint {
  double rho = 0, x1 = 0, x2 = 0;
  int side = 0;  ///< -1 / +1 for the one-sided limits at a kink, 0 otherwise
};

namespace detail {
struct OneSided {
  double left, right, central;
};
inline OneSided one_sided(const Fn1& h, double t, double d) {
  const double h0 = h(t);
  return {(3 * h0 - 4 * h(t - d) + h(t - 2 * d)) / (2 * d), (-3 * h0 + 4 * h(t + d) - h(t + 2 * d)) / (2 * d),
          (h(t + d) - h(t - d)) / (2 * d)};
}
inline bool is_kink(const OneSided& s) {
  return std::abs(s.left - s.right) > 1e-5 * (1 + std::abs(s.left) + std::abs(s.right));
}
}  // namespace detail

/// c(rho) = h'(rho)(cosh rho, sinh rho) - h(rho)(sinh rho, cosh rho). At a
/// kink both one-sided points are emitted; the segment between them is the
/// polygon edge dual to the atom.
inline std::vector<CurvePoint> curve_from_support(const Fn1& h, const std::vector<double>& grid, double step = 1e-4) {
  std::vector<CurvePoint> out;
  for (double r : grid) {
    const double hr = h(r), c = std::cosh(r), s = std::sinh(r);
    const auto d = detail::one_sided(h, r, step);
    auto pt = [&](double dh, int side) { return CurvePoint{r, dh * c - hr * s, dh * s - hr * c, side}; };
    if (detail::is_kink(d)) {
      out.push_back(pt(d.left, -1));
      out.push_back(pt(d.right, +1));
    } else {
      out.push_back(pt(d.central, 0));
    }
  }
  return out;
}

/// Minkowski length of the sampled polyline.
inline double curve_length(const std::vector<CurvePoint>& c) {
  double L = 0;
  for (std::size_t i = 1; i < c.size(); ++i) {
    const double dx = c[i].x1 - c[i - 1].x1, dy = c[i].x2 - c[i - 1].x2;
    L += std::sqrt(std::max(0.0, dx * dx - dy * dy));
  }
  return L;
}

inline void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& c) {
  const auto old = os.precision(17);
  os << "rho,x1,x2,kink\n";
  for (const auto& p : c) os << p.rho << ',' << p.x1 << ',' << p.x2 << ',' << p.side << '\n';
  os.precision(old);
}

/// h''(rho) - h(rho), Richardson-extrapolated central differences.
inline double radius_1d(const Fn1& h, double rho, double delta = 1e-3) {
  if (detail::is_kink(detail::one_sided(h, rho, 1e-4)))
    throw NonDifferentiable("radius_1d: h has a corner at rho=" + std::to_string(rho), {});
  auto D2 = [&](double d) { return (h(rho + d) - 2 * h(rho) + h(rho - d)) / (d * d); };
  return (4 * D2(delta / 2) - D2(delta)) / 3 - h(rho);
}

}  // namespace lorentzian
