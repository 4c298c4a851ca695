// Quadrature rules, 1-d optimizers and point sets shared by the modules.
#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <thread>
#include <utility>
#include <vector>

#include "core.hpp"

namespace lorentzian::numeric {

constexpr double pi = std::numbers::pi;

/// Full Gauss-Legendre node/weight table on [-1,1] from Boost's half table.
struct GaussRule {
  std::vector<double> x, w;
};

template <unsigned N>
inline const GaussRule& gauss_legendre() {
  static const GaussRule rule = [] {
    using G = boost::math::quadrature::gauss<double, N>;
    GaussRule r;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0.0) {
        r.x.push_back(0.0);
        r.w.push_back(w[i]);
      } else {
        r.x.push_back(a[i]);
        r.w.push_back(w[i]);
        r.x.push_back(-a[i]);
        r.w.push_back(w[i]);
      }
    }
    return r;
  }();
  return rule;
}

/// Composite Gauss-Legendre (32 nodes per panel) on [a,b].
template <class F>
double gauss_panels(F&& f, double a, double b, int panels = 1) {
  const GaussRule& g = gauss_legendre<32>();
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h, c = lo + 0.5 * h;
    for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(c + 0.5 * h * g.x[i]);
  }
  return 0.5 * h * s;
}

template <class F>
double adaptive(F&& f, double a, double b, double tol = 1e-13, unsigned depth = 18) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, depth, tol);
}

/// Composite Simpson for n (even) intervals of equal width h.
inline double simpson(const std::vector<double>& y, double h) {
  const std::size_t n = y.size() - 1;
  if (n < 2 || n % 2) throw ValidationError("simpson: need an even number of intervals");
  double s = y.front() + y.back();
  for (std::size_t i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * y[i];
  return s * h / 3.0;
}

/// Simpson on [a,b] for a function, n even intervals.
template <class F>
double simpson(F&& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

struct LineMax {
  double x = 0.0, fx = 0.0, width = 0.0;
};

/// Golden-section search for a maximum of a unimodal function on [a,b].
template <class F>
LineMax golden_max(F&& f, double a, double b, int iters) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? LineMax{c, fc, b - a} : LineMax{d, fd, b - a};
}

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Normalized elementary symmetric function s_i = e_i(r) / binom(d,i).
inline double elementary_symmetric_mean(const Vec& r, int i) {
  const int d = static_cast<int>(r.size());
  std::vector<double> e(d + 1, 0.0);
  e[0] = 1.0;
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k >= 1; --k) e[k] += e[k - 1] * r[j];
  return e[i] / binom(d, i);
}

/// Directions on S^{d-1} in frame coordinates. d=1: {+1,-1}; d=2: equally
/// spaced angles; d=3: Fibonacci sphere.
inline std::vector<Vec> sphere_directions(int d, int n) {
  std::vector<Vec> out;
  if (d == 1) {
    out.push_back(direction_from_angles(1, 1.0));
    out.push_back(direction_from_angles(1, -1.0));
  } else if (d == 2) {
    for (int k = 0; k < n; ++k) out.push_back(direction_from_angles(2, 2 * pi * k / n));
  } else {
    const double ga = pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < n; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / n;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vec t(3);
      t << r * std::cos(ga * k), r * std::sin(ga * k), z;
      out.push_back(t);
    }
  }
  return out;
}

/// Spiral point set filling the geodesic ball of radius rho_max about the
/// origin of the tangent space (Vogel spiral for d=2). Returned as tangent
/// vectors s = rho * Theta in frame coordinates; s=0 is always first.
inline std::vector<Vec> ball_spiral(int d, int n, double rho_max) {
  std::vector<Vec> out;
  out.push_back(Vec::Zero(d));
  const double ga = pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n - 1; ++i) {
    const double q = (i + 0.5) / (n - 1);
    Vec s(d);
    if (d == 1) {
      s[0] = rho_max * (2 * q - 1);
    } else if (d == 2) {
      const double r = rho_max * std::sqrt(q);
      s << r * std::cos(ga * i), r * std::sin(ga * i);
    } else {
      const double r = rho_max * std::cbrt(q);
      const double z = 1.0 - 2.0 * std::fmod(i * 0.6180339887498949, 1.0);
      const double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
      s << r * rr * std::cos(ga * i), r * rr * std::sin(ga * i), r * z;
    }
    out.push_back(s);
  }
  return out;
}

/// Local ascent on H^d from a start point: alternating golden-section line
/// searches along frame geodesics. Returns (best point, value, last delta).
template <class F>
std::tuple<Vec, double, double> geodesic_ascent(F&& f, Vec x, double fx, double bracket, int steps,
                                                int golden_iters = 60) {
  const int d = static_cast<int>(x.size()) - 1;
  double last = bracket;
  for (int k = 0; k < steps; ++k) {
    Vec dir = Vec::Zero(d);
    dir[k % d] = 1.0;
    auto g = [&](double s) { return f(exp_map(x, s * dir)); };
    LineMax lm = golden_max(g, -bracket, bracket, golden_iters);
    if (lm.fx > fx) {
      x = renormalize(exp_map(x, lm.x * dir));
      fx = lm.fx;
      last = std::abs(lm.x) + lm.width;
    } else {
      last = lm.width;
    }
    if (k % d == d - 1) bracket = std::max(bracket * 0.5, 4.0 * last);
  }
  return {x, fx, last};
}

/// Worker count: LORENTZIAN_THREADS if set, else the hardware concurrency.
inline unsigned thread_count() {
  if (const char* e = std::getenv("LORENTZIAN_THREADS")) {
    const int n = std::atoi(e);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0,n) over contiguous chunks. fn must only write
/// to slot i of its outputs, so results do not depend on scheduling.
template <class F>
void parallel_for(std::size_t n, F&& fn) {
  const unsigned nt = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(nt);
  const std::size_t chunk = (n + nt - 1) / nt;
  for (unsigned t = 0; t < nt; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t * chunk; i < std::min(n, (t + 1) * chunk); ++i) fn(i);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace lorentzian::numeric
