// Kernel solvers for the Christoffel problem (1/d)Laplacian h - h = mu on
// H^d: smooth densities, atoms and walls, the two convexity criteria,
// ambient residual verification and the periodic d=1 solver.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "core.hpp"
#include "kernel.hpp"
#include "measure.hpp"
#include "numeric.hpp"
#include "support.hpp"

namespace lorentzian {

struct QuadratureSpec {
  double rho_max = 0.0;  ///< 0 means automatic
  int radial_nodes = 400;
  double grading = 2.0;
  int angular_nodes = 64;

  void validate() const {
    if (rho_max < 0) throw ValidationError("quadrature: rho_max must be > 0 (or 0 for automatic)");
    if (radial_nodes < 8 || angular_nodes < 8) throw ValidationError("quadrature: node counts must be >= 8");
    if (!(grading >= 1)) throw ValidationError("quadrature: grading must be >= 1");
  }
};

namespace detail {

/// Integrals over the unit sphere of directions at x of f(exp_x(rho Theta))
/// and of f * <Theta, X>^2, for the radial bump f. The bump is radial about
/// its center, so only the angle to the center direction matters and the
/// integral restricts to the arc (cap) that meets the support.
struct SphereMoments {
  double m0 = 0, mX2 = 0;
};

struct BumpGeometry {
  double D = 0;  ///< dist(x, center)
  Vec u;  ///< unit direction to the center (frame coordinates), if D > 0
};

inline BumpGeometry bump_geometry(const Bump& b, const Vec& x) {
  const Polar p = polar_from(x, b.center);
  return {p.rho, p.theta};
}

inline SphereMoments sphere_moments(const Bump& b, const BumpGeometry& g, const Vec& x, double rho,
                                    const Vec* X, int nodes) {
  const int d = b.dim();
  SphereMoments m;
  if (d == 1) {
    for (int s : {1, -1}) {
      Vec th(1);
      th[0] = s;
      const double f = b(exp_map(x, rho * th));
      m.m0 += f;
      if (X) m.mX2 += f * (*X)[0] * (*X)[0];
    }
    return m;
  }
  const double R = b.radius, D = g.D;
  const double sr = std::sinh(rho), sD = std::sinh(D), hd = std::sinh(0.5 * (rho - D));
  // cosh(r) - 1 = 2 sinh^2((rho-D)/2) + 2 sinh(rho) sinh(D) sin^2(alpha/2)
  const double base = 2 * hd * hd, cap = std::cosh(R) - 1.0;
  if (base >= cap) return m;
  double alpha0 = numeric::pi;
  if (sr * sD > 0) {
    const double q = (cap - base) / (2 * sr * sD);
    if (q < 1) alpha0 = 2 * std::asin(std::sqrt(q));
  }
  auto f_at = [&](double alpha) {
    const double sa = std::sin(0.5 * alpha);
    const double e = base + 2 * sr * sD * sa * sa;
    const double r = std::log1p(e + std::sqrt(e * (e + 2)));
    return b.profile(r);
  };
  double uX = 0, X2 = 0, vX = 0;
  if (X) {
    X2 = X->squaredNorm();
    if (D > 0) uX = g.u.dot(*X);
    if (d == 2 && D > 0) vX = -g.u[1] * (*X)[0] + g.u[0] * (*X)[1];
  }
  const int panels = std::max(1, nodes / 32);
  if (d == 2) {
    m.m0 = 2 * numeric::gauss_panels(f_at, 0.0, alpha0, panels);
    if (X) {
      if (D > 0) {
        m.mX2 = 2 * numeric::gauss_panels(
                        [&](double a) {
                          const double c = std::cos(a), s = std::sin(a);
                          return f_at(a) * (c * c * uX * uX + s * s * vX * vX);
                        },
                        0.0, alpha0, panels);
      } else {
        m.mX2 = 0.5 * X2 * m.m0;  // f constant on the circle
      }
    }
    return m;
  }
  m.m0 = 2 * numeric::pi * numeric::gauss_panels([&](double a) { return f_at(a) * std::sin(a); }, 0.0, alpha0, panels);
  if (X) {
    if (D > 0) {
      m.mX2 = numeric::gauss_panels(
          [&](double a) {
            const double c = std::cos(a), s = std::sin(a);
            return f_at(a) * s * (2 * numeric::pi * c * c * uX * uX + numeric::pi * s * s * (X2 - uX * uX));
          },
          0.0, alpha0, panels);
    } else {
      m.mX2 = X2 * m.m0 / 3.0;
    }
  }
  return m;
}

/// Radial pieces on which the sphere moments are smooth, with a cosine map
/// clustering nodes at both ends of each piece.
template <class F>
double radial_integral(const Bump& b, const BumpGeometry& g, const QuadratureSpec& q, F&& integrand) {
  const double R = b.radius, D = g.D;
  std::vector<std::pair<double, double>> pieces;
  if (D < R) {
    if (D > 0) pieces.push_back({0.0, R - D});
    else pieces.push_back({0.0, R});
    if (D > 0) pieces.push_back({R - D, R + D});
  } else {
    pieces.push_back({D - R, D + R});
  }
  const int panels = std::max(1, q.radial_nodes / (32 * static_cast<int>(pieces.size())));
  const double gexp = 0.5 * q.grading;
  double total = 0;
  for (auto [a, c] : pieces) {
    const double L = c - a;
    auto mapped = [&](double u) {
      const double s = 0.5 * (1 - std::cos(numeric::pi * u));
      const double ds = 0.5 * numeric::pi * std::sin(numeric::pi * u);
      const double sg = std::pow(s, gexp);
      const double dsg = gexp == 1.0 ? ds : gexp * std::pow(s, gexp - 1) * ds;
      const double rho = a + L * sg;
      if (!(rho > 0)) return 0.0;
      return integrand(rho) * L * dsg;
    };
    total += numeric::gauss_panels(mapped, 0.0, 1.0, panels);
  }
  return total;
}

inline void check_truncation(const Bump& b, const BumpGeometry& g, const QuadratureSpec& q, const char* op) {
  if (q.rho_max > 0 && q.rho_max < g.D + b.radius)
    throw NumericalRefusal(std::string(op) + ": rho_max does not cover the density support");
}

}  // namespace detail

/// h_phi(x) = d Int_0^inf k(rho) Int_{dB_rho(x)} phi dA drho.
inline double solve_smooth(const KernelContext& ctx, const Bump& phi, const Vec& x, const QuadratureSpec& q = {}) {
  q.validate();
  if (phi.dim() != ctx.d || x.size() != ctx.d + 1) throw ValidationError("solve_smooth: dimension mismatch");
  const detail::BumpGeometry g = detail::bump_geometry(phi, x);
  detail::check_truncation(phi, g, q, "solve_smooth");
  const double I = detail::radial_integral(phi, g, q, [&](double rho) {
    const detail::SphereMoments m = detail::sphere_moments(phi, g, x, rho, nullptr, q.angular_nodes);
    if (m.m0 == 0.0) return 0.0;
    return kernel_k(ctx, rho) * std::pow(std::sinh(rho), ctx.d - 1) * m.m0;
  });
  return ctx.d * I;
}

/// The wall solution a * Int_wall k(dist(x,y)) dnu_{d-1}(y), by the
/// hyperbolic Pythagorean relation cosh dist = cosh(delta) cosh(r) with r
/// the distance from the foot of x on the wall.
inline double wall_solution(const KernelContext& ctx, const Wall& w, const Vec& x) {
  const double z = minkowski_form(x, w.normal);
  const double delta = std::asinh(std::abs(z));
  if (ctx.d == 1) return w.weight * -0.5 * std::exp(-delta);
  const double b1 = z * z / (std::sqrt(1 + z * z) + 1);  // cosh(delta) - 1
  auto g = [&](double r) {
    const double hr = std::sinh(0.5 * r);
    const double e = b1 * std::cosh(r) + 2 * hr * hr;
    if (!(e > 0)) return 0.0;
    const double rho = std::log1p(e + std::sqrt(e * (e + 2)));
    const double k = kernel_k(ctx, rho);
    return ctx.d == 2 ? 2.0 * k : 2 * numeric::pi * k * std::sinh(r);
  };
  double rmax = 1;
  while (rmax < 80 && std::abs(g(rmax)) >= 1e-16) rmax += 1;
  std::vector<double> brk{0.0};
  for (double r = std::max(delta, 1e-10); r < 1.0; r *= 4) brk.push_back(r);
  for (double r = 1.0; r < rmax; r *= 2) brk.push_back(r);
  brk.push_back(rmax);
  double s = 0;
  for (std::size_t i = 0; i + 1 < brk.size(); ++i)
    if (brk[i + 1] > brk[i]) s += numeric::gauss_panels(g, brk[i], brk[i + 1], 1);
  return w.weight * s;
}

/// h_mu(x) = d Int G(x,y) dmu(y).
inline double solve_measure(const KernelContext& ctx, const MeasureSpec& mu, const Vec& x, const QuadratureSpec& q = {}) {
  mu.validate(ctx.d);
  if (x.size() != ctx.d + 1) throw ValidationError("solve_measure: dimension mismatch");
  double h = 0;
  for (const Atom& a : mu.atoms) {
    const double r = hyperbolic_distance(x, a.point);
    if (ctx.d >= 2 && r < 1e-6)
      throw NumericalRefusal("solve_measure: query within 1e-6 of an atom (singular point)");
    h += ctx.d * a.weight * (ctx.d == 1 ? -0.5 * std::exp(-r) : kernel_k(ctx, r));
  }
  for (const Wall& w : mu.walls) h += wall_solution(ctx, w, x);
  if (mu.density) h += solve_smooth(ctx, *mu.density, x, q);
  return h;
}

/// (a/pi) [z arctan(1/z) - 1] with z = <x,v>, the solution for one wall in
/// d=2 (value -a/pi on the wall).
inline double elementary_closed_form(double a, const Vec& v, const Vec& x) {
  if (x.size() != 3 || v.size() != 3) throw ValidationError("elementary_closed_form: d must be 2");
  const double z = std::abs(minkowski_form(x, v));
  if (z == 0.0) return -a / numeric::pi;
  return a / numeric::pi * (z * std::atan(1.0 / z) - 1.0);
}

/// (1/d)(H(eta) + H(nu) - H(eta+nu)) for the 1-extension of h_mu, i.e.
/// Int Lambda(eta,nu,y) dmu(y). Nonnegative for all pairs iff h_mu is the
/// support function of an F-convex set.
inline double convexity_lambda(const KernelContext& ctx, const MeasureSpec& mu, const Vec& eta, const Vec& nu,
                               const QuadratureSpec& q = {}) {
  auto H = [&](const Vec& v) {
    auto [p, n] = normalize_future(v);
    return n * solve_measure(ctx, mu, p.vec, q);
  };
  return (H(eta) + H(nu) - H(Vec(eta + nu))) / ctx.d;
}

struct SmoothConvexity {
  double integral = 0;  ///< Int (v sinh^d)^{-1} Int_{S_rho} [|X|^2 - d <grad rho, X>^2] phi dA drho
  double local = 0;  ///< phi(x) |X|^2
  double reverse_II = 0;  ///< local + d * integral: the reverse second fundamental form of h_phi at (X,X)
};

/// X is given in the canonical frame at x.
inline SmoothConvexity convexity_integral_smooth(const KernelContext& ctx, const Bump& phi, const Vec& x,
                                                 const Vec& X, const QuadratureSpec& q = {}) {
  q.validate();
  if (X.size() != ctx.d) throw ValidationError("convexity_integral_smooth: X must have d frame coordinates");
  const detail::BumpGeometry g = detail::bump_geometry(phi, x);
  detail::check_truncation(phi, g, q, "convexity_integral_smooth");
  SmoothConvexity out;
  out.integral = detail::radial_integral(phi, g, q, [&](double rho) {
    const detail::SphereMoments m = detail::sphere_moments(phi, g, x, rho, &X, q.angular_nodes);
    const double num = X.squaredNorm() * m.m0 - ctx.d * m.mX2;
    if (num == 0.0) return 0.0;
    return num / (ctx.v * std::sinh(rho));
  });
  out.local = phi(x) * X.squaredNorm();
  out.reverse_II = out.local + ctx.d * out.integral;
  return out;
}

/// |(1/d) box H(eta) - phi(eta)| with H the 1-homogeneous extension of h and
/// box the ambient wave operator, by 3-point central differences per axis
/// (step scaled by |eta|).
inline double residual_wave(const std::function<double(const Vec&)>& h, double phi_eta, const Vec& eta,
                            double step = 1e-3) {
  const int d = static_cast<int>(eta.size()) - 1;
  auto H = [&](const Vec& v) {
    auto [p, n] = normalize_future(v);
    return n * h(p.vec);
  };
  const double del = step * eta.norm();
  if (!(del > 0) || del > 0.1) throw ValidationError("residual_wave: step out of range");
  const double H0 = H(eta);
  double box = 0;
  for (int i = 0; i <= d; ++i) {
    Vec e = Vec::Zero(d + 1);
    e[i] = del;
    const double second = (H(eta + e) - 2 * H0 + H(eta - e)) / (del * del);
    box += i < d ? second : -second;
  }
  return std::abs(box / d - phi_eta);
}

inline double residual_wave(const SupportSpec& s, double phi_eta, const Vec& eta, double step = 1e-3) {
  return residual_wave([&](const Vec& v) { return eval_h(s, v); }, phi_eta, eta, step);
}

/// T-periodic solution of h'' - h = phi on H^1 = R:
///   h(x) = -1/2 Int_x^{x+T} cosh(s - x - T/2) / sinh(T/2) phi(s) ds,
/// the periodization of -e^{-|s-x|}/2 summed in closed form.
inline double fuchsian_solve_d1(double T, const std::function<double(double)>& phi, double x, int panels = 16) {
  if (!(T > 0)) throw ValidationError("fuchsian_solve_d1: period must be > 0");
  const double sh = std::sinh(0.5 * T);
  return -0.5 * numeric::gauss_panels([&](double s) { return std::cosh(s - x - 0.5 * T) / sh * phi(s); }, x, x + T,
                                      panels);
}

/// Max |h(g x) - h(x)| over samples and generators: the invariance check
/// used for user-supplied groups in d >= 2.
inline double invariance_defect(const std::function<double(const Vec&)>& h, const std::vector<LorentzIsometry>& gens,
                                const std::vector<Vec>& samples) {
  double m = 0;
  for (const auto& g : gens) {
    g.validate();
    for (const Vec& x : samples) m = std::max(m, std::abs(h(renormalize(g.apply_linear(x))) - h(x)));
  }
  return m;
}

struct UniquenessReport {
  bool equal = true;
  double max_difference = 0;
  std::vector<std::pair<double, double>> limits;  ///< (zeta_1, zeta_2) per direction
  std::string note;
};

/// Compares lim h_i(rho,Theta)/cosh(rho) of two solutions per direction.
inline UniquenessReport check_uniqueness_at_infinity(const SupportSpec& h1, const SupportSpec& h2,
                                                     const std::vector<Vec>& directions, double tol = 1e-6) {
  UniquenessReport r;
  for (const Vec& th : directions) {
    const double a = support_at_infinity(h1, th), b = support_at_infinity(h2, th);
    r.limits.push_back({a, b});
    if (std::isinf(a) || std::isinf(b)) {
      if (a != b) r.equal = false;
      r.note = "infinite limit in some direction; compared by sign only";
      continue;
    }
    const double diff = std::abs(a - b);
    r.max_difference = std::max(r.max_difference, diff);
    if (diff > tol * std::max(1.0, std::max(std::abs(a), std::abs(b)))) r.equal = false;
  }
  if (r.equal && r.note.empty())
    r.note = "equal boundary functions; uniqueness then holds only between solutions of the same equation";
  return r;
}

}  // namespace lorentzian
