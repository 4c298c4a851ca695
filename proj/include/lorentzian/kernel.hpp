// The radial kernel k of the operator (1/d)Laplacian - Id on H^d and the
// Green function G(x,y) = k(dist(x,y)).
//
//   k(rho) = cosh(rho)/v_{d-1} * I(rho),   I(rho) = -Int_rho^inf w,
//   w(t) = 1/(sinh^{d-1} t cosh^2 t).
#pragma once

#include <cmath>
#include <vector>

#include "core.hpp"
#include "numeric.hpp"

namespace lorentzian {

struct KernelContext {
  int d = 2;
  double v = 2 * numeric::pi;  ///< area of the unit (d-1)-sphere

  explicit KernelContext(int dim) : d(dim) {
    require_dimension(dim);
    v = dim == 1 ? 2.0 : (dim == 2 ? 2 * numeric::pi : 4 * numeric::pi);
    // coefficients of (1-y)^{-(d-1)} (1+y)^{-2}
    const int m = d - 1;
    series.resize(kTerms);
    for (int n = 0; n < kTerms; ++n) {
      double c = 0;
      for (int j = 0; j <= n; ++j) {
        const double a = m == 0 ? (j == 0 ? 1.0 : 0.0) : numeric::binom(j + m - 1, m - 1);
        const double b = ((n - j) % 2 ? -1.0 : 1.0) * (n - j + 1);
        c += a * b;
      }
      series[n] = c;
    }
  }
  KernelContext() : KernelContext(2) {}

  /// A(rho) = v sinh^{d-1}(rho)
  double A(double rho) const { return v * std::pow(std::sinh(rho), d - 1); }
  double w(double t) const { return 1.0 / (std::pow(std::sinh(t), d - 1) * std::cosh(t) * std::cosh(t)); }
  double w_prime(double t) const {
    const double s = std::sinh(t), c = std::cosh(t);
    return -((d - 1) * c / (std::pow(s, d) * c * c) + 2 * s / (std::pow(s, d - 1) * c * c * c));
  }

  static constexpr int kTerms = 60;
  std::vector<double> series;
};

namespace detail {

/// Int_rho^inf w by the substitution x = e^{-t}:
///   2^{d+1} Int_0^{e^-rho} x^d / ((1-x^2)^{d-1} (1+x^2)^2) dx.
inline double tail_integrand(int d, double x) {
  const double y = x * x;
  return std::ldexp(1.0, d + 1) * std::pow(x, d) / (std::pow(1 - y, d - 1) * (1 + y) * (1 + y));
}

inline double tail_quadrature(const KernelContext& ctx, double rho) {
  const double X = std::exp(-rho);
  return numeric::adaptive([&](double x) { return tail_integrand(ctx.d, x); }, 0.0, X, 1e-13, 20);
}

inline double tail_series(const KernelContext& ctx, double rho) {
  const double X = std::exp(-rho), y = X * X;
  double p = std::pow(X, ctx.d + 1), s = 0;
  for (int n = 0; n < KernelContext::kTerms; ++n) {
    const double term = ctx.series[n] * p / (2 * n + ctx.d + 1);
    s += term;
    // zero coefficients occur (d=3 has only even powers), so stop on a nonzero term only
    if (ctx.series[n] != 0.0 && std::abs(term) < 1e-18 * std::abs(s)) break;
    p *= y;
  }
  return std::ldexp(s, ctx.d + 1);
}

}  // namespace detail

/// I(rho) = -Int_rho^inf w(t) dt.
inline double kernel_I(const KernelContext& ctx, double rho) {
  if (!(rho > 0)) throw ValidationError("kernel: rho must be > 0");
  if (rho >= 1.0) return -detail::tail_series(ctx, rho);
  if (ctx.d == 1) return std::tanh(rho) - 1.0;
  if (ctx.d == 2) {
    const double e = std::exp(-rho);
    return 1.0 / std::cosh(rho) + std::log1p(-e) - std::log1p(e);
  }
  return -detail::tail_quadrature(ctx, rho);
}

inline double kernel_k(const KernelContext& ctx, double rho) {
  if (!(rho > 0)) throw ValidationError("kernel_k: rho must be > 0");
  if (ctx.d == 1) return -0.5 * std::exp(-rho);
  return std::cosh(rho) * kernel_I(ctx, rho) / ctx.v;
}

/// k evaluated from the defining integral alone (adaptive Gauss-Kronrod).
inline double kernel_k_quadrature(const KernelContext& ctx, double rho) {
  if (!(rho > 0)) throw ValidationError("kernel_k: rho must be > 0");
  return -std::cosh(rho) * detail::tail_quadrature(ctx, rho) / ctx.v;
}

struct KernelDerivs {
  double k, dk, d2k;
};

inline KernelDerivs kernel_derivatives(const KernelContext& ctx, double rho) {
  if (ctx.d == 1) {
    const double e = 0.5 * std::exp(-rho);
    return {-e, e, -e};
  }
  const double I = kernel_I(ctx, rho), s = std::sinh(rho), c = std::cosh(rho);
  const double w = ctx.w(rho), wp = ctx.w_prime(rho);
  return {c * I / ctx.v, (s * I + c * w) / ctx.v, (c * I + 2 * s * w + c * wp) / ctx.v};
}

/// |k'' + (A'/A) k' - d k| at each node.
inline std::vector<double> kernel_ode_residual(const KernelContext& ctx, const std::vector<double>& rhos) {
  std::vector<double> out;
  out.reserve(rhos.size());
  for (double r : rhos) {
    const KernelDerivs k = kernel_derivatives(ctx, r);
    const double coth = std::cosh(r) / std::sinh(r);
    out.push_back(std::abs(k.d2k + (ctx.d - 1) * coth * k.dk - ctx.d * k.k));
  }
  return out;
}

/// k'(rho) A(rho), which tends to 1 as rho -> 0.
inline double kernel_flux(const KernelContext& ctx, double rho) {
  return kernel_derivatives(ctx, rho).dk * ctx.A(rho);
}

/// G(x,y) = k(dist(x,y)); singular on the diagonal for d >= 2.
inline double green(const KernelContext& ctx, const Vec& x, const Vec& y) {
  const double r = hyperbolic_distance(x, y);
  if (r == 0.0) {
    if (ctx.d == 1) return -0.5;
    throw NumericalRefusal("green: x coincides with the source point");
  }
  return kernel_k(ctx, r);
}

}  // namespace lorentzian
