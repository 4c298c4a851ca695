// Radial function R_K(eta) = inf{s : s eta in K} and the dual set, H_{K*} = -1/R_K.
#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "core.hpp"
#include "field.hpp"
#include "numeric.hpp"
#include "support.hpp"

namespace lorentzian {

struct RadialValue {
  double R = 0.0;
  double error = 0.0;
  Vec argmax;
};

/// R(eta) = sup_nu H(nu) / <eta, nu> over a spiral of 4096 points in the
/// ball of radius 6 about eta, refined by 50 steps of geodesic ascent.
/// Probes outside a tabulated domain are skipped.
inline RadialValue radial_function(const SupportSpec& s, const Vec& eta, int probes = 4096, double radius = 6.0) {
  const int d = static_cast<int>(eta.size()) - 1;
  HPoint::from(eta, 1e-9);
  auto ratio = [&](const Vec& nu, bool strict) {
    double h;
    try {
      h = eval_h(s, nu);
    } catch (const DomainError&) {
      return -std::numeric_limits<double>::infinity();
    }
    if (strict && !(h < 0))
      throw ValidationError("radial_function: h is not strictly negative at a probe, the set is not inside the future cone");
    return h / minkowski_form(eta, nu);
  };
  RadialValue out;
  out.argmax = eta;
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec& sv : numeric::ball_spiral(d, probes, radius)) {
    const Vec nu = exp_map(eta, sv);
    const double v = ratio(nu, true);
    if (v > best) {
      best = v;
      out.argmax = nu;
    }
  }
  if (!std::isfinite(best)) throw NumericalRefusal("radial_function: no probe inside the domain of the support function");
  auto [x, fx, last] = numeric::geodesic_ascent([&](const Vec& nu) { return ratio(nu, false); }, out.argmax, best, 0.1, 50);
  out.R = fx;
  out.argmax = x;
  out.error = last;
  return out;
}

struct DualGrid {
  double rho_max = 1.5;
  int n_rho = 48;
  int n1 = 64, n2 = 32;
};

/// h*(eta) = -1/R(eta) tabulated on a polar grid about base.
inline SolutionField dual_field(const SupportSpec& s, const Vec& base, const DualGrid& g = {}) {
  SolutionField f = SolutionField::make_grid(base, g.rho_max, g.n_rho, g.n1, g.n2);
  const int na = f.n1, nb = f.n2;
  const std::size_t per = static_cast<std::size_t>(na) * nb;
  numeric::parallel_for(static_cast<std::size_t>(f.n_rho + 1) * per, [&](std::size_t i) {
    const int j = static_cast<int>(i / per), a = static_cast<int>((i % per) / nb), b = static_cast<int>(i % nb);
    f.values[f.index(j, a, b)] = -1.0 / radial_function(s, f.node(j, a, b)).R;
  });
  return f;
}

inline SupportSpec dual(const SupportSpec& s, const Vec& base, const DualGrid& g = {}) {
  return tabulated(dual_field(s, base, g));
}

inline SupportSpec dual(const SupportSpec& s, int d, const DualGrid& g = {}) { return dual(s, origin(d), g); }

}  // namespace lorentzian
