// Measures on H^d: atoms, weighted totally geodesic walls and a compactly
// supported radial bump density.
#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "core.hpp"

namespace lorentzian {

/// f(y) = amplitude * (1 - (r/R)^2)^3 for r = dist(y, center) < R.
struct Bump {
  Vec center;
  double radius = 1.0;
  double amplitude = 1.0;

  void validate() const {
    HPoint::from(center, 1e-9);
    if (!(radius > 0)) throw ValidationError("bump: radius must be > 0");
  }
  int dim() const { return static_cast<int>(center.size()) - 1; }

  double profile(double r) const {
    if (r >= radius) return 0.0;
    const double s = 1.0 - (r / radius) * (r / radius);
    return amplitude * s * s * s;
  }
  double profile_d1(double r) const {
    if (r >= radius) return 0.0;
    const double R2 = radius * radius, s = 1.0 - r * r / R2;
    return -amplitude * 6.0 * r / R2 * s * s;
  }
  double profile_d2(double r) const {
    if (r >= radius) return 0.0;
    const double R2 = radius * radius, s = 1.0 - r * r / R2;
    return amplitude * (-6.0 / R2 * s * s + 24.0 * r * r / (R2 * R2) * s);
  }
  /// Laplacian of the radial profile on H^d: f'' + (d-1) coth(r) f'.
  double laplacian(double r) const {
    const int d = dim();
    if (r >= radius) return 0.0;
    if (r < 1e-8) return d * profile_d2(0.0);
    return profile_d2(r) + (d - 1) * std::cosh(r) / std::sinh(r) * profile_d1(r);
  }
  double operator()(const Vec& y) const { return profile(hyperbolic_distance(y, center)); }
};

struct Atom {
  Vec point;
  double weight = 1.0;
};

/// The totally geodesic hypersurface <x, normal> = 0 with weight a. The
/// weight is the order-one polyhedral weight (edge length); as a measure the
/// wall carries (a/d) times its (d-1)-volume.
struct Wall {
  Vec normal;
  double weight = 1.0;
};

struct MeasureSpec {
  std::vector<Atom> atoms;
  std::vector<Wall> walls;
  std::optional<Bump> density;

  void validate(int d) const {
    for (const Atom& a : atoms) {
      if (a.point.size() != d + 1) throw ValidationError("measure: atom dimension mismatch");
      HPoint::from(a.point, 1e-9);
      if (!(a.weight > 0)) throw ValidationError("measure: atom weights must be > 0");
    }
    for (const Wall& w : walls) {
      if (w.normal.size() != d + 1) throw ValidationError("measure: wall dimension mismatch");
      SpacelikeUnit::from(w.normal, 1e-9);
      if (!(w.weight > 0)) throw ValidationError("measure: wall weights must be > 0");
    }
    if (density) {
      if (density->center.size() != d + 1) throw ValidationError("measure: density dimension mismatch");
      density->validate();
    }
  }
};

}  // namespace lorentzian
