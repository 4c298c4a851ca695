// Shared fixtures for the unit tests and the acceptance binary.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "lorentzian/lorentzian.hpp"

namespace testing_support {

using lorentzian::Vec;

/// Upper half-plane (u, w) -> H^2 with <x, e1> = u / w and the geodesic
/// u = 0 equal to {x_1 = 0}.
inline Vec half_plane(double u, double w) {
  Vec x(3);
  const double q = u * u + w * w;
  x << u / w, (q - 1) / (2 * w), (q + 1) / (2 * w);
  return x;
}

/// d/dw of half_plane, a tangent vector of hyperbolic length 1/w.
inline Vec half_plane_dw(double u, double w) {
  Vec x(3);
  x << -u / (w * w), 0.5 * (1 + (1 - u * u) / (w * w)), 0.5 * (1 - (u * u + 1) / (w * w));
  return x;
}

inline Vec e1() {
  Vec v(3);
  v << 1, 0, 0;
  return v;
}

/// Random points of H^d within distance R of the origin.
inline std::vector<Vec> random_points(int d, int n, double R, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0, 1);
  std::normal_distribution<double> N;
  std::vector<Vec> out;
  for (int i = 0; i < n; ++i) {
    Vec t(d);
    for (int k = 0; k < d; ++k) t[k] = N(rng);
    t /= t.norm();
    out.push_back(lorentzian::polar_to(lorentzian::origin(d), R * U(rng), t));
  }
  return out;
}

}  // namespace testing_support
