// Tabulated functions on a polar grid of H^d with tensor cubic (4-point
// Lagrange) interpolation. Negative radial indices are folded to the antipodal
// direction so the interpolant is smooth through the base point.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <vector>

#include "core.hpp"
#include "numeric.hpp"

namespace lorentzian {

struct ResidualStats {
  double max = std::numeric_limits<double>::quiet_NaN();
  double mean = std::numeric_limits<double>::quiet_NaN();
  bool populated = false;
};

/// Grid layout:
///   d=1: rho_j = j*drho, two directions (+,-)
///   d=2: rho_j x theta_k = 2 pi k / n1 (n1 even)
///   d=3: rho_j x theta_m = (m+1/2) pi / n1 x phi_l = 2 pi l / n2 (n2 even)
struct SolutionField {
  Vec base;
  int d = 2;
  double rho_max = 1.0;
  int n_rho = 8;  ///< number of radial intervals
  int n1 = 1, n2 = 1;
  std::vector<double> values;  ///< [j][a][b] row-major
  std::vector<double> residuals;  ///< optional, same layout
  ResidualStats residual_stats;

  double drho() const { return rho_max / n_rho; }
  int n_dirs() const { return d == 1 ? 2 : (d == 2 ? n1 : n1 * n2); }
  std::size_t index(int j, int a, int b) const {
    return (static_cast<std::size_t>(j) * n1 + a) * n2 + b;
  }

  Vec direction(int a, int b) const {
    if (d == 1) return direction_from_angles(1, a == 0 ? 1.0 : -1.0);
    if (d == 2) return direction_from_angles(2, 2 * numeric::pi * a / n1);
    return direction_from_angles(3, (a + 0.5) * numeric::pi / n1, 2 * numeric::pi * b / n2);
  }
  Vec node(int j, int a, int b) const { return polar_to(base, j * drho(), direction(a, b)); }

  static SolutionField make_grid(const Vec& base, double rho_max, int n_rho, int n1 = 32, int n2 = 32) {
    SolutionField f;
    f.base = base;
    f.d = static_cast<int>(base.size()) - 1;
    require_dimension(f.d);
    if (!(rho_max > 0) || n_rho < 2) throw ValidationError("SolutionField: bad radial grid");
    f.rho_max = rho_max;
    f.n_rho = n_rho;
    if (f.d == 1) {
      f.n1 = 2;
      f.n2 = 1;
    } else if (f.d == 2) {
      f.n1 = n1 + (n1 % 2);
      f.n2 = 1;
    } else {
      f.n1 = n1;
      f.n2 = n2 + (n2 % 2);
    }
    f.values.assign(static_cast<std::size_t>(n_rho + 1) * f.n1 * f.n2, 0.0);
    return f;
  }

  static SolutionField tabulate(const Vec& base, double rho_max, int n_rho, int n1, int n2,
                                const std::function<double(const Vec&)>& fn) {
    SolutionField f = make_grid(base, rho_max, n_rho, n1, n2);
    for (int j = 0; j <= f.n_rho; ++j)
      for (int a = 0; a < f.n1; ++a)
        for (int b = 0; b < f.n2; ++b) f.values[f.index(j, a, b)] = fn(f.node(j, a, b));
    return f;
  }

  void set_residuals(std::vector<double> r) {
    residuals = std::move(r);
    double mx = 0, sum = 0;
    std::size_t n = 0;
    for (double v : residuals)
      if (std::isfinite(v)) {
        mx = std::max(mx, std::abs(v));
        sum += std::abs(v);
        ++n;
      }
    residual_stats = {mx, n ? sum / n : 0.0, true};
  }

  // --- index folding -------------------------------------------------------
  void antipode(int& a, int& b) const {
    if (d == 1) a = 1 - a;
    else if (d == 2) a = (a + n1 / 2) % n1;
    else {
      a = n1 - 1 - a;
      b = (b + n2 / 2) % n2;
    }
  }
  double fetch(int j, int a, int b) const {
    if (j < 0) {
      j = -j;
      antipode(a, b);
    }
    if (d == 2) a = ((a % n1) + n1) % n1;
    if (d == 3) {
      if (a < 0) {
        a = -a - 1;
        b += n2 / 2;
      } else if (a >= n1) {
        a = 2 * n1 - a - 1;
        b += n2 / 2;
      }
      b = ((b % n2) + n2) % n2;
    }
    if (j > n_rho) {
      const double vn = values[index(n_rho, a, b)], vm = values[index(n_rho - 1, a, b)];
      return vn + (j - n_rho) * (vn - vm);
    }
    return values[index(j, a, b)];
  }

  /// Lagrange weights for nodes -1, 0, 1, 2 at t in [0,1).
  static void cubic_weights(double t, double w[4]) {
    w[0] = -t * (t - 1) * (t - 2) / 6.0;
    w[1] = (t + 1) * (t - 1) * (t - 2) / 2.0;
    w[2] = -(t + 1) * t * (t - 2) / 2.0;
    w[3] = (t + 1) * t * (t - 1) / 6.0;
  }

  double eval(const Vec& eta) const {
    const Polar p = polar_from(base, eta);
    if (p.rho > rho_max * (1 + 1e-12)) throw DomainError("SolutionField: query outside tabulated ball");
    double wr[4];
    if (d == 1) {
      const double s = (p.theta[0] >= 0 ? p.rho : -p.rho) / drho();
      const int i0 = static_cast<int>(std::floor(s));
      cubic_weights(s - i0, wr);
      double acc = 0;
      for (int k = 0; k < 4; ++k) {
        const int i = i0 - 1 + k;
        acc += wr[k] * (i >= 0 ? fetch(i, 0, 0) : fetch(-i, 1, 0));
      }
      return acc;
    }
    const double s = p.rho / drho();
    const int j0 = static_cast<int>(std::floor(s));
    cubic_weights(s - j0, wr);
    if (d == 2) {
      double th = std::atan2(p.theta[1], p.theta[0]);
      if (th < 0) th += 2 * numeric::pi;
      const double u = th / (2 * numeric::pi / n1);
      const int a0 = static_cast<int>(std::floor(u));
      double wa[4];
      cubic_weights(u - a0, wa);
      double acc = 0;
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) acc += wr[k] * wa[l] * fetch(j0 - 1 + k, a0 - 1 + l, 0);
      return acc;
    }
    const double th = std::acos(std::clamp(p.theta[2], -1.0, 1.0));
    double ph = std::atan2(p.theta[1], p.theta[0]);
    if (ph < 0) ph += 2 * numeric::pi;
    const double u = th / (numeric::pi / n1) - 0.5, v = ph / (2 * numeric::pi / n2);
    const int a0 = static_cast<int>(std::floor(u)), b0 = static_cast<int>(std::floor(v));
    double wa[4], wb[4];
    cubic_weights(u - a0, wa);
    cubic_weights(v - b0, wb);
    double acc = 0;
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l)
        for (int m = 0; m < 4; ++m) acc += wr[k] * wa[l] * wb[m] * fetch(j0 - 1 + k, a0 - 1 + l, b0 - 1 + m);
    return acc;
  }

  /// CSV rows: rho, angle(s), h, residual.
  void write_csv(std::ostream& os) const {
    const auto old = os.precision(17);
    os << "rho";
    if (d == 1) os << ",direction";
    if (d == 2) os << ",theta";
    if (d == 3) os << ",theta,phi";
    os << ",h,residual\n";
    for (int j = 0; j <= n_rho; ++j)
      for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n2; ++b) {
          os << j * drho();
          if (d == 1) os << ',' << (a == 0 ? 1 : -1);
          if (d == 2) os << ',' << 2 * numeric::pi * a / n1;
          if (d == 3) os << ',' << (a + 0.5) * numeric::pi / n1 << ',' << 2 * numeric::pi * b / n2;
          const std::size_t i = index(j, a, b);
          os << ',' << values[i] << ',';
          if (i < residuals.size()) os << residuals[i];
          else os << "nan";
          os << '\n';
        }
    os.precision(old);
  }
};

}  // namespace lorentzian
