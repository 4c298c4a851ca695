// Minkowski bilinear algebra, hyperboloid model of H^d, Lorentz isometries
// and the d=1 cocycle machinery.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lorentzian {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Bad input: wrong dimension, violated invariant, unparsable document.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// The numerics refuse to answer (singular point, truncation, out of domain).
struct NumericalRefusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Query of a tabulated object outside its grid.
struct DomainError : NumericalRefusal {
  using NumericalRefusal::NumericalRefusal;
};

/// Derivative requested where the support function has a corner.
/// Carries the vertices achieving the max (the face of the polyhedron).
struct NonDifferentiable : std::runtime_error {
  std::vector<Vec> tie_set;
  NonDifferentiable(const std::string& what, std::vector<Vec> ties)
      : std::runtime_error(what), tie_set(std::move(ties)) {}
};

inline void require_dimension(int d) {
  if (d < 1 || d > 3) throw ValidationError("dimension d must be in {1,2,3}, got " + std::to_string(d));
}

inline double minkowski_form(const Vec& x, const Vec& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ValidationError("minkowski_form: dimension mismatch");
  const Eigen::Index n = x.size() - 1;
  return x.head(n).dot(y.head(n)) - x[n] * y[n];
}

inline double minkowski_sq(const Vec& x) { return minkowski_form(x, x); }

/// J = diag(1,...,1,-1)
inline Mat minkowski_metric(int d) {
  Mat J = Mat::Identity(d + 1, d + 1);
  J(d, d) = -1.0;
  return J;
}

inline Vec basis_vector(int d, int i) {
  Vec e = Vec::Zero(d + 1);
  e[i] = 1.0;
  return e;
}

/// e_{d+1}, the base point of H^d.
inline Vec origin(int d) { return basis_vector(d, d); }

enum class CausalClass { future_timelike, past_timelike, future_lightlike, past_lightlike, spacelike, zero };

inline const char* to_string(CausalClass c) {
  switch (c) {
    case CausalClass::future_timelike: return "future-timelike";
    case CausalClass::past_timelike: return "past-timelike";
    case CausalClass::future_lightlike: return "future-lightlike";
    case CausalClass::past_lightlike: return "past-lightlike";
    case CausalClass::spacelike: return "spacelike";
    case CausalClass::zero: return "zero";
  }
  return "?";
}

/// The lightlike band is relative: |<x,x>| <= tol * |x|^2 (Euclidean).
inline CausalClass classify(const Vec& x, double tol = 1e-10) {
  const double n2 = x.squaredNorm();
  if (n2 == 0.0) return CausalClass::zero;
  const double q = minkowski_sq(x);
  const double last = x[x.size() - 1];
  if (std::abs(q) <= tol * n2) return last > 0 ? CausalClass::future_lightlike : CausalClass::past_lightlike;
  if (q > 0) return CausalClass::spacelike;
  return last > 0 ? CausalClass::future_timelike : CausalClass::past_timelike;
}

/// A point of the upper sheet <x,x> = -1, x_{d+1} > 0.
struct HPoint {
  Vec vec;

  HPoint() = default;
  static HPoint from(const Vec& v, double tol = 1e-12) {
    if (v.size() < 2) throw ValidationError("HPoint: need at least 2 coordinates");
    const double q = minkowski_sq(v);
    if (std::abs(q + 1.0) > tol * std::max(1.0, v.squaredNorm()) || v[v.size() - 1] <= 0)
      throw ValidationError("HPoint: vector is not on the future unit hyperboloid");
    HPoint p;
    p.vec = v;
    return p;
  }
  static HPoint base(int d) {
    HPoint p;
    p.vec = origin(d);
    return p;
  }
  int dim() const { return static_cast<int>(vec.size()) - 1; }
  operator const Vec&() const { return vec; }
};

/// A vector with <v,v> = +1.
struct SpacelikeUnit {
  Vec vec;
  static SpacelikeUnit from(const Vec& v, double tol = 1e-12) {
    if (std::abs(minkowski_sq(v) - 1.0) > tol * std::max(1.0, v.squaredNorm()))
      throw ValidationError("SpacelikeUnit: <v,v> != 1");
    return SpacelikeUnit{v};
  }
  /// Rescale a spacelike vector to unit length.
  static SpacelikeUnit normalized(const Vec& v) {
    const double q = minkowski_sq(v);
    if (!(q > 0)) throw ValidationError("SpacelikeUnit: vector is not spacelike");
    return SpacelikeUnit{v / std::sqrt(q)};
  }
  operator const Vec&() const { return vec; }
};

inline double hyperbolic_distance(const Vec& x, const Vec& y) {
  return std::acosh(std::max(1.0, -minkowski_form(x, y)));
}

/// Returns (x/|x|_-, |x|_-) for future-timelike x.
inline std::pair<HPoint, double> normalize_future(const Vec& x) {
  if (classify(x) != CausalClass::future_timelike)
    throw ValidationError("normalize_future: vector is not future-timelike");
  const double n = std::sqrt(-minkowski_sq(x));
  HPoint p;
  p.vec = x / n;
  return {p, n};
}

/// Pull a nearly-hyperboloid vector back onto H^d.
inline Vec renormalize(const Vec& x) { return x / std::sqrt(-minkowski_sq(x)); }

/// Pure boost sending e_{d+1} to eta. Columns 0..d-1 are an orthonormal
/// tangent frame at eta; this is the canonical frame used everywhere.
inline Mat boost_to(const Vec& eta) {
  const int d = static_cast<int>(eta.size()) - 1;
  const double g = eta[d];
  const Vec v = eta.head(d);
  Mat B(d + 1, d + 1);
  B.topLeftCorner(d, d) = Mat::Identity(d, d) + v * v.transpose() / (1.0 + g);
  B.topRightCorner(d, 1) = v;
  B.bottomLeftCorner(1, d) = v.transpose();
  B(d, d) = g;
  return B;
}

inline Mat tangent_frame(const Vec& eta) {
  const int d = static_cast<int>(eta.size()) - 1;
  return boost_to(eta).leftCols(d);
}

/// exp_eta(s) with s given in frame coordinates.
inline Vec exp_map(const Vec& eta, const Vec& s) {
  const double r = s.norm();
  if (r == 0.0) return eta;
  const Vec u = tangent_frame(eta) * (s / r);
  return std::cosh(r) * eta + std::sinh(r) * u;
}

/// Frame coordinates of a tangent vector at eta.
inline Vec frame_coords(const Vec& eta, const Vec& w) {
  const Mat E = tangent_frame(eta);
  Vec c(E.cols());
  for (Eigen::Index i = 0; i < E.cols(); ++i) c[i] = minkowski_form(w, E.col(i));
  return c;
}

/// Tangential part of an ambient vector at eta.
inline Vec tangent_part(const Vec& eta, const Vec& w) { return w + minkowski_form(w, eta) * eta; }

struct Polar {
  double rho = 0.0;
  Vec theta;  ///< unit vector in frame coordinates at the base
  bool degenerate = false;  ///< rho = 0, theta arbitrary
};

inline Vec polar_to(const Vec& base, double rho, const Vec& theta) {
  if (rho < 0) throw ValidationError("polar_to: rho must be >= 0");
  const Vec u = tangent_frame(base) * theta;
  return std::cosh(rho) * base + std::sinh(rho) * u;
}

inline Polar polar_from(const Vec& base, const Vec& point) {
  const int d = static_cast<int>(base.size()) - 1;
  Polar out;
  const Vec w = tangent_part(base, point);
  const Vec c = frame_coords(base, w);
  const double sh = c.norm();
  out.rho = std::asinh(sh);
  if (sh < 1e-300 || out.rho == 0.0) {
    out.rho = 0.0;
    out.theta = Vec::Zero(d);
    out.theta[0] = 1.0;
    out.degenerate = true;
  } else {
    out.theta = c / sh;
  }
  return out;
}

/// Direction on S^1 (d=2) or S^2 (d=3) from angles; d=1 uses sign.
inline Vec direction_from_angles(int d, double a, double b = 0.0) {
  Vec t(d);
  if (d == 1) t[0] = a >= 0 ? 1.0 : -1.0;
  else if (d == 2) t << std::cos(a), std::sin(a);
  else t << std::sin(a) * std::cos(b), std::sin(a) * std::sin(b), std::cos(a);
  return t;
}

// ---------------------------------------------------------------------------

struct LorentzIsometry {
  Mat linear;
  Vec translation;

  static LorentzIsometry identity(int d) { return {Mat::Identity(d + 1, d + 1), Vec::Zero(d + 1)}; }
  int dim() const { return static_cast<int>(linear.rows()) - 1; }
  Vec apply(const Vec& x) const { return linear * x + translation; }
  Vec apply_linear(const Vec& x) const { return linear * x; }
  /// (*this) o other
  LorentzIsometry compose(const LorentzIsometry& other) const {
    return {linear * other.linear, linear * other.translation + translation};
  }
  LorentzIsometry inverse() const {
    // l^{-1} = J l^T J for Lorentz matrices
    const Mat J = minkowski_metric(dim());
    const Mat inv = J * linear.transpose() * J;
    return {inv, -(inv * translation)};
  }
  bool is_valid(double tol = 1e-10) const {
    const Mat J = minkowski_metric(dim());
    if ((linear.transpose() * J * linear - J).cwiseAbs().maxCoeff() > tol) return false;
    return linear(dim(), dim()) > 0;
  }
  void validate(double tol = 1e-10) const {
    if (linear.rows() != linear.cols() || translation.size() != linear.rows())
      throw ValidationError("LorentzIsometry: shape mismatch");
    if (!is_valid(tol)) throw ValidationError("LorentzIsometry: not a future-preserving Lorentz map");
  }
};

inline LorentzIsometry boost_d1(double t) {
  Mat L(2, 2);
  L << std::cosh(t), std::sinh(t), std::sinh(t), std::cosh(t);
  return {L, Vec::Zero(2)};
}

struct CocycleD1 {
  LorentzIsometry generator;
  Vec tau;

  double boost_parameter() const { return std::asinh(generator.linear(0, 1)); }
  void validate() const {
    if (generator.linear.rows() != 2 || tau.size() != 2) throw ValidationError("CocycleD1: d must be 1");
    generator.validate();
    const double t = boost_parameter();
    if ((generator.linear - boost_d1(t).linear).cwiseAbs().maxCoeff() > 1e-10)
      throw ValidationError("CocycleD1: generator is not a pure boost");
  }
};

/// v with tau = v - gamma0 v.
inline Vec coboundary_solve_d1(const CocycleD1& c) {
  c.validate();
  const double t = c.boost_parameter();
  if (t == 0.0) throw ValidationError("coboundary_solve_d1: boost parameter must be nonzero");
  const Mat M = Mat::Identity(2, 2) - c.generator.linear;
  const Vec v = M.fullPivLu().solve(c.tau);
  const double res = (M * v - c.tau).norm();
  if (res > 1e-10 * std::max(1.0, c.tau.norm()))
    throw NumericalRefusal("coboundary_solve_d1: residual " + std::to_string(res));
  return v;
}

/// A word in the generators: +k means generator k-1, -k its inverse.
using Word = std::vector<int>;

struct CocycleReport {
  bool ok = true;
  double max_error = 0.0;
  std::optional<Word> failing_word;
};

inline LorentzIsometry evaluate_word(const std::vector<LorentzIsometry>& gens, const Word& w, int d) {
  LorentzIsometry g = LorentzIsometry::identity(d);
  for (int k : w) {
    if (k == 0 || std::abs(k) > static_cast<int>(gens.size())) throw ValidationError("cocycle_check: bad word letter");
    const LorentzIsometry& a = gens[std::abs(k) - 1];
    g = g.compose(k > 0 ? a : a.inverse());
  }
  return g;
}

/// For each word and each split w = (prefix)(suffix), checks
/// tau(prefix suffix) = tau(prefix) + linear(prefix) tau(suffix).
/// tau_of defaults to the translation part of the composed affine map; pass
/// an independent source (e.g. vertices of an invariant polygon) to make the
/// test non-tautological.
inline CocycleReport cocycle_check(const std::vector<LorentzIsometry>& gens, const std::vector<Word>& words,
                                   std::function<Vec(const Word&)> tau_of = nullptr, double tol = 1e-9) {
  CocycleReport rep;
  if (gens.empty()) return rep;
  const int d = gens.front().dim();
  auto tau = [&](const Word& w) { return tau_of ? tau_of(w) : evaluate_word(gens, w, d).translation; };
  for (const Word& w : words) {
    const Vec whole = tau(w);
    for (std::size_t cut = 1; cut < w.size(); ++cut) {
      const Word pre(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(cut));
      const Word suf(w.begin() + static_cast<std::ptrdiff_t>(cut), w.end());
      const Vec rhs = tau(pre) + evaluate_word(gens, pre, d).linear * tau(suf);
      const double err = (whole - rhs).norm() / std::max(1.0, whole.norm());
      rep.max_error = std::max(rep.max_error, err);
      if (err > tol && rep.ok) {
        rep.ok = false;
        rep.failing_word = w;
      }
    }
  }
  return rep;
}

}  // namespace lorentzian
