// Support functions of F-convex sets (and hedgehogs) on H^d: the SupportSpec
// algebra, evaluation, 1-homogeneous extension, normal representation,
// reverse second fundamental form and sampled convexity certificates.
#pragma once

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "core.hpp"
#include "field.hpp"
#include "numeric.hpp"

namespace lorentzian {

struct SpecNode;

/// Immutable handle on a support-function description.
class SupportSpec {
 public:
  SupportSpec() = default;
  explicit SupportSpec(std::shared_ptr<const SpecNode> n) : node_(std::move(n)) {}
  const SpecNode& node() const {
    if (!node_) throw ValidationError("SupportSpec: empty spec");
    return *node_;
  }
  bool empty() const { return !node_; }

 private:
  std::shared_ptr<const SpecNode> node_;
};

/// Radial profile f(rho) about an axis, built from an increasing step
/// function h1* by the double moving average
///   htilde(rho) = int_rho^{rho+1} int_t^{t+1} h1*(s) ds dt
/// and f(rho) = cosh(rho) int_0^rho sinh t / cosh^2 t * htilde(t) dt.
struct RadialData {
  double R = 0.0;  ///< profile is defined on [0, R]
  std::vector<double> edges;  ///< step breakpoints, edges[0] = 0
  std::vector<double> steps;  ///< value on [edges[j], edges[j+1]); last extends to infinity
  std::vector<double> P_edge, Q_edge;  ///< primitives at the edges
  std::vector<double> F;  ///< F on a uniform grid of [0,R]
  double dF = 0.0;

  void finalize_primitives() {
    const std::size_t n = edges.size();
    P_edge.assign(n, 0.0);
    Q_edge.assign(n, 0.0);
    for (std::size_t j = 1; j < n; ++j) {
      const double h = edges[j] - edges[j - 1];
      P_edge[j] = P_edge[j - 1] + steps[j - 1] * h;
      Q_edge[j] = Q_edge[j - 1] + P_edge[j - 1] * h + 0.5 * steps[j - 1] * h * h;
    }
  }
  std::size_t segment(double s) const {
    auto it = std::upper_bound(edges.begin(), edges.end(), s);
    return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - edges.begin()) - 1));
  }
  double step_at(double s) const { return steps[std::min(segment(s), steps.size() - 1)]; }
  double P(double s) const {
    const std::size_t j = segment(s);
    return P_edge[j] + steps[std::min(j, steps.size() - 1)] * (s - edges[j]);
  }
  double Q(double s) const {
    const std::size_t j = segment(s);
    const double h = s - edges[j];
    return Q_edge[j] + P_edge[j] * h + 0.5 * steps[std::min(j, steps.size() - 1)] * h * h;
  }
  double htilde(double r) const { return Q(r + 2) - 2 * Q(r + 1) + Q(r); }
  double htilde_d(double r) const { return P(r + 2) - 2 * P(r + 1) + P(r); }
  double weight(double t) const { return std::sinh(t) / (std::cosh(t) * std::cosh(t)); }
  /// Cubic Hermite on the F table with exact slopes weight*htilde.
  double F_at(double r) const {
    if (r < 0 || r > R * (1 + 1e-12)) throw DomainError("radial profile: rho outside the ball");
    const int n = static_cast<int>(F.size()) - 1;
    int j = std::min(n - 1, static_cast<int>(r / dF));
    const double x0 = j * dF, x1 = x0 + dF, t = (r - x0) / dF;
    const double m0 = weight(x0) * htilde(x0) * dF, m1 = weight(x1) * htilde(x1) * dF;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * F[j] + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * F[j + 1] + (t3 - t2) * m1;
  }
  double f(double r) const { return std::cosh(r) * F_at(r); }
};

namespace spec {
struct Constant {
  double c;
};
struct ConeApex {
  Vec p;
};
struct PowerCosh {
  double alpha;
  int sign;  ///< +1 or -1
  Vec axis;
  bool convex_flag;
};
struct PolyhedralMax {
  std::vector<Vec> vertices;
};
struct Sum {
  std::vector<SupportSpec> terms;
};
struct Scale {
  double lambda;
  SupportSpec child;
};
/// Signed linear combination; the difference of two support functions.
struct Combination {
  std::vector<double> coeffs;
  std::vector<SupportSpec> terms;
};
struct Tabulated {
  std::shared_ptr<const SolutionField> field;
};
/// h = phi(<eta, w>) for a named one-variable phi.
///   elementary:        phi(z) = (a/pi)(z arctan(1/z) - 1), params {a}
///   zero_mean_radius:  phi(z) = z arctan(1/z) - 1
///   dual_ball_cone:    phi(z) = 1/(2z), w future timelike (dual of B + C(w))
struct ClosedForm {
  std::string name;
  std::vector<double> params;
  Vec w;
};
struct RadialProfile {
  Vec axis;
  std::shared_ptr<const RadialData> data;
};
}  // namespace spec

struct SpecNode {
  std::variant<spec::Constant, spec::ConeApex, spec::PowerCosh, spec::PolyhedralMax, spec::Sum, spec::Scale,
               spec::Combination, spec::Tabulated, spec::ClosedForm, spec::RadialProfile>
      v;
};

template <class T>
inline SupportSpec make_spec(T t) {
  return SupportSpec(std::make_shared<const SpecNode>(SpecNode{std::move(t)}));
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// --- constructors -----------------------------------------------------------

inline SupportSpec constant(double c) { return make_spec(spec::Constant{c}); }
inline SupportSpec cone_apex(const Vec& p) { return make_spec(spec::ConeApex{p}); }

inline SupportSpec power_cosh(double alpha, int sign, const Vec& axis, bool convex_flag = true) {
  HPoint::from(axis);
  if (sign != 1 && sign != -1) throw ValidationError("power_cosh: sign must be +1 or -1");
  if (convex_flag) {
    if (sign > 0 && alpha < 1) throw ValidationError("power_cosh: F+ needs alpha >= 1");
    if (sign < 0 && (alpha < -1 || alpha > 1)) throw ValidationError("power_cosh: F- needs -1 <= alpha <= 1");
  }
  return make_spec(spec::PowerCosh{alpha, sign, axis, convex_flag});
}

inline SupportSpec polyhedral_max(std::vector<Vec> vertices) {
  if (vertices.empty()) throw ValidationError("polyhedral_max: empty vertex list");
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      const Vec dv = vertices[i] - vertices[j];
      const double n2 = dv.squaredNorm();
      if (n2 == 0.0) continue;
      if (minkowski_sq(dv) <= 1e-12 * n2)
        throw ValidationError("polyhedral_max: vertex differences must be spacelike");
    }
  return make_spec(spec::PolyhedralMax{std::move(vertices)});
}

inline SupportSpec combination(std::vector<double> coeffs, std::vector<SupportSpec> terms) {
  if (coeffs.size() != terms.size() || terms.empty()) throw ValidationError("combination: size mismatch");
  return make_spec(spec::Combination{std::move(coeffs), std::move(terms)});
}

inline SupportSpec tabulated(SolutionField f) {
  return make_spec(spec::Tabulated{std::make_shared<const SolutionField>(std::move(f))});
}

inline SupportSpec closed_form(const std::string& name, std::vector<double> params, const Vec& w) {
  if (name == "elementary") {
    if (params.size() != 1 || !(params[0] > 0)) throw ValidationError("closed_form elementary: needs a > 0");
    SpacelikeUnit::from(w, 1e-9);
  } else if (name == "zero_mean_radius") {
    SpacelikeUnit::from(w, 1e-9);
  } else if (name == "dual_ball_cone") {
    HPoint::from(w, 1e-9);
  } else {
    throw ValidationError("closed_form: unknown name '" + name + "'");
  }
  return make_spec(spec::ClosedForm{name, std::move(params), w});
}

inline SupportSpec radial_profile(const Vec& axis, std::shared_ptr<const RadialData> data) {
  return make_spec(spec::RadialProfile{axis, std::move(data)});
}

/// Minkowski sum K + K'.
inline SupportSpec minkowski_sum(const SupportSpec& a, const SupportSpec& b) {
  const auto* ca = std::get_if<spec::ConeApex>(&a.node().v);
  const auto* cb = std::get_if<spec::ConeApex>(&b.node().v);
  if (ca && cb) return cone_apex(ca->p + cb->p);
  const auto* ka = std::get_if<spec::Constant>(&a.node().v);
  const auto* kb = std::get_if<spec::Constant>(&b.node().v);
  if (ka && kb) return constant(ka->c + kb->c);
  return make_spec(spec::Sum{{a, b}});
}

inline SupportSpec scale(double lambda, const SupportSpec& s) {
  if (!(lambda > 0)) throw ValidationError("scale: lambda must be > 0");
  if (auto* k = std::get_if<spec::Constant>(&s.node().v)) return constant(lambda * k->c);
  if (auto* c = std::get_if<spec::ConeApex>(&s.node().v)) return cone_apex(lambda * c->p);
  return make_spec(spec::Scale{lambda, s});
}

// --- closed-form phi ---------------------------------------------------------

namespace detail {

struct Phi {
  double v, d1, d2;
};

inline Phi closed_phi(const spec::ClosedForm& cf, double z) {
  using numeric::pi;
  if (cf.name == "elementary" || cf.name == "zero_mean_radius") {
    const double a = cf.name == "elementary" ? cf.params[0] / pi : 1.0;
    const double az = std::abs(z);
    if (az == 0.0) return {-a, std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    const double at = std::atan(1.0 / az);
    const double s = z > 0 ? 1.0 : -1.0;
    return {a * (az * at - 1.0), s * a * (at - az / (1 + z * z)), -2.0 * a / ((1 + z * z) * (1 + z * z))};
  }
  // dual_ball_cone
  return {0.5 / z, -0.5 / (z * z), 1.0 / (z * z * z)};
}

inline double polyhedral_tie_tol(const std::vector<Vec>& vs, const Vec& eta, double mx) {
  double pn = 0;
  for (const Vec& p : vs) pn = std::max(pn, p.norm());
  return 1e-9 * std::max(std::abs(mx), pn * eta.norm());
}

}  // namespace detail

// --- evaluation --------------------------------------------------------------

inline double eval_h(const SupportSpec& s, const Vec& eta) {
  return std::visit(
      overloaded{
          [&](const spec::Constant& n) { return n.c; },
          [&](const spec::ConeApex& n) { return minkowski_form(n.p, eta); },
          [&](const spec::PowerCosh& n) {
            const double ch = std::max(1.0, -minkowski_form(eta, n.axis));
            return n.sign * std::pow(ch, n.alpha);
          },
          [&](const spec::PolyhedralMax& n) {
            double m = -std::numeric_limits<double>::infinity();
            for (const Vec& p : n.vertices) m = std::max(m, minkowski_form(eta, p));
            return m;
          },
          [&](const spec::Sum& n) {
            double acc = 0;
            for (const auto& t : n.terms) acc += eval_h(t, eta);
            return acc;
          },
          [&](const spec::Scale& n) { return n.lambda * eval_h(n.child, eta); },
          [&](const spec::Combination& n) {
            double acc = 0;
            for (std::size_t i = 0; i < n.terms.size(); ++i) acc += n.coeffs[i] * eval_h(n.terms[i], eta);
            return acc;
          },
          [&](const spec::Tabulated& n) { return n.field->eval(eta); },
          [&](const spec::ClosedForm& n) { return detail::closed_phi(n, minkowski_form(eta, n.w)).v; },
          [&](const spec::RadialProfile& n) { return n.data->f(hyperbolic_distance(eta, n.axis)); },
      },
      s.node().v);
}

/// H(x) = |x|_- h(x/|x|_-) on the future cone.
inline double extend_H(const SupportSpec& s, const Vec& x) {
  auto [p, n] = normalize_future(x);
  return n * eval_h(s, p.vec);
}

// --- derivatives -------------------------------------------------------------

inline double fd_default_step() { return 1e-4; }

namespace detail {

inline double h_exp(const SupportSpec& s, const Vec& eta, const Vec& sv) { return eval_h(s, exp_map(eta, sv)); }

/// Tangential gradient by central differences in normal coordinates.
inline Vec gradient_fd(const SupportSpec& s, const Vec& eta, double step) {
  const int d = static_cast<int>(eta.size()) - 1;
  Vec g(d);
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e[i] = step;
    g[i] = (h_exp(s, eta, e) - h_exp(s, eta, -e)) / (2 * step);
  }
  return tangent_frame(eta) * g;
}

/// Hessian in frame coordinates by central differences in normal coordinates.
inline Mat hessian_fd(const SupportSpec& s, const Vec& eta, double step) {
  const int d = static_cast<int>(eta.size()) - 1;
  Mat H(d, d);
  const double f0 = eval_h(s, eta);
  for (int i = 0; i < d; ++i) {
    Vec ei = Vec::Zero(d);
    ei[i] = step;
    H(i, i) = (h_exp(s, eta, ei) - 2 * f0 + h_exp(s, eta, -ei)) / (step * step);
    for (int j = i + 1; j < d; ++j) {
      Vec ej = Vec::Zero(d);
      ej[j] = step;
      H(i, j) = H(j, i) = (h_exp(s, eta, ei + ej) - h_exp(s, eta, ei - ej) - h_exp(s, eta, -ei + ej) +
                           h_exp(s, eta, -ei - ej)) /
                          (4 * step * step);
    }
  }
  return H;
}

inline const Vec& polyhedral_active(const spec::PolyhedralMax& n, const Vec& eta) {
  double mx = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < n.vertices.size(); ++i) {
    const double v = minkowski_form(eta, n.vertices[i]);
    if (v > mx) {
      mx = v;
      arg = i;
    }
  }
  const double tol = polyhedral_tie_tol(n.vertices, eta, mx);
  std::vector<Vec> ties;
  for (const Vec& p : n.vertices)
    if (mx - minkowski_form(eta, p) <= tol) ties.push_back(p);
  if (ties.size() > 1) throw NonDifferentiable("polyhedral support function has a corner here", std::move(ties));
  return n.vertices[arg];
}

}  // namespace detail

/// Tangential gradient (ambient vector in T_eta H^d).
inline Vec gradient(const SupportSpec& s, const Vec& eta, double step = 1e-5) {
  return std::visit(
      overloaded{
          [&](const spec::Constant&) -> Vec { return Vec::Zero(eta.size()); },
          [&](const spec::ConeApex& n) -> Vec { return tangent_part(eta, n.p); },
          [&](const spec::PowerCosh& n) -> Vec {
            const double ch = std::max(1.0, -minkowski_form(eta, n.axis));
            // grad cosh(rho) = -(axis)_T
            return -(n.sign * n.alpha * std::pow(ch, n.alpha - 1)) * tangent_part(eta, n.axis);
          },
          [&](const spec::PolyhedralMax& n) -> Vec {
            return tangent_part(eta, detail::polyhedral_active(n, eta));
          },
          [&](const spec::Sum& n) -> Vec {
            Vec g = Vec::Zero(eta.size());
            for (const auto& t : n.terms) g += gradient(t, eta, step);
            return g;
          },
          [&](const spec::Scale& n) -> Vec { return n.lambda * gradient(n.child, eta, step); },
          [&](const spec::Combination& n) -> Vec {
            Vec g = Vec::Zero(eta.size());
            for (std::size_t i = 0; i < n.terms.size(); ++i) g += n.coeffs[i] * gradient(n.terms[i], eta, step);
            return g;
          },
          [&](const spec::Tabulated&) -> Vec { return detail::gradient_fd(s, eta, step); },
          [&](const spec::ClosedForm& n) -> Vec {
            const detail::Phi ph = detail::closed_phi(n, minkowski_form(eta, n.w));
            if (!std::isfinite(ph.d1))
              throw NonDifferentiable("closed form is not differentiable on its wall", {});
            return ph.d1 * tangent_part(eta, n.w);
          },
          [&](const spec::RadialProfile& n) -> Vec {
            const double rho = hyperbolic_distance(eta, n.axis);
            if (rho < 1e-300) return Vec::Zero(eta.size());
            const double fp = std::tanh(rho) * (n.data->f(rho) + n.data->htilde(rho));
            return -(fp / std::sinh(rho)) * tangent_part(eta, n.axis);
          },
      },
      s.node().v);
}

/// Hessian of h in the canonical frame at eta.
inline Mat hessian(const SupportSpec& s, const Vec& eta, double step = fd_default_step()) {
  const int d = static_cast<int>(eta.size()) - 1;
  const Mat I = Mat::Identity(d, d);
  return std::visit(
      overloaded{
          [&](const spec::Constant&) -> Mat { return Mat::Zero(d, d); },
          [&](const spec::ConeApex& n) -> Mat { return minkowski_form(n.p, eta) * I; },
          [&](const spec::PowerCosh& n) -> Mat {
            const double ch = std::max(1.0, -minkowski_form(eta, n.axis));
            const Vec c = frame_coords(eta, tangent_part(eta, n.axis));  // |c|^2 = sinh^2
            const double a = n.alpha;
            return n.sign * (a * std::pow(ch, a) * I + a * (a - 1) * std::pow(ch, a - 2) * c * c.transpose());
          },
          [&](const spec::PolyhedralMax& n) -> Mat {
            return minkowski_form(eta, detail::polyhedral_active(n, eta)) * I;
          },
          [&](const spec::Sum& n) -> Mat {
            Mat H = Mat::Zero(d, d);
            for (const auto& t : n.terms) H += hessian(t, eta, step);
            return H;
          },
          [&](const spec::Scale& n) -> Mat { return n.lambda * hessian(n.child, eta, step); },
          [&](const spec::Combination& n) -> Mat {
            Mat H = Mat::Zero(d, d);
            for (std::size_t i = 0; i < n.terms.size(); ++i) H += n.coeffs[i] * hessian(n.terms[i], eta, step);
            return H;
          },
          [&](const spec::Tabulated&) -> Mat { return detail::hessian_fd(s, eta, step); },
          [&](const spec::ClosedForm& n) -> Mat {
            const double z = minkowski_form(eta, n.w);
            const detail::Phi ph = detail::closed_phi(n, z);
            if (!std::isfinite(ph.d1))
              throw NonDifferentiable("closed form is not differentiable on its wall", {});
            const Vec c = frame_coords(eta, tangent_part(eta, n.w));
            return ph.d1 * z * I + ph.d2 * c * c.transpose();
          },
          [&](const spec::RadialProfile& n) -> Mat {
            const double rho = hyperbolic_distance(eta, n.axis);
            const double f = n.data->f(rho), ht = n.data->htilde(rho);
            Mat H = (f + ht) * I;
            if (rho > 1e-300) {
              const Vec u = frame_coords(eta, tangent_part(eta, n.axis)) / std::sinh(rho);
              H += std::tanh(rho) * n.data->htilde_d(rho) * u * u.transpose();
            }
            return H;
          },
      },
      s.node().v);
}

struct NormalResult {
  bool differentiable = true;
  Vec chi;
  std::vector<Vec> tie_set;  ///< achieving vertices where h has a corner
};

/// chi(eta) = grad h - h eta.
inline NormalResult normal_representation(const SupportSpec& s, const Vec& eta) {
  NormalResult r;
  try {
    r.chi = gradient(s, eta) - eval_h(s, eta) * eta;
  } catch (const NonDifferentiable& e) {
    r.differentiable = false;
    r.tie_set = e.tie_set;
  }
  return r;
}

struct CurvatureData {
  Mat reverse_II;  ///< grad^2 h - h g in the canonical frame
  Vec radii;  ///< ascending eigenvalues
  Mat directions;  ///< eigenvectors (columns, frame coordinates)
};

inline CurvatureData curvature(const SupportSpec& s, const Vec& eta, double step = fd_default_step()) {
  const int d = static_cast<int>(eta.size()) - 1;
  CurvatureData c;
  Mat M = hessian(s, eta, step) - eval_h(s, eta) * Mat::Identity(d, d);
  c.reverse_II = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(c.reverse_II);
  c.radii = es.eigenvalues();
  c.directions = es.eigenvectors();
  return c;
}

// --- convexity reports --------------------------------------------------------

enum class Verdict { certified_on_samples, violated, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::certified_on_samples: return "certified-on-samples";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct Witness {
  Vec point;
  double value = 0.0;  ///< quantified negativity
  Vec direction;
  std::string detail;
};

struct ConvexityReport {
  Verdict verdict = Verdict::inconclusive;
  std::vector<Witness> witnesses;
  double min_eigenvalue = std::numeric_limits<double>::infinity();
  std::size_t checked = 0, skipped = 0;
  std::string note = "certification covers the sampled points only";
};

inline void finish_report(ConvexityReport& r) {
  if (!r.witnesses.empty()) r.verdict = Verdict::violated;
  else if (r.checked == 0 || r.skipped > 0) r.verdict = Verdict::inconclusive;
  else r.verdict = Verdict::certified_on_samples;
}

/// Min eigenvalue of the reverse second fundamental form over the samples.
inline ConvexityReport check_convexity_pointwise(const SupportSpec& s, const std::vector<Vec>& samples,
                                                 double tol = 1e-8, double step = fd_default_step()) {
  ConvexityReport r;
  for (const Vec& eta : samples) {
    CurvatureData c;
    try {
      c = curvature(s, eta, step);
    } catch (const NonDifferentiable&) {
      ++r.skipped;
      continue;
    }
    ++r.checked;
    r.min_eigenvalue = std::min(r.min_eigenvalue, c.radii[0]);
    if (c.radii[0] < -tol) r.witnesses.push_back({eta, c.radii[0], c.directions.col(0), "negative radius of curvature"});
  }
  finish_report(r);
  return r;
}

namespace detail {
inline double ray_h(const SupportSpec& s, const Vec& base, const Vec& theta, double r) {
  return eval_h(s, polar_to(base, std::abs(r), r >= 0 ? theta : Vec(-theta)));
}
}  // namespace detail

/// h(rho+a) + h(rho-a) >= 2 cosh(a) h(rho) along the geodesic through base
/// in direction theta (negative rho = opposite direction). The tolerance is
/// scaled by the magnitude of the terms.
inline ConvexityReport check_radial_convexity(const SupportSpec& s, const Vec& base, const Vec& theta,
                                              const std::vector<std::pair<double, double>>& samples,
                                              double tol = 1e-9) {
  ConvexityReport r;
  for (auto [rho, a] : samples) {
    const double hp = detail::ray_h(s, base, theta, rho + a), hm = detail::ray_h(s, base, theta, rho - a);
    const double h0 = detail::ray_h(s, base, theta, rho);
    const double gap = hp + hm - 2 * std::cosh(a) * h0;
    const double scale = std::max(1.0, std::abs(hp) + std::abs(hm) + 2 * std::cosh(a) * std::abs(h0));
    ++r.checked;
    r.min_eigenvalue = std::min(r.min_eigenvalue, gap / scale);
    if (gap < -tol * scale)
      r.witnesses.push_back({polar_to(base, std::abs(rho), rho >= 0 ? theta : Vec(-theta)), gap, theta,
                             "radial convexity fails at rho=" + std::to_string(rho) + " alpha=" + std::to_string(a)});
  }
  finish_report(r);
  return r;
}

/// H(eta+nu) <= H(eta) + H(nu) for future-timelike pairs.
inline ConvexityReport check_subadditivity(const SupportSpec& s, const std::vector<std::pair<Vec, Vec>>& pairs,
                                           double tol = 1e-9) {
  ConvexityReport r;
  for (const auto& [a, b] : pairs) {
    const double ha = extend_H(s, a), hb = extend_H(s, b), hab = extend_H(s, Vec(a + b));
    const double gap = ha + hb - hab;
    const double scale = std::max(1.0, std::abs(ha) + std::abs(hb) + std::abs(hab));
    ++r.checked;
    r.min_eigenvalue = std::min(r.min_eigenvalue, gap / scale);
    if (gap < -tol * scale) r.witnesses.push_back({a, gap, b, "subadditivity fails"});
  }
  finish_report(r);
  return r;
}

/// lim_{rho->inf} h(rho,Theta)/cosh(rho), from samples at rho = 5, 10, 20
/// under the model r(rho) = L + C q^rho. +-infinity when the ratio at 20
/// exceeds 1e6 in size or the fitted q exceeds 1 (geometric growth).
inline double support_at_infinity(const SupportSpec& s, const Vec& theta, const Vec& base) {
  auto ratio = [&](double r) { return eval_h(s, polar_to(base, r, theta)) / std::cosh(r); };
  const double r5 = ratio(5), r10 = ratio(10), r20 = ratio(20);
  const double inf = std::numeric_limits<double>::infinity();
  if (std::abs(r20) > 1e6) return r20 > 0 ? inf : -inf;
  const double d1 = r10 - r5, d2 = r20 - r10;
  const double scale = std::max({1.0, std::abs(r5), std::abs(r20)});
  if (std::abs(d1) < 1e-14 * scale || std::abs(d2) < 1e-14 * scale) return r20;
  // d2/d1 = x (x + 1) with x = q^5
  const double k = d2 / d1;
  if (k <= 0) return r20;
  const double x = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * k));
  if (x > 1.0 + 1e-3) return d2 > 0 ? inf : -inf;
  if (std::abs(x - 1.0) < 1e-12) return r20;
  const double C = d1 / (x * (x - 1.0));
  return r20 - C * std::pow(x, 4);
}

inline double support_at_infinity(const SupportSpec& s, const Vec& theta) {
  return support_at_infinity(s, theta, origin(static_cast<int>(theta.size())));
}

/// Light-like direction l_Theta = (Theta, 1).
inline Vec lightlike_direction(const Vec& theta) {
  Vec l(theta.size() + 1);
  l << theta, 1.0;
  return l;
}

}  // namespace lorentzian
