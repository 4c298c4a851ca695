// JSON documents for specs, measures, cellulations and regions.
//
//   {"type": "ball", "t": 1}                     B_t (h = -t)
//   {"type": "constant", "c": -1}
//   {"type": "cone_apex", "p": [0, 0, 1]}
//   {"type": "power_cosh", "alpha": 2, "sign": 1, "axis": [0, 0, 1]}
//   {"type": "polyhedral_max", "vertices": [[...], ...]}
//   {"type": "sum", "terms": [...]}
//   {"type": "scale", "lambda": 2, "child": {...}}
//   {"type": "combination", "coeffs": [1, -1], "terms": [...]}
//   {"type": "closed_form", "name": "elementary", "params": [1], "w": [1, 0, 0]}
#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "area.hpp"
#include "christoffel.hpp"
#include "measure.hpp"
#include "polyhedral.hpp"
#include "support.hpp"

namespace lorentzian {

using json = nlohmann::json;

namespace io {

inline const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline double number(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number()) throw ValidationError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

inline double number_or(const json& j, const char* key, double dflt) {
  if (!j.contains(key)) return dflt;
  if (!j.at(key).is_number()) throw ValidationError(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

inline Vec vec(const json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected a coordinate list");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ValidationError(where + ": coordinates must be numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

inline json to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline void check_dim(const Vec& v, int d, const std::string& where) {
  if (v.size() != d + 1)
    throw ValidationError(where + ": expected " + std::to_string(d + 1) + " coordinates, got " + std::to_string(v.size()));
}

}  // namespace io

inline SupportSpec spec_from_json(const json& j, int d) {
  const std::string type = io::require(j, "type", "support spec").get<std::string>();
  const std::string where = "support spec '" + type + "'";
  auto point = [&](const char* key) {
    Vec v = io::vec(io::require(j, key, where), where);
    io::check_dim(v, d, where);
    return v;
  };
  auto children = [&](const char* key) {
    std::vector<SupportSpec> out;
    for (const json& c : io::require(j, key, where)) out.push_back(spec_from_json(c, d));
    return out;
  };
  if (type == "ball") {
    const double t = io::number(j, "t", where);
    if (!(t > 0)) throw ValidationError("ball: t must be > 0");
    return constant(-t);
  }
  if (type == "constant") return constant(io::number(j, "c", where));
  if (type == "cone_apex") return cone_apex(point("p"));
  if (type == "power_cosh")
    return power_cosh(io::number(j, "alpha", where), static_cast<int>(io::number_or(j, "sign", 1)), point("axis"),
                      j.value("convex", true));
  if (type == "polyhedral_max") {
    std::vector<Vec> vs;
    for (const json& p : io::require(j, "vertices", where)) {
      vs.push_back(io::vec(p, where));
      io::check_dim(vs.back(), d, where);
    }
    return polyhedral_max(std::move(vs));
  }
  if (type == "sum") {
    auto ts = children("terms");
    if (ts.empty()) throw ValidationError("sum: no terms");
    SupportSpec acc = ts[0];
    for (std::size_t i = 1; i < ts.size(); ++i) acc = minkowski_sum(acc, ts[i]);
    return acc;
  }
  if (type == "scale") return scale(io::number(j, "lambda", where), spec_from_json(io::require(j, "child", where), d));
  if (type == "combination") {
    std::vector<double> cs;
    for (const json& c : io::require(j, "coeffs", where)) cs.push_back(c.get<double>());
    return combination(std::move(cs), children("terms"));
  }
  if (type == "closed_form") {
    std::vector<double> ps;
    if (j.contains("params"))
      for (const json& c : j.at("params")) ps.push_back(c.get<double>());
    return closed_form(io::require(j, "name", where).get<std::string>(), std::move(ps), point("w"));
  }
  throw ValidationError("support spec: unknown type '" + type + "'");
}

inline json spec_to_json(const SupportSpec& s) {
  return std::visit(
      overloaded{
          [](const spec::Constant& n) { return json{{"type", "constant"}, {"c", n.c}}; },
          [](const spec::ConeApex& n) { return json{{"type", "cone_apex"}, {"p", io::to_json(n.p)}}; },
          [](const spec::PowerCosh& n) {
            return json{{"type", "power_cosh"}, {"alpha", n.alpha}, {"sign", n.sign}, {"axis", io::to_json(n.axis)},
                        {"convex", n.convex_flag}};
          },
          [](const spec::PolyhedralMax& n) {
            json vs = json::array();
            for (const Vec& p : n.vertices) vs.push_back(io::to_json(p));
            return json{{"type", "polyhedral_max"}, {"vertices", vs}};
          },
          [](const spec::Sum& n) {
            json ts = json::array();
            for (const auto& t : n.terms) ts.push_back(spec_to_json(t));
            return json{{"type", "sum"}, {"terms", ts}};
          },
          [](const spec::Scale& n) { return json{{"type", "scale"}, {"lambda", n.lambda}, {"child", spec_to_json(n.child)}}; },
          [](const spec::Combination& n) {
            json ts = json::array();
            for (const auto& t : n.terms) ts.push_back(spec_to_json(t));
            return json{{"type", "combination"}, {"coeffs", n.coeffs}, {"terms", ts}};
          },
          [](const spec::Tabulated&) { return json{{"type", "tabulated"}}; },
          [](const spec::ClosedForm& n) {
            return json{{"type", "closed_form"}, {"name", n.name}, {"params", n.params}, {"w", io::to_json(n.w)}};
          },
          [](const spec::RadialProfile& n) { return json{{"type", "radial_profile"}, {"axis", io::to_json(n.axis)}}; },
      },
      s.node().v);
}

inline Bump bump_from_json(const json& j, int d) {
  Bump b;
  b.center = io::vec(io::require(j, "center", "bump"), "bump");
  io::check_dim(b.center, d, "bump");
  b.radius = io::number(j, "radius", "bump");
  b.amplitude = io::number_or(j, "amplitude", 1.0);
  b.validate();
  return b;
}

inline Wall wall_from_json(const json& j, int d) {
  Wall w;
  w.normal = io::vec(io::require(j, "normal", "wall"), "wall");
  io::check_dim(w.normal, d, "wall");
  w.weight = io::number_or(j, "weight", 1.0);
  return w;
}

inline MeasureSpec measure_from_json(const json& j, int d) {
  MeasureSpec m;
  if (j.contains("atoms"))
    for (const json& a : j.at("atoms")) {
      Vec p = io::vec(io::require(a, "point", "atom"), "atom");
      io::check_dim(p, d, "atom");
      m.atoms.push_back({p, io::number_or(a, "weight", 1.0)});
    }
  if (j.contains("walls"))
    for (const json& w : j.at("walls")) m.walls.push_back(wall_from_json(w, d));
  if (j.contains("density")) m.density = bump_from_json(j.at("density"), d);
  m.validate(d);
  return m;
}

inline Cellulation cellulation_from_json(const json& j, int d) {
  std::vector<Wall> walls;
  for (const json& w : io::require(j, "walls", "cellulation")) walls.push_back(wall_from_json(w, d));
  return Cellulation::arrangement(d, std::move(walls));
}

inline QuadratureSpec quadrature_from_json(const json& j) {
  QuadratureSpec q;
  if (j.is_null()) return q;
  q.rho_max = io::number_or(j, "rho_max", q.rho_max);
  q.radial_nodes = static_cast<int>(io::number_or(j, "radial_nodes", q.radial_nodes));
  q.grading = io::number_or(j, "grading", q.grading);
  q.angular_nodes = static_cast<int>(io::number_or(j, "angular_nodes", q.angular_nodes));
  q.validate();
  return q;
}

inline json quadrature_to_json(const QuadratureSpec& q) {
  return {{"rho_max", q.rho_max}, {"radial_nodes", q.radial_nodes}, {"grading", q.grading}, {"angular_nodes", q.angular_nodes}};
}

///   {"kind": "polar_rect", "base": [...], "rho": [0, 1], "a": [..], "b": [..]}
///   {"kind": "facet_subset", "normal": [...], "foot": [...], "radius": r, "half_width": w}
///   {"kind": "fundamental_domain", "t_start": 0, "period": 1}
inline RegionSpec region_from_json(const json& j, int d) {
  const std::string kind = io::require(j, "kind", "region").get<std::string>();
  auto pair = [&](const char* key, double lo, double hi) {
    if (!j.contains(key)) return std::pair<double, double>{lo, hi};
    const json& a = j.at(key);
    if (!a.is_array() || a.size() != 2) throw ValidationError(std::string("region: '") + key + "' must be [lo, hi]");
    return std::pair<double, double>{a[0].get<double>(), a[1].get<double>()};
  };
  RegionSpec r;
  if (kind == "polar_rect") {
    Vec base = j.contains("base") ? io::vec(j.at("base"), "region") : origin(d);
    io::check_dim(base, d, "region");
    const auto [r0, r1] = pair("rho", 0.0, 1.0);
    const double pi = numeric::pi;
    const auto [a0, a1] = pair("a", d == 1 ? -1.0 : 0.0, d == 1 ? 1.0 : (d == 2 ? 2 * pi : pi));
    const auto [b0, b1] = pair("b", 0.0, 2 * pi);
    r = RegionSpec::polar_rect(base, r0, r1, a0, a1, b0, b1);
  } else if (kind == "facet_subset") {
    Vec n = io::vec(io::require(j, "normal", "region"), "region"), f = io::vec(io::require(j, "foot", "region"), "region");
    io::check_dim(n, d, "region");
    io::check_dim(f, d, "region");
    r = RegionSpec::facet_subset(n, f, io::number_or(j, "radius", 0.0), io::number(j, "half_width", "region"));
  } else if (kind == "fundamental_domain") {
    if (d != 1) throw ValidationError("region: fundamental_domain needs d=1");
    r = RegionSpec::fundamental_domain(io::number_or(j, "t_start", 0.0), io::number(j, "period", "region"));
  } else {
    throw ValidationError("region: unknown kind '" + kind + "'");
  }
  return r;
}

}  // namespace lorentzian
