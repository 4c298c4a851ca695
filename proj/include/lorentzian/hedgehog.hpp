// Writing a C^2 function on a ball of H^d as a difference of two support
// functions: h = h1 - h2 with h1 radial and h2 = h1 - h.
#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "core.hpp"
#include "numeric.hpp"
#include "support.hpp"

namespace lorentzian {

struct HedgehogOptions {
  int n_rho = 64;        ///< radial samples of h*
  int n_dirs = 64;       ///< sphere directions per radius (d >= 2)
  int n_table = 1000;    ///< Simpson nodes for the profile primitive
  double margin_rel = 0.05;
  double margin_abs = 1e-6;
  int check_points = 400;
};

struct HedgehogDecomposition {
  SupportSpec h1, h2;
  std::shared_ptr<const RadialData> profile;
  std::vector<double> rho, h_star;  ///< sampled max(0, max eigenvalue of reverse-II)
  ConvexityReport report_h1, report_h2;
  double max_difference = 0.0;  ///< max |h1 - h2 - h| on the check points
};

/// Points in the closed ball of radius R about e_{d+1}.
inline std::vector<Vec> ball_points(int d, double R, int n) {
  std::vector<Vec> out;
  const Vec o = origin(d);
  for (const Vec& s : numeric::ball_spiral(d, n, R)) out.push_back(exp_map(o, s));
  return out;
}

inline HedgehogDecomposition decompose_hedgehog(const SupportSpec& h, int d, double R, const HedgehogOptions& opt = {}) {
  require_dimension(d);
  if (!(R > 0)) throw ValidationError("decompose_hedgehog: radius must be > 0");
  const Vec o = origin(d);
  HedgehogDecomposition out;
  const auto dirs = numeric::sphere_directions(d, opt.n_dirs);
  out.rho.resize(opt.n_rho + 1);
  out.h_star.assign(opt.n_rho + 1, 0.0);
  numeric::parallel_for(out.rho.size(), [&](std::size_t j) {
    const double r = R * static_cast<double>(j) / opt.n_rho;
    out.rho[j] = r;
    double m = 0.0;
    for (const Vec& th : dirs) {
      CurvatureData c;
      try {
        c = curvature(h, polar_to(o, r, th));
      } catch (const NonDifferentiable& e) {
        throw ValidationError(std::string("decompose_hedgehog: h is not twice differentiable on the ball: ") + e.what());
      }
      m = std::max(m, c.radii[c.radii.size() - 1]);
      if (j == 0) break;
    }
    out.h_star[j] = m;
  });

  // h1*: increasing step function dominating h* with a margin
  auto data = std::make_shared<RadialData>();
  data->R = R;
  const double top = *std::max_element(out.h_star.begin(), out.h_star.end());
  const double margin = opt.margin_abs + opt.margin_rel * top;
  double run = 0.0;
  for (int j = 0; j < opt.n_rho; ++j) {
    run = std::max({run, out.h_star[j], out.h_star[j + 1]});
    data->edges.push_back(out.rho[j]);
    data->steps.push_back(run + margin);
  }
  data->edges.push_back(R);
  data->steps.push_back(run + margin);
  data->finalize_primitives();

  // F(rho) = int_0^rho sinh t / cosh^2 t * htilde(t) dt
  const int n = opt.n_table;
  data->dF = R / n;
  data->F.assign(n + 1, 0.0);
  for (int j = 0; j < n; ++j) {
    const double a = j * data->dF;
    data->F[j + 1] = data->F[j] + numeric::simpson([&](double t) { return data->weight(t) * data->htilde(t); }, a,
                                                   a + data->dF, 2);
  }
  out.profile = data;
  out.h1 = radial_profile(o, data);
  out.h2 = combination({1.0, -1.0}, {out.h1, h});

  const auto pts = ball_points(d, R * (1 - 1e-9), opt.check_points);
  out.report_h1 = check_convexity_pointwise(out.h1, pts);
  out.report_h2 = check_convexity_pointwise(out.h2, pts);
  for (const Vec& p : pts)
    out.max_difference = std::max(out.max_difference, std::abs(eval_h(out.h1, p) - eval_h(out.h2, p) - eval_h(h, p)));
  return out;
}

}  // namespace lorentzian
