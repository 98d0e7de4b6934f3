#include "critsense/morse.hpp"

#include "critsense/error.hpp"
#include "critsense/parallel.hpp"
#include "critsense/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace critsense {

std::optional<int> morse_index_of(const Mat& hessian, double degeneracy_tol) {
  const Vec eig = symmetric_eigenvalues(hessian);
  const double hn = eig.cwiseAbs().maxCoeff();
  if (!(eig.cwiseAbs().minCoeff() > degeneracy_tol * std::max(1.0, hn))) return std::nullopt;
  return static_cast<int>((eig.array() < 0).count());
}

std::optional<int> morse_classify(const ScalarField& f, const Vec& z, double degeneracy_tol) {
  return morse_index_of(f.hessian(z), degeneracy_tol);
}

double morse_statistic(const ScalarField& f, const Domain& domain, int grid_res) {
  const StructuredGrid grid(domain, grid_res);
  const std::size_t nv = grid.vertex_count();
  std::vector<double> local(nv, std::numeric_limits<double>::infinity());
  parallel_for(nv, [&](std::size_t i) {
    if (!grid.inside(i)) return;
    const Vec s = grid.vertex(i);
    local[i] = std::max(f.gradient(s).norm(), smallest_singular_value(f.hessian(s)));
  });
  return *std::min_element(local.begin(), local.end());
}

MorseConstants morse_constants(const Mat& h, double m) {
  if (!(m > 0 && m < 1)) throw Error(ErrorCode::Usage, "m must lie in (0, 1)");
  const double nh = spectral_norm(h);
  const double ninv = inverse_spectral_norm(h);
  if (!(nh > 0) || !std::isfinite(ninv)) throw Error(ErrorCode::NotMorse, "Hessian is singular");
  MorseConstants k;
  k.m = m;
  k.norm_h = nh;
  k.norm_h_inv = ninv;
  k.k1 = std::min(1 - m, m * m * std::log(2.0) / (6 * nh * ninv)) / ninv;
  k.k2 = m / (4 * nh * ninv);
  return k;
}

double FlowChart::bilip_upper() const { return std::exp(a1); }
double FlowChart::bilip_lower() const { return 2 - std::exp(a1); }

namespace {

double hessian_variation(const Mat& h, const std::function<Mat(const Vec&)>& hess_at, const Vec& p, double r,
                         const std::vector<Vec>& dirs, int shells) {
  double sup = 0;
  for (int k = 1; k <= shells; ++k) {
    const double rho = r * k / shells;
    for (const Vec& u : dirs) sup = std::max(sup, spectral_norm(hess_at(p + rho * u) - h));
  }
  return sup;
}

}  // namespace

FlowChart morse_radius(const Mat& h, const std::function<Mat(const Vec&)>& hess_at, const Vec& p,
                       const RadiusOptions& options) {
  FlowChart chart;
  chart.center = p;
  chart.h = (h + h.transpose()) / 2;
  chart.constants = morse_constants(chart.h, options.m);
  chart.ode_step = options.ode_step;
  const int dim = static_cast<int>(p.size());
  const auto dirs = sphere_directions(dim, static_cast<std::size_t>(options.directions * std::max(1, dim - 1)));
  const double k1 = chart.constants.k1;
  auto holds = [&](double r) { return hessian_variation(chart.h, hess_at, p, r, dirs, options.shells) < k1; };

  double hi = std::min(options.search_cap, std::nextafter(chart.constants.k2, 0.0));
  double r = hi;
  if (!holds(hi)) {
    double lo = 0;
    for (int it = 0; it < options.bisection_steps; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (holds(mid)) lo = mid;
      else hi = mid;
    }
    r = lo;
  }
  if (!(r > 0)) throw Error(ErrorCode::NotMorse, "no positive chart radius satisfies the variation bound");
  chart.r = r;
  chart.lipschitz = hessian_variation(chart.h, hess_at, p, r, dirs, options.shells);
  chart.c = 1 / chart.constants.norm_h_inv - chart.lipschitz;
  chart.big_c = chart.constants.norm_h + chart.lipschitz;
  chart.a1 = (chart.lipschitz / chart.c) * (2 + 3 * chart.big_c / chart.c);
  return chart;
}

FlowChart morse_chart(const ScalarField& f, const Vec& p, const RadiusOptions& options) {
  FlowChart chart = morse_radius(f.hessian(p), [&f](const Vec& s) { return f.hessian(s); }, p, options);
  chart.center_value = f.value(p);
  return chart;
}

namespace {

// v_t(xi) = -phi(xi) y_t(xi) / |y_t(xi)|^2 with y_t = H xi + t grad phi(xi), recentred at p.
Vec flow_velocity(const ScalarField& f, const FlowChart& chart, double t, const Vec& xi) {
  const double xn = xi.norm();
  if (xn == 0) return Vec::Zero(xi.size());
  const Vec s = chart.center + xi;
  const Vec hxi = chart.h * xi;
  const double phi = f.value(s) - chart.center_value - 0.5 * xi.dot(hxi);
  const Vec y = hxi + t * (f.gradient(s) - hxi);
  const double yn2 = y.squaredNorm();
  if (!(std::sqrt(yn2) > 1e-14 * xn * chart.constants.norm_h))
    throw Error(ErrorCode::FlowSingular, "|y_t| vanished away from the chart centre");
  return -phi / yn2 * y;
}

template <typename Visit>
Vec integrate(const ScalarField& f, const FlowChart& chart, const Vec& x, double step, Visit&& visit) {
  if (!(step > 0)) step = chart.ode_step;
  const int steps = std::max(1, static_cast<int>(std::lround(1.0 / step)));
  const double h = 1.0 / steps;
  Vec xi = x - chart.center;
  visit(0.0, xi);
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const Vec k1 = flow_velocity(f, chart, t, xi);
    const Vec k2 = flow_velocity(f, chart, t + h / 2, xi + h / 2 * k1);
    const Vec k3 = flow_velocity(f, chart, t + h / 2, xi + h / 2 * k2);
    const Vec k4 = flow_velocity(f, chart, t + h, xi + h * k3);
    xi += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    visit((k + 1) * h, xi);
  }
  return chart.center + xi;
}

}  // namespace

Vec morse_flow_map(const ScalarField& f, const FlowChart& chart, const Vec& x, double ode_step) {
  if ((x - chart.center).norm() > chart.r * (1 + 1e-12))
    throw Error(ErrorCode::Coverage, "flow map evaluated outside the chart ball");
  return integrate(f, chart, x, ode_step, [](double, const Vec&) {});
}

std::vector<std::pair<double, Vec>> morse_flow_trajectory(const ScalarField& f, const FlowChart& chart, const Vec& x,
                                                          double ode_step) {
  if ((x - chart.center).norm() > chart.r * (1 + 1e-12))
    throw Error(ErrorCode::Coverage, "flow map evaluated outside the chart ball");
  std::vector<std::pair<double, Vec>> out;
  integrate(f, chart, x, ode_step, [&](double t, const Vec& xi) { out.emplace_back(t, chart.center + xi); });
  return out;
}

std::vector<Vec> ball_samples(int dim, double r, int n, std::uint64_t seed) {
  std::vector<Vec> pts;
  pts.reserve(n);
  for (int k = 0; k < n; ++k) {
    Vec d(dim);
    for (int i = 0; i < dim; ++i) d[i] = standard_normal(hash_key({seed, std::uint64_t(k), std::uint64_t(i)}));
    const double u = uniform_open(hash_key({seed, std::uint64_t(k), 0xffffULL}));
    pts.push_back(r * std::pow(u, 1.0 / dim) * d.normalized());
  }
  return pts;
}

ChartReport verify_morse_chart(const ScalarField& f, FlowChart& chart, int n_samples, double slack) {
  const int dim = static_cast<int>(chart.center.size());
  const auto xs = ball_samples(dim, chart.r, n_samples);
  std::vector<Vec> images(xs.size());
  std::vector<double> residual(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    images[i] = morse_flow_map(f, chart, chart.center + xs[i], chart.ode_step);
    const double target = chart.center_value + 0.5 * xs[i].dot(chart.h * xs[i]);
    residual[i] = std::abs(f.value(images[i]) - target);
  });
  ChartReport report;
  report.samples = n_samples;
  report.residual_sup = residual.empty() ? 0.0 : *std::max_element(residual.begin(), residual.end());
  report.bilip_lo = std::numeric_limits<double>::infinity();
  report.bilip_hi = 0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const double dx = (xs[i] - xs[j]).norm();
      if (!(dx > 1e-9 * chart.r)) continue;
      const double ratio = (images[i] - images[j]).norm() / dx;
      report.bilip_lo = std::min(report.bilip_lo, ratio);
      report.bilip_hi = std::max(report.bilip_hi, ratio);
    }
  }
  if (report.bilip_hi == 0) report.bilip_lo = report.bilip_hi = 1;
  report.bound_hi = chart.bilip_upper();
  report.bound_lo = chart.bilip_lower();
  report.within_bounds = report.bilip_hi <= report.bound_hi + slack && report.bilip_lo >= report.bound_lo - slack;
  chart.residual_sup = report.residual_sup;
  return report;
}

double flow_pair_distance(const ScalarField& f_n, const ScalarField& f, const FlowChart& chart_n,
                          const FlowChart& chart, double r_shared, int n_samples) {
  if (!(r_shared > 0) || r_shared > std::min(chart_n.r, chart.r))
    throw Error(ErrorCode::Coverage, "charts do not cover the shared ball");
  const auto xs = ball_samples(static_cast<int>(chart.center.size()), r_shared, n_samples);
  std::vector<double> dist(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    const Vec a = morse_flow_map(f_n, chart_n, chart_n.center + xs[i]) - chart_n.center;
    const Vec b = morse_flow_map(f, chart, chart.center + xs[i]) - chart.center;
    dist[i] = (a - b).norm();
  });
  return dist.empty() ? 0.0 : *std::max_element(dist.begin(), dist.end());
}

}  // namespace critsense
