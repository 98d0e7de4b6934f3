#pragma once

#include "critsense/domain.hpp"
#include "critsense/field.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace critsense {

/// Number of negative Hessian eigenvalues; empty when min |lambda| <= tol * max(1, ||H||).
std::optional<int> morse_index_of(const Mat& hessian, double degeneracy_tol = 1e-8);
std::optional<int> morse_classify(const ScalarField& f, const Vec& z, double degeneracy_tol = 1e-8);

/// Grid infimum of max(|grad f|, sigma_min(H_f)); zero exactly at degenerate critical points.
double morse_statistic(const ScalarField& f, const Domain& domain, int grid_res);

struct MorseConstants {
  double m = 0.5;
  double norm_h = 0;
  double norm_h_inv = 0;
  /// Bound on sup ||H_f(x) - H|| over the chart ball (K1 when m = 1/2).
  double k1 = 0;
  /// Bound on the chart radius (K2 when m = 1/2).
  double k2 = 0;
};

/// Throws NotMorse for singular H.
MorseConstants morse_constants(const Mat& h, double m = 0.5);

struct FlowChart {
  Vec center;
  Mat h;
  double center_value = 0;
  double r = 0;
  MorseConstants constants;
  double lipschitz = 0;  // sampled sup ||H_f - H|| on the chart ball
  double c = 0;
  double big_c = 0;
  double a1 = 0;
  double ode_step = 1e-3;
  double residual_sup = 0;

  double bilip_upper() const;
  double bilip_lower() const;
};

struct RadiusOptions {
  double m = 0.5;
  double search_cap = 1.0;
  int shells = 16;
  int directions = 64;  // for D = 2; scaled with D
  int bisection_steps = 48;
  double ode_step = 1e-3;
};

/// Largest r <= min(search_cap, K2) with sup ||H_f - H|| < K1 on B_r(p), by bisection.
FlowChart morse_radius(const Mat& h, const std::function<Mat(const Vec&)>& hess_at, const Vec& p,
                       const RadiusOptions& options = {});

/// Chart of f at a (refined) critical point p.
FlowChart morse_chart(const ScalarField& f, const Vec& p, const RadiusOptions& options = {});

/// Gamma(x): RK4 integration of the Moser flow from t = 0 to 1.
Vec morse_flow_map(const ScalarField& f, const FlowChart& chart, const Vec& x, double ode_step = 0.0);

/// (t, Gamma_t(x)) at every RK4 step.
std::vector<std::pair<double, Vec>> morse_flow_trajectory(const ScalarField& f, const FlowChart& chart, const Vec& x,
                                                          double ode_step = 0.0);

struct ChartReport {
  double residual_sup = 0;
  double bilip_lo = 0;
  double bilip_hi = 0;
  double bound_lo = 0;
  double bound_hi = 0;
  bool within_bounds = false;
  int samples = 0;
};

/// Deterministic points in the ball of radius r about the origin.
std::vector<Vec> ball_samples(int dim, double r, int n, std::uint64_t seed = 0x6d6f727365ULL);

ChartReport verify_morse_chart(const ScalarField& f, FlowChart& chart, int n_samples = 100, double slack = 1e-6);

/// sup over the shared ball of |(Gamma_n(p_n + xi) - p_n) - (Gamma(p + xi) - p)|.
double flow_pair_distance(const ScalarField& f_n, const ScalarField& f, const FlowChart& chart_n,
                          const FlowChart& chart, double r_shared, int n_samples = 100);

}  // namespace critsense
