#pragma once

#include "critsense/domain.hpp"
#include "critsense/field.hpp"

#include <string_view>
#include <vector>

namespace critsense {

enum class PassKind { InteriorCritical, BoundaryTangency };

std::string_view to_string(PassKind kind);

struct PathOptions {
  int n_knots = 32;
  int iters = 400;
  // Initial step as a fraction of the domain diameter; 0 picks 0.05.
  double step = 0.0;
  int samples_per_segment = 8;
};

struct PathResult {
  std::vector<Vec> path;  // p1, knots, p2
  double value = 0;       // min of f along the densely sampled path
  Vec argmin;
  std::vector<double> history;  // value after every accepted update
  bool monotone = true;
  bool degenerate = false;  // f constant along the final path
};

/// Max-min over piecewise-linear paths from p1 to p2: knots move by projected ascent
/// normal to the path, are projected onto the domain and respaced by arc length. A step
/// is kept only if the path minimum does not drop.
PathResult minimax_over_paths(const ScalarField& f, const Domain& domain, const Vec& p1, const Vec& p2,
                              const PathOptions& options = {});

/// Dense samples of a polyline.
std::vector<Vec> densify(const std::vector<Vec>& path, int samples_per_segment);

struct PassOptions {
  PathOptions path;
  double pass_tol = 1e-6;
  double boundary_tol = 1e-9;
  // Relative probe radius for the strict-maximum precondition.
  double probe_radius = 1e-3;
};

struct PassResult {
  Vec p3;
  double c = 0;
  PassKind kind = PassKind::InteriorCritical;
  std::vector<Vec> path;
  // |grad f(p3)| for interior points, |grad f(p3) . t| on the boundary.
  double certificate = 0;
  // grad f(p3) . n on the boundary (0 for interior points).
  double normal_component = 0;
  double f_p1 = 0;
  double f_p2 = 0;
  bool certified = false;
  std::vector<double> history;
};

PassResult mountain_pass_point(const ScalarField& f, const Domain& domain, Vec p1, Vec p2,
                               const PassOptions& options = {});

}  // namespace critsense
