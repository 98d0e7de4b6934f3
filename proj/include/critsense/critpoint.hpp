#pragma once

#include "critsense/domain.hpp"
#include "critsense/field.hpp"

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace critsense {

enum class PointKind { Max, Min, Saddle, Undulation, Unclassified };

std::string_view to_string(PointKind kind);

struct Classification {
  PointKind kind = PointKind::Unclassified;
  // Saddle prongs in D = 2 (1 - index); 0 when not applicable.
  int prongs = 0;

  std::string to_string() const;
  bool operator==(const Classification&) const = default;
};

struct CriticalPoint {
  Vec location;
  double value = 0;
  double grad_norm = 0;
  Vec eigenvalues;  // ascending
  std::optional<int> morse_index;  // empty: Degenerate
  std::optional<int> hom_index;    // empty: Unavailable
  Classification classification;
  bool near_boundary = false;
};

struct DetectorOptions {
  int grid_res = 64;
  double newton_tol = 1e-9;
  int max_iter = 100;
  // Multiples of the grid cell diagonal.
  double dedupe_cells = 2.0;
  double boundary_margin_cells = 1.0;
  // Fixed index radius; 0 selects it per point.
  double eps = 0.0;
  bool classify = true;
  double degeneracy_tol = 1e-8;
};

struct DetectionResult {
  std::vector<CriticalPoint> points;
  // Sign-change cells whose Newton run failed; best iterate of each.
  std::vector<Vec> unresolved;
  double dedupe_radius = 0;
  double boundary_margin = 0;
};

/// Grid scan for sign-change cells (and grid minima of |grad f|) followed by Newton refinement.
DetectionResult find_critical_points(const ScalarField& f, const Domain& domain, const DetectorOptions& options = {});

/// Newton's method on grad f = 0 with a Levenberg-Marquardt step when the Hessian is
/// near singular. Throws NoConvergence carrying the best iterate.
Vec refine_newton(const ScalarField& f, const Vec& s0, double tol, int max_iter = 100);

/// Minimum pairwise distance; +inf for fewer than two points.
double resolution(const std::vector<Vec>& points);
double resolution(const std::vector<CriticalPoint>& points);

/// Distance from each point to its nearest neighbor in the set (+inf when alone).
std::vector<double> nearest_neighbor_distances(const std::vector<Vec>& points);

/// inf over boundary samples of |grad f|.
double boundary_min_gradient(const ScalarField& f, const Domain& domain, std::size_t n_samples = 1024);

struct ImproperCounts {
  int maxima = 0;
  int minima = 0;
  bool operator==(const ImproperCounts&) const = default;
};

/// Grid-local improper extrema; each plateau component counts once.
ImproperCounts improper_extrema(const ScalarField& f, const Domain& domain, int grid_res);

enum class DiffOrder { Gradient, Hessian };

/// Central differences of values at an interior point with margin >= 2h.
Vec finite_diff_gradient(const ScalarField& f, const Domain& domain, const Vec& s, double h);
Mat finite_diff_hessian(const ScalarField& f, const Domain& domain, const Vec& s, double h);

}  // namespace critsense
