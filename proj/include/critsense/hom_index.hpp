#pragma once

#include "critsense/critpoint.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace critsense {

/// Exact multiple of 1/2.
class HalfInteger {
 public:
  constexpr HalfInteger() = default;
  static constexpr HalfInteger from_int(std::int64_t n) { return HalfInteger(2 * n); }
  static constexpr HalfInteger from_halves(std::int64_t halves) { return HalfInteger(halves); }

  constexpr std::int64_t halves() const noexcept { return halves_; }
  constexpr double to_double() const noexcept { return static_cast<double>(halves_) / 2.0; }
  constexpr bool is_integer() const noexcept { return halves_ % 2 == 0; }
  std::string to_string() const;

  constexpr HalfInteger operator+(HalfInteger o) const { return HalfInteger(halves_ + o.halves_); }
  constexpr HalfInteger operator-(HalfInteger o) const { return HalfInteger(halves_ - o.halves_); }
  constexpr HalfInteger operator-() const { return HalfInteger(-halves_); }
  constexpr HalfInteger operator*(std::int64_t k) const { return HalfInteger(halves_ * k); }
  HalfInteger& operator+=(HalfInteger o) {
    halves_ += o.halves_;
    return *this;
  }
  constexpr auto operator<=>(const HalfInteger&) const = default;

 private:
  constexpr explicit HalfInteger(std::int64_t halves) : halves_(halves) {}
  std::int64_t halves_ = 0;
};

inline constexpr HalfInteger kHalf = HalfInteger::from_halves(1);

struct IndexEntry {
  Vec point;
  int index = 0;         // interior degree, or tangential index on the boundary
  HalfInteger weight;    // 1 for interior points, +-1/2 on the boundary
  bool boundary = false;
  HalfInteger contribution() const { return weight * index; }
};

struct BoundaryIndexResult {
  HalfInteger total;
  std::vector<IndexEntry> zeros;
  bool perturbed = false;
  double perturbation = 0;  // delta actually added along the fixed direction
};

struct IndexResult {
  int interior_index = 0;
  HalfInteger boundary_index;
  HalfInteger total;
  HalfInteger euler_target;
  std::vector<IndexEntry> per_point;
  bool boundary_perturbed = false;
  bool pass = false;
};

struct WindingOptions {
  int n_samples = 256;
  double max_residual = 0.1;
};

/// Degree of grad f / |grad f| around the circle of radius eps about z (D = 2).
int winding_index_2d(const ScalarField& f, const Vec& z, double eps, const WindingOptions& options = {});

/// Winding number of a closed planar curve of nonzero vectors given by samples; adaptive
/// refinement through `at(u)` for u in [0, 1].
int winding_number(const std::function<Vec(double)>& at, int n_samples, double max_residual, double floor);

/// (-1)^(number of negative Hessian eigenvalues); Degenerate error for singular Hessians.
int sign_index_nondegenerate(const ScalarField& f, const Vec& z, double degeneracy_tol = 1e-8);

/// Radius for index and probe computations: a quarter of the distance to the nearest
/// other critical point or the boundary, halved until |grad f| >= 1e-6 on the sphere.
double select_index_radius(const ScalarField& f, const Vec& z, const Domain& domain, double nearest_other);

/// Homological index by dimension: 1D sign change, 2D winding, D >= 3 Hessian sign.
int homological_index(const ScalarField& f, const Vec& z, const Domain& domain, double eps = 0.0,
                      double nearest_other = std::numeric_limits<double>::infinity());

struct BoundaryOptions {
  std::size_t n_samples = 2048;
  double perturbation_scale = 1e-6;
  std::uint64_t seed = 0x5eed;
};

/// Homological boundary index: tangential index of each boundary zero weighted by
/// +1/2 (gradient points in) or -1/2 (points out). Intervals, planar boxes and balls,
/// and the ball in three dimensions.
BoundaryIndexResult boundary_index(const ScalarField& f, const Domain& domain, const BoundaryOptions& options = {});

struct AuditOptions {
  DetectorOptions detector;
  BoundaryOptions boundary;
};

IndexResult poincare_hopf_audit(const ScalarField& f, const Domain& domain, const AuditOptions& options = {});

/// Max/Min from the probe ring, Undulation for index 0, Saddle(1 - index) in 2D.
Classification classify_by_index(const ScalarField& f, const Vec& z, int index, double probe_radius);

struct TangencyResult {
  bool transversal = true;
  bool vacuous = false;
  int intersections = 0;
  double min_angle = 0;  // radians, folded into [0, pi/2]
};

/// Transversality of f^{-1}(c) and the sphere of radius delta about p (D <= 2).
TangencyResult tangency_check(const ScalarField& f, const Vec& p, double c, double delta, int n_samples = 1024,
                              double angle_tol = 1e-3);

/// Fill hom_index, morse_index and classification of detected points.
void classify_points(const ScalarField& f, const Domain& domain, std::vector<CriticalPoint>& points,
                     const DetectorOptions& options);

}  // namespace critsense
