#pragma once

#include "critsense/linalg.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace critsense {

struct Interval {
  double lo;
  double hi;
};

struct Box {
  Vec lo;
  Vec hi;
};

struct Ball {
  Vec center;
  double radius;
};

/// A point on a closed planar boundary loop with its counter-clockwise unit tangent
/// and outward unit normal. Box corners are traversed as fans: the point stays at the
/// corner while the normal sweeps from one face normal to the next, which is the
/// zero-radius limit of a rounded corner.
struct BoundarySample {
  Vec point;
  Vec tangent;
  Vec normal;
};

enum class DomainKind { Interval, Box, Ball };

/// Compact convex region: an interval, an axis-aligned box or a Euclidean ball.
class Domain {
 public:
  static Domain interval(double lo, double hi);
  static Domain box(Vec lo, Vec hi);
  static Domain ball(Vec center, double radius);

  /// `interval:a,b` | `box:lo1,lo2:hi1,hi2` | `ball:cx,cy:r`
  static Domain parse(std::string_view spec);
  std::string to_string() const;

  DomainKind kind() const noexcept;
  int dim() const noexcept;
  int euler_characteristic() const noexcept { return 1; }

  const Interval* as_interval() const noexcept { return std::get_if<Interval>(&shape_); }
  const Box* as_box() const noexcept { return std::get_if<Box>(&shape_); }
  const Ball* as_ball() const noexcept { return std::get_if<Ball>(&shape_); }

  /// Axis-aligned bounding box.
  Vec lower() const;
  Vec upper() const;
  double diameter() const;

  bool contains(const Vec& s, double tol = 0.0) const;
  /// Signed distance to the boundary, positive inside.
  double distance_to_boundary(const Vec& s) const;
  /// Euclidean projection onto the domain.
  Vec project(const Vec& s) const;
  /// Outward unit normal at (or nearest to) a boundary point; undefined at box corners.
  Vec outward_normal(const Vec& boundary_point) const;

  /// Planar boundary loop sampled at parameter u in [0, 1). Requires dim() == 2.
  BoundarySample boundary_loop_at(double u) const;
  std::vector<BoundarySample> boundary_loop(std::size_t n) const;

  /// Points covering the boundary: endpoints (1D), a loop (2D), a Fibonacci sphere (3D ball)
  /// or per-face grids (boxes, D >= 3).
  std::vector<Vec> boundary_points(std::size_t n) const;

 private:
  explicit Domain(std::variant<Interval, Box, Ball> shape) : shape_(std::move(shape)) {}

  std::variant<Interval, Box, Ball> shape_;
};

/// Unit vectors spread over S^{D-1}: two points for D = 1, a circle for D = 2 and a
/// Fibonacci lattice for D = 3. Deterministic.
std::vector<Vec> sphere_directions(int dim, std::size_t n);

/// Regular vertex lattice over the bounding box of a domain with `res` cells per axis.
class StructuredGrid {
 public:
  StructuredGrid(const Domain& domain, int res);

  int dim() const noexcept { return dim_; }
  int res() const noexcept { return res_; }
  std::size_t vertex_count() const noexcept { return vertex_count_; }
  const Vec& spacing() const noexcept { return spacing_; }
  double cell_diagonal() const noexcept { return spacing_.norm(); }
  double max_spacing() const noexcept { return spacing_.maxCoeff(); }

  Vec vertex(std::size_t index) const;
  std::vector<int> multi_index(std::size_t index) const;
  std::size_t flat_index(const std::vector<int>& multi) const;
  bool inside(std::size_t index) const { return inside_[index]; }
  /// Vertex lies on the outer layer of the lattice or has an out-of-domain neighbor.
  bool on_grid_boundary(std::size_t index) const;

  /// Full (3^D - 1)-neighborhood, restricted to in-domain vertices.
  std::vector<std::size_t> neighbors(std::size_t index) const;

  /// Same neighborhood as neighbors(), visited without allocating.
  template <class Fn>
  void for_each_neighbor(std::size_t index, Fn&& fn) const {
    const bool interior = lattice_interior(index);
    for (std::size_t o = 0; o < offsets_.size(); ++o) {
      if (!interior && !offset_valid(index, o)) continue;
      const auto j = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(index) + offsets_[o]);
      if (inside_[j]) fn(j);
    }
  }

  /// Number of cells (res^D) and the 2^D corner vertices of a cell given by its
  /// lower-corner multi-index.
  std::size_t cell_count() const noexcept { return cell_count_; }
  std::vector<std::size_t> cell_corners(std::size_t cell) const;
  Vec cell_center(std::size_t cell) const;

 private:
  int dim_;
  int res_;
  Vec lo_;
  Vec spacing_;
  std::size_t vertex_count_;
  std::size_t cell_count_;
  std::vector<bool> inside_;
  std::vector<std::ptrdiff_t> offsets_;
  std::vector<int> offset_steps_;  // offsets_.size() x dim_

  bool lattice_interior(std::size_t index) const;
  bool offset_valid(std::size_t index, std::size_t offset) const;
};

}  // namespace critsense
