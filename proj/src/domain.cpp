#include "critsense/domain.hpp"

#include "critsense/error.hpp"
#include "critsense/random.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>

namespace critsense {

namespace {

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view token = text.substr(start, comma == std::string_view::npos ? text.size() - start : comma - start);
    double value = 0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (token.empty() || ec != std::errc{} || ptr != last) {
      throw Error(ErrorCode::Usage, "malformed number '" + std::string(token) + "' in domain spec");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? text.size() - start : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

Vec to_vec(const std::vector<double>& values) {
  return Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void append_csv(std::ostringstream& out, const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out << ',';
    out << v[i];
  }
}

// Corners of a 2D box in counter-clockwise order.
std::array<Vec, 4> box_corners(const Box& box) {
  return {Vec{{box.lo[0], box.lo[1]}}, Vec{{box.hi[0], box.lo[1]}}, Vec{{box.hi[0], box.hi[1]}},
          Vec{{box.lo[0], box.hi[1]}}};
}

constexpr double kFanShare = 0.025;  // loop parameter share of each corner fan

}  // namespace

Domain Domain::interval(double lo, double hi) {
  if (!(lo < hi)) throw Error(ErrorCode::Usage, "interval requires lo < hi");
  return Domain(Interval{lo, hi});
}

Domain Domain::box(Vec lo, Vec hi) {
  if (lo.size() == 0 || lo.size() != hi.size() || !(lo.array() < hi.array()).all()) {
    throw Error(ErrorCode::Usage, "box requires matching lo < hi per axis");
  }
  return Domain(Box{std::move(lo), std::move(hi)});
}

Domain Domain::ball(Vec center, double radius) {
  if (center.size() == 0 || !(radius > 0)) throw Error(ErrorCode::Usage, "ball requires a center and radius > 0");
  return Domain(Ball{std::move(center), radius});
}

Domain Domain::parse(std::string_view spec) {
  const auto parts = split(spec, ':');
  const std::string_view kind = parts.front();
  if (kind == "interval" && parts.size() == 2) {
    const auto v = parse_numbers(parts[1]);
    if (v.size() != 2) throw Error(ErrorCode::Usage, "interval spec is interval:a,b");
    return interval(v[0], v[1]);
  }
  if (kind == "box" && parts.size() == 3) {
    return box(to_vec(parse_numbers(parts[1])), to_vec(parse_numbers(parts[2])));
  }
  if (kind == "ball" && parts.size() == 3) {
    const auto r = parse_numbers(parts[2]);
    if (r.size() != 1) throw Error(ErrorCode::Usage, "ball spec is ball:cx,cy:r");
    return ball(to_vec(parse_numbers(parts[1])), r[0]);
  }
  throw Error(ErrorCode::Usage, "unrecognized domain spec '" + std::string(spec) +
                                    "' (expected interval:a,b | box:lo1,lo2:hi1,hi2 | ball:cx,cy:r)");
}

std::string Domain::to_string() const {
  std::ostringstream out;
  out.precision(17);
  if (const auto* iv = as_interval()) {
    out << "interval:" << iv->lo << ',' << iv->hi;
  } else if (const auto* bx = as_box()) {
    out << "box:";
    append_csv(out, bx->lo);
    out << ':';
    append_csv(out, bx->hi);
  } else {
    const auto& bl = std::get<Ball>(shape_);
    out << "ball:";
    append_csv(out, bl.center);
    out << ':' << bl.radius;
  }
  return out.str();
}

DomainKind Domain::kind() const noexcept {
  if (as_interval()) return DomainKind::Interval;
  if (as_box()) return DomainKind::Box;
  return DomainKind::Ball;
}

int Domain::dim() const noexcept {
  if (as_interval()) return 1;
  if (const auto* bx = as_box()) return static_cast<int>(bx->lo.size());
  return static_cast<int>(std::get<Ball>(shape_).center.size());
}

Vec Domain::lower() const {
  if (const auto* iv = as_interval()) return Vec::Constant(1, iv->lo);
  if (const auto* bx = as_box()) return bx->lo;
  const auto& bl = std::get<Ball>(shape_);
  return bl.center.array() - bl.radius;
}

Vec Domain::upper() const {
  if (const auto* iv = as_interval()) return Vec::Constant(1, iv->hi);
  if (const auto* bx = as_box()) return bx->hi;
  const auto& bl = std::get<Ball>(shape_);
  return bl.center.array() + bl.radius;
}

double Domain::diameter() const {
  if (const auto* bl = as_ball()) return 2 * bl->radius;
  return (upper() - lower()).norm();
}

bool Domain::contains(const Vec& s, double tol) const { return distance_to_boundary(s) >= -tol; }

double Domain::distance_to_boundary(const Vec& s) const {
  if (const auto* bl = as_ball()) return bl->radius - (s - bl->center).norm();
  const Vec lo = lower();
  const Vec hi = upper();
  const bool inside = ((s.array() >= lo.array()) && (s.array() <= hi.array())).all();
  if (inside) return std::min((s - lo).minCoeff(), (hi - s).minCoeff());
  return -(s - project(s)).norm();
}

Vec Domain::project(const Vec& s) const {
  if (const auto* bl = as_ball()) {
    const Vec offset = s - bl->center;
    const double norm = offset.norm();
    if (norm <= bl->radius) return s;
    return bl->center + offset * (bl->radius / norm);
  }
  return s.cwiseMax(lower()).cwiseMin(upper());
}

Vec Domain::outward_normal(const Vec& p) const {
  if (const auto* bl = as_ball()) return (p - bl->center).normalized();
  const Vec lo = lower();
  const Vec hi = upper();
  Eigen::Index best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  double sign = 1;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (const double g = std::abs(p[i] - lo[i]); g < best_gap) {
      best_gap = g;
      best = i;
      sign = -1;
    }
    if (const double g = std::abs(hi[i] - p[i]); g < best_gap) {
      best_gap = g;
      best = i;
      sign = 1;
    }
  }
  Vec n = Vec::Zero(p.size());
  n[best] = sign;
  return n;
}

BoundarySample Domain::boundary_loop_at(double u) const {
  if (dim() != 2 || as_interval()) throw Error(ErrorCode::Unsupported, "boundary loops exist only for planar domains");
  u -= std::floor(u);
  if (const auto* bl = as_ball()) {
    const double theta = 2 * std::numbers::pi * u;
    const Vec n{{std::cos(theta), std::sin(theta)}};
    return {bl->center + bl->radius * n, Vec{{-n[1], n[0]}}, n};
  }
  const auto& bx = std::get<Box>(shape_);
  const auto corners = box_corners(bx);
  std::array<double, 4> lengths{};
  double perimeter = 0;
  for (int k = 0; k < 4; ++k) {
    lengths[k] = (corners[(k + 1) % 4] - corners[k]).norm();
    perimeter += lengths[k];
  }
  const double edge_share = 1.0 - 4 * kFanShare;
  double cursor = 0;
  for (int k = 0; k < 4; ++k) {
    const double span = edge_share * lengths[k] / perimeter;
    const Vec& a = corners[k];
    const Vec& b = corners[(k + 1) % 4];
    const Vec t = (b - a).normalized();
    const Vec n{{t[1], -t[0]}};
    if (u < cursor + span) {
      const double frac = (u - cursor) / span;
      return {a + frac * (b - a), t, n};
    }
    cursor += span;
    if (u < cursor + kFanShare || k == 3) {
      const double alpha = std::min(1.0, (u - cursor) / kFanShare) * std::numbers::pi / 2;
      const Vec t_next = (corners[(k + 2) % 4] - b).normalized();
      const Vec n_next{{t_next[1], -t_next[0]}};
      const Vec normal = std::cos(alpha) * n + std::sin(alpha) * n_next;
      return {b, Vec{{-normal[1], normal[0]}}, normal};
    }
    cursor += kFanShare;
  }
  return {corners[0], Vec{{1.0, 0.0}}, Vec{{0.0, -1.0}}};
}

std::vector<BoundarySample> Domain::boundary_loop(std::size_t n) const {
  std::vector<BoundarySample> samples;
  samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) samples.push_back(boundary_loop_at(static_cast<double>(i) / static_cast<double>(n)));
  return samples;
}

std::vector<Vec> Domain::boundary_points(std::size_t n) const {
  std::vector<Vec> pts;
  const int d = dim();
  if (d == 1) {
    pts.push_back(lower());
    pts.push_back(upper());
    return pts;
  }
  if (d == 2) {
    for (const auto& s : boundary_loop(n)) pts.push_back(s.point);
    return pts;
  }
  if (const auto* bl = as_ball()) {
    for (const Vec& dir : sphere_directions(d, n)) pts.push_back(bl->center + bl->radius * dir);
    return pts;
  }
  // Box faces in D >= 3: a square-ish lattice on each of the 2D faces.
  const Vec lo = lower();
  const Vec hi = upper();
  const auto per_face = std::max<std::size_t>(4, n / static_cast<std::size_t>(2 * d));
  const int side = std::max(2, static_cast<int>(std::pow(static_cast<double>(per_face), 1.0 / (d - 1))));
  for (int axis = 0; axis < d; ++axis) {
    for (double face : {lo[axis], hi[axis]}) {
      std::vector<int> idx(d - 1, 0);
      while (true) {
        Vec p(d);
        for (int k = 0, j = 0; k < d; ++k) {
          if (k == axis) {
            p[k] = face;
          } else {
            p[k] = lo[k] + (hi[k] - lo[k]) * idx[j] / (side - 1);
            ++j;
          }
        }
        pts.push_back(p);
        int carry = 0;
        while (carry < d - 1 && ++idx[carry] == side) idx[carry++] = 0;
        if (carry == d - 1) break;
      }
    }
  }
  return pts;
}

std::vector<Vec> sphere_directions(int dim, std::size_t n) {
  std::vector<Vec> dirs;
  if (dim == 1) {
    dirs.push_back(Vec::Constant(1, -1.0));
    dirs.push_back(Vec::Constant(1, 1.0));
    return dirs;
  }
  dirs.reserve(n);
  if (dim == 2) {
    for (std::size_t k = 0; k < n; ++k) {
      const double theta = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      dirs.push_back(Vec{{std::cos(theta), std::sin(theta)}});
    }
    return dirs;
  }
  if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < n; ++k) {
      const double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * static_cast<double>(k);
      dirs.push_back(Vec{{rho * std::cos(phi), rho * std::sin(phi), z}});
    }
    return dirs;
  }
  for (std::size_t k = 0; k < n; ++k) {
    Vec v(dim);
    for (int i = 0; i < dim; i += 2) {
      const auto h = splitmix64(k * 1000003ULL + static_cast<std::uint64_t>(i));
      const double u1 = uniform_open(h);
      const double u2 = uniform_open(splitmix64(h));
      const double r = std::sqrt(-2 * std::log(u1));
      v[i] = r * std::cos(2 * std::numbers::pi * u2);
      if (i + 1 < dim) v[i + 1] = r * std::sin(2 * std::numbers::pi * u2);
    }
    dirs.push_back(v.normalized());
  }
  return dirs;
}

StructuredGrid::StructuredGrid(const Domain& domain, int res)
    : dim_(domain.dim()), res_(res), lo_(domain.lower()), spacing_((domain.upper() - domain.lower()) / res) {
  if (res < 1) throw Error(ErrorCode::Usage, "grid resolution must be positive");
  vertex_count_ = 1;
  cell_count_ = 1;
  for (int i = 0; i < dim_; ++i) {
    vertex_count_ *= static_cast<std::size_t>(res_ + 1);
    cell_count_ *= static_cast<std::size_t>(res_);
  }
  inside_.resize(vertex_count_);
  const double tol = 1e-12 * domain.diameter();
  for (std::size_t i = 0; i < vertex_count_; ++i) inside_[i] = domain.contains(vertex(i), tol);
  std::vector<int> offset(dim_, -1);
  while (true) {
    std::ptrdiff_t flat = 0;
    bool center = true;
    for (int k = dim_ - 1; k >= 0; --k) {
      flat = flat * (res_ + 1) + offset[k];
      center = center && offset[k] == 0;
    }
    if (!center) {
      offsets_.push_back(flat);
      offset_steps_.insert(offset_steps_.end(), offset.begin(), offset.end());
    }
    int k = 0;
    while (k < dim_ && ++offset[k] == 2) offset[k++] = -1;
    if (k == dim_) break;
  }
}

bool StructuredGrid::lattice_interior(std::size_t index) const {
  for (int k = 0; k < dim_; ++k) {
    const auto i = static_cast<int>(index % static_cast<std::size_t>(res_ + 1));
    if (i == 0 || i == res_) return false;
    index /= static_cast<std::size_t>(res_ + 1);
  }
  return true;
}

bool StructuredGrid::offset_valid(std::size_t index, std::size_t offset) const {
  for (int k = 0; k < dim_; ++k) {
    const int i = static_cast<int>(index % static_cast<std::size_t>(res_ + 1)) + offset_steps_[offset * dim_ + k];
    if (i < 0 || i > res_) return false;
    index /= static_cast<std::size_t>(res_ + 1);
  }
  return true;
}

Vec StructuredGrid::vertex(std::size_t index) const {
  Vec p(dim_);
  for (int k = 0; k < dim_; ++k) {
    const auto i = static_cast<int>(index % static_cast<std::size_t>(res_ + 1));
    index /= static_cast<std::size_t>(res_ + 1);
    p[k] = lo_[k] + spacing_[k] * i;
  }
  return p;
}

std::vector<int> StructuredGrid::multi_index(std::size_t index) const {
  std::vector<int> m(dim_);
  for (int k = 0; k < dim_; ++k) {
    m[k] = static_cast<int>(index % static_cast<std::size_t>(res_ + 1));
    index /= static_cast<std::size_t>(res_ + 1);
  }
  return m;
}

std::size_t StructuredGrid::flat_index(const std::vector<int>& multi) const {
  std::size_t index = 0;
  for (int k = dim_ - 1; k >= 0; --k) index = index * static_cast<std::size_t>(res_ + 1) + static_cast<std::size_t>(multi[k]);
  return index;
}

bool StructuredGrid::on_grid_boundary(std::size_t index) const {
  auto m = multi_index(index);
  for (int k = 0; k < dim_; ++k) {
    if (m[k] == 0 || m[k] == res_) return true;
    for (int step : {-1, 1}) {
      m[k] += step;
      const bool out = !inside_[flat_index(m)];
      m[k] -= step;
      if (out) return true;
    }
  }
  return false;
}

std::vector<std::size_t> StructuredGrid::neighbors(std::size_t index) const {
  const auto base = multi_index(index);
  std::vector<std::size_t> out;
  std::vector<int> offset(dim_, -1);
  while (true) {
    bool center = true;
    bool valid = true;
    std::vector<int> m = base;
    for (int k = 0; k < dim_; ++k) {
      center = center && offset[k] == 0;
      m[k] += offset[k];
      valid = valid && m[k] >= 0 && m[k] <= res_;
    }
    if (!center && valid) {
      const std::size_t flat = flat_index(m);
      if (inside_[flat]) out.push_back(flat);
    }
    int k = 0;
    while (k < dim_ && ++offset[k] == 2) offset[k++] = -1;
    if (k == dim_) break;
  }
  return out;
}

std::vector<std::size_t> StructuredGrid::cell_corners(std::size_t cell) const {
  std::vector<int> base(dim_);
  for (int k = 0; k < dim_; ++k) {
    base[k] = static_cast<int>(cell % static_cast<std::size_t>(res_));
    cell /= static_cast<std::size_t>(res_);
  }
  std::vector<std::size_t> corners;
  corners.reserve(std::size_t{1} << dim_);
  for (unsigned mask = 0; mask < (1u << dim_); ++mask) {
    std::vector<int> m = base;
    for (int k = 0; k < dim_; ++k) m[k] += (mask >> k) & 1u;
    corners.push_back(flat_index(m));
  }
  return corners;
}

Vec StructuredGrid::cell_center(std::size_t cell) const {
  Vec p(dim_);
  for (int k = 0; k < dim_; ++k) {
    const auto i = static_cast<int>(cell % static_cast<std::size_t>(res_));
    cell /= static_cast<std::size_t>(res_);
    p[k] = lo_[k] + spacing_[k] * (i + 0.5);
  }
  return p;
}

}  // namespace critsense
