#include "critsense/critpoint.hpp"

#include "critsense/error.hpp"
#include "critsense/hom_index.hpp"
#include "critsense/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace critsense {

std::string_view to_string(PointKind kind) {
  switch (kind) {
    case PointKind::Max: return "Max";
    case PointKind::Min: return "Min";
    case PointKind::Saddle: return "Saddle";
    case PointKind::Undulation: return "Undulation";
    case PointKind::Unclassified: return "Unclassified";
  }
  return "?";
}

std::string Classification::to_string() const {
  if (kind == PointKind::Saddle && prongs > 0) return "Saddle(" + std::to_string(prongs) + ")";
  return std::string(critsense::to_string(kind));
}

Vec refine_newton(const ScalarField& f, const Vec& s0, double tol, int max_iter) {
  const auto d = s0.size();
  Vec s = s0;
  Vec g = f.gradient(s);
  double gn = g.norm();
  Vec best = s;
  double best_norm = gn;
  for (int it = 0; it < max_iter && std::isfinite(gn); ++it) {
    if (gn <= tol) return s;
    const Mat h = f.hessian(s);
    const double hn = spectral_norm(h);
    Vec step;
    if (h.allFinite() && hn > 0 && std::abs(h.determinant()) > 1e-10 * std::pow(hn, static_cast<double>(d))) {
      step = -h.fullPivLu().solve(g);
    } else if (h.allFinite() && hn > 0) {
      // Levenberg-Marquardt on |grad f|^2
      const Mat normal = h.transpose() * h + 1e-8 * hn * hn * Mat::Identity(d, d);
      step = -normal.ldlt().solve(h.transpose() * g);
    } else {
      step = -g;
    }
    bool accepted = false;
    double alpha = 1.0;
    for (int k = 0; k < 60; ++k, alpha *= 0.5) {
      const Vec trial = s + alpha * step;
      const Vec tg = f.gradient(trial);
      const double tn = tg.norm();
      if (std::isfinite(tn) && tn < gn) {
        s = trial;
        g = tg;
        gn = tn;
        accepted = true;
        break;
      }
    }
    if (gn < best_norm) {
      best = s;
      best_norm = gn;
    }
    if (!accepted) break;
  }
  if (gn <= tol) return s;
  std::ostringstream msg;
  msg.precision(3);
  msg << "Newton refinement stalled with |grad f| = " << best_norm << " > " << tol;
  throw NoConvergence(msg.str(), best, best_norm);
}

std::vector<double> nearest_neighbor_distances(const std::vector<Vec>& points) {
  const std::size_t n = points.size();
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a][0] < points[b][0]; });
  // Walk outwards in first-coordinate order until the x-gap alone exceeds the best distance.
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t i = order[a];
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::size_t j = order[b];
      if (points[j][0] - points[i][0] >= nearest[i]) break;
      nearest[i] = std::min(nearest[i], (points[i] - points[j]).norm());
    }
    for (std::size_t b = a; b-- > 0;) {
      const std::size_t j = order[b];
      if (points[i][0] - points[j][0] >= nearest[i]) break;
      nearest[i] = std::min(nearest[i], (points[i] - points[j]).norm());
    }
  }
  return nearest;
}

double resolution(const std::vector<Vec>& points) {
  const auto nearest = nearest_neighbor_distances(points);
  double best = std::numeric_limits<double>::infinity();
  for (double d : nearest) best = std::min(best, d);
  return best;
}

double resolution(const std::vector<CriticalPoint>& points) {
  std::vector<Vec> locations;
  locations.reserve(points.size());
  for (const auto& p : points) locations.push_back(p.location);
  return resolution(locations);
}

double boundary_min_gradient(const ScalarField& f, const Domain& domain, std::size_t n_samples) {
  if (n_samples < 16) throw Error(ErrorCode::Usage, "boundary_min_gradient needs at least 16 samples");
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& p : domain.boundary_points(n_samples)) best = std::min(best, f.gradient(p).norm());
  return best;
}

namespace {

// Buckets of side `cell` for radius queries with radius <= cell.
class SpatialHash {
 public:
  explicit SpatialHash(double cell) : cell_(cell) {}

  void insert(const Vec& p, std::size_t id) { buckets_[key(p)].push_back(id); }

  template <typename Visit>
  void visit_near(const Vec& p, Visit&& visit) const {
    const auto base = key(p);
    const auto d = base.size();
    std::vector<long long> probe(d);
    const std::size_t combos = static_cast<std::size_t>(std::pow(3.0, static_cast<double>(d)));
    for (std::size_t c = 0; c < combos; ++c) {
      std::size_t rest = c;
      for (std::size_t i = 0; i < d; ++i) {
        probe[i] = base[i] + static_cast<long long>(rest % 3) - 1;
        rest /= 3;
      }
      if (auto it = buckets_.find(probe); it != buckets_.end())
        for (std::size_t id : it->second) visit(id);
    }
  }

 private:
  std::vector<long long> key(const Vec& p) const {
    std::vector<long long> k(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) k[i] = static_cast<long long>(std::floor(p[i] / cell_));
    return k;
  }

  double cell_;
  std::map<std::vector<long long>, std::vector<std::size_t>> buckets_;
};

struct Candidate {
  Vec location;
  double grad_norm;
};

// Greedy: lowest gradient norm first, each accepted point claims a ball of `radius`.
std::vector<Candidate> dedupe(std::vector<Candidate> candidates, double radius) {
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.grad_norm != b.grad_norm) return a.grad_norm < b.grad_norm;
    return lexicographic_less(a.location, b.location);
  });
  std::vector<Candidate> kept;
  SpatialHash hash(std::max(radius, 1e-300));
  for (auto& c : candidates) {
    bool clash = false;
    hash.visit_near(c.location, [&](std::size_t id) {
      if ((kept[id].location - c.location).norm() < radius) clash = true;
    });
    if (clash) continue;
    hash.insert(c.location, kept.size());
    kept.push_back(std::move(c));
  }
  return kept;
}

struct Seed {
  Vec point;
  bool sign_change;
};

std::vector<Seed> grid_seeds(const ScalarField& f, const Domain& domain, const StructuredGrid& grid) {
  const int d = grid.dim();
  const std::size_t nv = grid.vertex_count();
  std::vector<double> grads(nv * static_cast<std::size_t>(d));
  std::vector<double> norms(nv);
  const std::size_t chunk = 4096;
  parallel_for((nv + chunk - 1) / chunk, [&](std::size_t c) {
    const std::size_t end = std::min(nv, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) {
      const Vec g = f.gradient(grid.vertex(i));
      for (int k = 0; k < d; ++k) grads[i * d + k] = g[k];
      norms[i] = g.norm();
    }
  });

  std::vector<Seed> seeds;
  const double reach = grid.cell_diagonal();
  for (std::size_t cell = 0; cell < grid.cell_count(); ++cell) {
    const auto corners = grid.cell_corners(cell);
    bool any_inside = false;
    for (auto v : corners) any_inside = any_inside || grid.inside(v);
    if (!any_inside && !domain.contains(grid.cell_center(cell), reach)) continue;
    bool straddles = true;
    for (int k = 0; k < d && straddles; ++k) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (auto v : corners) {
        lo = std::min(lo, grads[v * d + k]);
        hi = std::max(hi, grads[v * d + k]);
      }
      straddles = lo <= 0 && hi >= 0;
    }
    if (straddles) seeds.push_back({grid.cell_center(cell), true});
  }

  // Grid minima of |grad f| catch tangential zeros that never change sign.
  for (std::size_t i = 0; i < nv; ++i) {
    if (!grid.inside(i)) continue;
    double nmax = 0;
    bool is_min = true;
    bool any = false;
    grid.for_each_neighbor(i, [&](std::size_t j) {
      any = true;
      if (norms[j] < norms[i]) is_min = false;
      nmax = std::max(nmax, norms[j]);
    });
    if (!any) continue;
    if (is_min && norms[i] < 0.5 * nmax) seeds.push_back({grid.vertex(i), false});
  }
  return seeds;
}

}  // namespace

DetectionResult find_critical_points(const ScalarField& f, const Domain& domain, const DetectorOptions& options) {
  if (f.dim() != domain.dim()) throw Error(ErrorCode::Usage, "field and domain dimensions differ");
  if (options.grid_res < 8) throw Error(ErrorCode::Usage, "grid_res must be at least 8");
  const StructuredGrid grid(domain, options.grid_res);
  const auto seeds = grid_seeds(f, domain, grid);

  struct Outcome {
    bool ok = false;
    Vec point;
    double grad_norm = 0;
  };
  std::vector<Outcome> outcomes(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    try {
      const Vec s = refine_newton(f, seeds[i].point, options.newton_tol, options.max_iter);
      outcomes[i] = {true, s, f.gradient(s).norm()};
    } catch (const NoConvergence& e) {
      outcomes[i] = {false, e.best(), e.best_grad_norm()};
    }
  });

  DetectionResult result;
  result.dedupe_radius = options.dedupe_cells * grid.cell_diagonal();
  result.boundary_margin = options.boundary_margin_cells * grid.max_spacing();
  const double outside_tol = 1e-9 * (1 + domain.diameter());

  std::vector<Candidate> found;
  for (const auto& o : outcomes)
    if (o.ok && domain.contains(o.point, outside_tol)) found.push_back({o.point, o.grad_norm});
  found = dedupe(std::move(found), result.dedupe_radius);

  // A failed sign-change seed is only suspicious when it got close to a zero.
  double grad_scale = 0;
  for (const auto& p : domain.boundary_points(256)) grad_scale = std::max(grad_scale, f.gradient(p).norm());
  grad_scale = std::max(grad_scale, 1e-300);
  std::vector<Candidate> failed;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto& o = outcomes[i];
    if (o.ok || !seeds[i].sign_change) continue;
    if (o.grad_norm > 1e-3 * grad_scale || !domain.contains(o.point, outside_tol)) continue;
    bool covered = false;
    for (const auto& c : found) covered = covered || (c.location - o.point).norm() < result.dedupe_radius;
    if (!covered) failed.push_back({o.point, o.grad_norm});
  }
  for (auto& c : dedupe(std::move(failed), result.dedupe_radius)) result.unresolved.push_back(c.location);
  std::sort(result.unresolved.begin(), result.unresolved.end(), lexicographic_less);

  std::sort(found.begin(), found.end(),
            [](const Candidate& a, const Candidate& b) { return lexicographic_less(a.location, b.location); });
  for (auto& c : found) {
    CriticalPoint p;
    p.location = c.location;
    p.value = f.value(c.location);
    p.grad_norm = c.grad_norm;
    p.eigenvalues = symmetric_eigenvalues(f.hessian(c.location));
    p.near_boundary = domain.distance_to_boundary(c.location) < result.boundary_margin;
    result.points.push_back(std::move(p));
  }
  if (options.classify) classify_points(f, domain, result.points, options);
  return result;
}

ImproperCounts improper_extrema(const ScalarField& f, const Domain& domain, int grid_res) {
  const StructuredGrid grid(domain, grid_res);
  const std::size_t nv = grid.vertex_count();
  std::vector<double> values(nv, std::numeric_limits<double>::quiet_NaN());
  const std::size_t chunk = 4096;
  parallel_for((nv + chunk - 1) / chunk, [&](std::size_t c) {
    const std::size_t end = std::min(nv, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i)
      if (grid.inside(i)) values[i] = f.value(grid.vertex(i));
  });
  auto same = [&](std::size_t a, std::size_t b) {
    return std::abs(values[a] - values[b]) <= 1e-13 * (1 + std::max(std::abs(values[a]), std::abs(values[b])));
  };

  // Plateau components by union-find over neighbor pairs with equal values.
  std::vector<std::size_t> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < nv; ++i) {
    if (!grid.inside(i)) continue;
    grid.for_each_neighbor(i, [&](std::size_t j) {
      if (j > i && same(i, j)) parent[find(i)] = find(j);
    });
  }

  struct ComponentState {
    bool seen = false;
    bool has_interior = false;
    bool is_max = true;
    bool is_min = true;
    int size = 0;
  };
  std::vector<ComponentState> components(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    if (!grid.inside(i)) continue;
    const std::size_t root = find(i);
    auto& st = components[root];
    st.seen = true;
    ++st.size;
    if (!st.is_max && !st.is_min) continue;
    bool interior = !grid.on_grid_boundary(i);
    grid.for_each_neighbor(i, [&](std::size_t j) {
      if (find(j) == root) return;
      if (!(values[j] < values[i])) st.is_max = false;
      if (!(values[j] > values[i])) st.is_min = false;
    });
    st.has_interior = st.has_interior || interior;
  }
  // Single-vertex extrema must also survive a ring of off-lattice probes; a lattice stencil
  // straddling a thin descent valley of an anisotropic saddle looks like an extremum.
  const auto ring = sphere_directions(grid.dim(), 64);
  const double probe = grid.max_spacing();
  for (std::size_t i = 0; i < nv; ++i) {
    if (!grid.inside(i) || find(i) != i) continue;
    auto& st = components[i];
    if (st.size != 1 || !st.has_interior || !(st.is_max || st.is_min)) continue;
    const Vec p = grid.vertex(i);
    for (const Vec& u : ring) {
      const Vec q = p + probe * u;
      if (!domain.contains(q)) continue;
      const double v = f.value(q);
      if (!(v < values[i])) st.is_max = false;
      if (!(v > values[i])) st.is_min = false;
    }
    if (!st.is_max && !st.is_min) continue;
    // A thin ascent wedge can still slip between the probes (Peano-type points). An isolated
    // local max has index (-1)^D and a local min +1; any other index rules the candidate out.
    try {
      const Vec z = refine_newton(f, p, 1e-10, 50);
      if ((z - p).norm() > 2 * probe || domain.distance_to_boundary(z) <= probe) continue;
      const int index = homological_index(f, z, domain, 0.5 * probe);
      if (index != (grid.dim() % 2 == 0 ? 1 : -1)) st.is_max = false;
      if (index != 1) st.is_min = false;
    } catch (const Error&) {
    }
  }

  ImproperCounts counts;
  for (const auto& st : components) {
    if (!st.seen || !st.has_interior) continue;
    if (st.is_max) ++counts.maxima;
    if (st.is_min) ++counts.minima;
  }
  return counts;
}

namespace {

void check_margin(const Domain& domain, const Vec& s, double h) {
  if (!(h > 0)) throw Error(ErrorCode::Usage, "finite-difference step must be positive");
  if (domain.distance_to_boundary(s) < 2 * h)
    throw Error(ErrorCode::Margin, "point is closer than 2h to the boundary");
}

}  // namespace

Vec finite_diff_gradient(const ScalarField& f, const Domain& domain, const Vec& s, double h) {
  check_margin(domain, s, h);
  return central_gradient<double>(f.value_fn(), s, h);
}

Mat finite_diff_hessian(const ScalarField& f, const Domain& domain, const Vec& s, double h) {
  check_margin(domain, s, h);
  return central_hessian<double>(f.value_fn(), s, h);
}

}  // namespace critsense
