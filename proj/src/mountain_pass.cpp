#include "critsense/mountain_pass.hpp"

#include "critsense/critpoint.hpp"
#include "critsense/error.hpp"
#include "critsense/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace critsense {

std::string_view to_string(PassKind kind) {
  return kind == PassKind::InteriorCritical ? "InteriorCritical" : "BoundaryTangency";
}

std::vector<Vec> densify(const std::vector<Vec>& path, int samples_per_segment) {
  std::vector<Vec> dense;
  const int m = std::max(1, samples_per_segment);
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    for (int k = 0; k < m; ++k) dense.push_back(path[i] + (path[i + 1] - path[i]) * (static_cast<double>(k) / m));
  dense.push_back(path.back());
  return dense;
}

namespace {

// Respace interior knots to equal arc length along the polyline.
std::vector<Vec> respace(const std::vector<Vec>& path) {
  const std::size_t n = path.size();
  std::vector<double> arc(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) arc[i] = arc[i - 1] + (path[i] - path[i - 1]).norm();
  if (!(arc.back() > 0)) return path;
  std::vector<Vec> out(n);
  out.front() = path.front();
  out.back() = path.back();
  std::size_t seg = 0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double target = arc.back() * static_cast<double>(k) / static_cast<double>(n - 1);
    while (seg + 2 < n && arc[seg + 1] < target) ++seg;
    const double len = arc[seg + 1] - arc[seg];
    const double w = len > 0 ? (target - arc[seg]) / len : 0.0;
    out[k] = path[seg] + w * (path[seg + 1] - path[seg]);
  }
  return out;
}

struct PathMin {
  double value;
  Vec point;
  bool flat;
};

PathMin path_min(const ScalarField& f, const std::vector<Vec>& path, int samples) {
  PathMin best{std::numeric_limits<double>::infinity(), path.front(), true};
  double first = std::numeric_limits<double>::quiet_NaN();
  for (const Vec& s : densify(path, samples)) {
    const double v = f.value(s);
    if (std::isnan(first)) first = v;
    if (v != first) best.flat = false;
    if (v < best.value) best = {v, s, best.flat};
  }
  return best;
}

Vec project_checked(const Domain& domain, const Vec& s) {
  const Vec p = domain.project(s);
  if (!domain.contains(p, 1e-12 * (1 + domain.diameter())))
    throw Error(ErrorCode::Convexity, "projection left the domain");
  return p;
}

std::vector<Vec> initial_path(const Domain& domain, const Vec& p1, const Vec& p2, int n_knots, double bow) {
  std::vector<Vec> path;
  const Vec chord = p2 - p1;
  Vec normal = Vec::Zero(p1.size());
  if (p1.size() >= 2 && chord.norm() > 0) {
    normal[0] = -chord[1];
    normal[1] = chord[0];
  }
  for (int k = 0; k <= n_knots + 1; ++k) {
    const double t = static_cast<double>(k) / (n_knots + 1);
    Vec s = p1 + t * chord + bow * 4 * t * (1 - t) * normal;
    path.push_back(k == 0 || k == n_knots + 1 ? s : project_checked(domain, s));
  }
  return path;
}

PathResult ascend(const ScalarField& f, const Domain& domain, std::vector<Vec> path, const PathOptions& options) {
  PathResult out;
  const int samples = options.samples_per_segment;
  auto current = path_min(f, path, samples);
  out.history.push_back(current.value);
  double eta = (options.step > 0 ? options.step : 0.05) * domain.diameter();
  const double eta_floor = 1e-13 * domain.diameter();
  for (int it = 0; it < options.iters && eta > eta_floor; ++it) {
    // Ascent direction normal to the path, scaled so the largest knot move is eta.
    std::vector<Vec> dir(path.size(), Vec::Zero(path.front().size()));
    double largest = 0;
    for (std::size_t k = 1; k + 1 < path.size(); ++k) {
      Vec tangent = path[k + 1] - path[k - 1];
      if (tangent.norm() > 0) tangent.normalize();
      const Vec g = f.gradient(path[k]);
      dir[k] = g - g.dot(tangent) * tangent;
      largest = std::max(largest, dir[k].norm());
    }
    if (!(largest > 0)) break;
    std::vector<Vec> trial = path;
    for (std::size_t k = 1; k + 1 < path.size(); ++k)
      trial[k] = project_checked(domain, path[k] + (eta / largest) * dir[k]);
    trial = respace(trial);
    for (std::size_t k = 1; k + 1 < trial.size(); ++k) trial[k] = project_checked(domain, trial[k]);
    const auto next = path_min(f, trial, samples);
    if (next.value >= current.value) {
      path = std::move(trial);
      current = next;
      out.history.push_back(current.value);
      eta *= 1.2;
    } else {
      eta *= 0.5;
    }
  }
  for (std::size_t i = 1; i < out.history.size(); ++i)
    if (out.history[i] < out.history[i - 1]) out.monotone = false;
  out.path = std::move(path);
  out.value = current.value;
  out.argmin = current.point;
  out.degenerate = current.flat;
  return out;
}

}  // namespace

PathResult minimax_over_paths(const ScalarField& f, const Domain& domain, const Vec& p1, const Vec& p2,
                              const PathOptions& options) {
  if (options.n_knots < 1) throw Error(ErrorCode::Usage, "n_knots must be at least 1");
  return ascend(f, domain, initial_path(domain, p1, p2, options.n_knots, 0.0), options);
}

namespace {

bool strict_local_max(const ScalarField& f, const Vec& p, double r) {
  const double center = f.value(p);
  for (const Vec& u : sphere_directions(f.dim(), 64))
    if (!(f.value(p + r * u) < center)) return false;
  return true;
}

// Zero of the tangential gradient on a planar boundary loop near `near`.
Vec boundary_tangency_2d(const ScalarField& f, const Domain& domain, const Vec& near, double& tangential,
                         double& normal) {
  const std::size_t n = 4096;
  const auto loop = domain.boundary_loop(n);
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < n; ++i)
    if ((loop[i].point - near).norm() < (loop[nearest].point - near).norm()) nearest = i;
  auto par = [&](double u) {
    const auto b = domain.boundary_loop_at(u - std::floor(u));
    return f.gradient(b.point).dot(b.tangent);
  };
  double best_u = static_cast<double>(nearest) / n;
  double best_dist = std::numeric_limits<double>::infinity();
  const long window = 256;
  for (long k = -window; k < window; ++k) {
    const double ua = static_cast<double>(static_cast<long>(nearest) + k) / n;
    const double ub = ua + 1.0 / n;
    const double va = par(ua), vb = par(ub);
    double u = ua;
    if (va != 0) {
      if ((va > 0) == (vb > 0) || vb == 0) continue;
      double lo = ua, hi = ub;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((par(mid) > 0) == (va > 0)) lo = mid;
        else hi = mid;
      }
      u = 0.5 * (lo + hi);
    }
    const double d = (domain.boundary_loop_at(u - std::floor(u)).point - near).norm();
    if (d < best_dist) {
      best_dist = d;
      best_u = u;
    }
  }
  const auto b = domain.boundary_loop_at(best_u - std::floor(best_u));
  const Vec g = f.gradient(b.point);
  tangential = std::abs(g.dot(b.tangent));
  normal = g.dot(b.normal);
  return b.point;
}

PassResult certify(const ScalarField& f, const Domain& domain, const PathResult& path, const PassOptions& options) {
  PassResult out;
  out.path = path.path;
  out.history = path.history;
  const double diam = domain.diameter();
  try {
    const Vec z = refine_newton(f, path.argmin, 1e-3 * options.pass_tol, 100);
    if ((z - path.argmin).norm() < 0.05 * diam && domain.distance_to_boundary(z) > options.boundary_tol) {
      out.p3 = z;
      out.kind = PassKind::InteriorCritical;
      out.certificate = f.gradient(z).norm();
      out.certified = out.certificate <= options.pass_tol;
      out.c = f.value(z);
      return out;
    }
  } catch (const NoConvergence&) {
  }
  out.kind = PassKind::BoundaryTangency;
  if (domain.dim() == 1) {
    const auto* iv = domain.as_interval();
    const double x = std::abs(path.argmin[0] - iv->lo) < std::abs(path.argmin[0] - iv->hi) ? iv->lo : iv->hi;
    out.p3 = Vec::Constant(1, x);
    out.certificate = 0;
    out.normal_component = f.gradient(out.p3)[0] * (x == iv->lo ? -1.0 : 1.0);
  } else if (domain.dim() == 2) {
    out.p3 = boundary_tangency_2d(f, domain, path.argmin, out.certificate, out.normal_component);
  } else {
    out.p3 = domain.project(path.argmin);
    const Vec n = domain.outward_normal(out.p3);
    const Vec g = f.gradient(out.p3);
    out.normal_component = g.dot(n);
    out.certificate = (g - out.normal_component * n).norm();
  }
  out.c = f.value(out.p3);
  out.certified = out.certificate <= options.pass_tol &&
                  std::abs(domain.distance_to_boundary(out.p3)) <= options.boundary_tol * (1 + diam);
  return out;
}

}  // namespace

PassResult mountain_pass_point(const ScalarField& f, const Domain& domain, Vec p1, Vec p2,
                               const PassOptions& options) {
  if (f.dim() != domain.dim()) throw Error(ErrorCode::Usage, "field and domain dimensions differ");
  if (f.value(p1) > f.value(p2)) std::swap(p1, p2);
  const double probe = options.probe_radius * domain.diameter();
  if (!domain.contains(p1) || !domain.contains(p2))
    throw Error(ErrorCode::Precondition, "p1 and p2 must lie in the domain");
  if ((p1 - p2).norm() <= probe || !strict_local_max(f, p1, probe) || !strict_local_max(f, p2, probe))
    throw Error(ErrorCode::Precondition, "p1 and p2 must be two distinct strict local maxima");

  // Straight and bowed starts run independently; the highest pass wins.
  std::vector<double> bows = {0.0};
  if (domain.dim() >= 2) bows = {0.0, 0.35, -0.35};
  std::vector<PathResult> paths(bows.size());
  parallel_for(bows.size(), [&](std::size_t i) {
    paths[i] = ascend(f, domain, initial_path(domain, p1, p2, options.path.n_knots, bows[i]), options.path);
  });
  std::vector<PassResult> results;
  for (const auto& path : paths) results.push_back(certify(f, domain, path, options));
  auto better = [](const PassResult& a, const PassResult& b) {
    if (a.certified != b.certified) return a.certified;
    if (a.c != b.c) return a.c > b.c;
    return lexicographic_less(a.p3, b.p3);
  };
  PassResult best = *std::min_element(results.begin(), results.end(), better);
  best.f_p1 = f.value(p1);
  best.f_p2 = f.value(p2);
  if (!(best.c < best.f_p1))
    throw Error(ErrorCode::NoSeparation, "no path dips below f(p1); the maxima are not separated");
  return best;
}

}  // namespace critsense
