#include "critsense/hom_index.hpp"

#include "critsense/error.hpp"
#include "critsense/parallel.hpp"
#include "critsense/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace critsense {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

int sgn(double x) { return (x > 0) - (x < 0); }

double cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

std::vector<Vec> ring_directions(int dim) {
  switch (dim) {
    case 1: return sphere_directions(1, 2);
    case 2: return sphere_directions(2, 64);
    case 3: return sphere_directions(3, 128);
    default: return sphere_directions(dim, 256);
  }
}

double min_gradient_on_sphere(const ScalarField& f, const Vec& z, double r) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& u : ring_directions(f.dim())) best = std::min(best, f.gradient(z + r * u).norm());
  return best;
}

}  // namespace

std::string HalfInteger::to_string() const {
  if (halves_ % 2 == 0) return std::to_string(halves_ / 2);
  return std::to_string(halves_) + "/2";
}

int winding_number(const std::function<Vec(double)>& at, int n_samples, double max_residual, double floor) {
  if (n_samples < 8) throw Error(ErrorCode::Usage, "winding number needs at least 8 samples");
  std::vector<Vec> samples(n_samples);
  for (int k = 0; k < n_samples; ++k) {
    samples[k] = at(static_cast<double>(k) / n_samples);
    if (!(samples[k].norm() >= floor))
      throw Error(ErrorCode::NonIsolated, "vector field vanishes on the winding curve");
  }
  double total = 0;
  // Bisect any step of a quarter turn or more so no full rotation can hide between samples.
  std::function<void(double, double, const Vec&, const Vec&, int)> segment = [&](double ua, double ub, const Vec& a,
                                                                                 const Vec& b, int depth) {
    const double delta = std::atan2(cross2(a, b), a.dot(b));
    if (std::abs(delta) < std::numbers::pi / 2 || depth >= 40) {
      total += delta;
      return;
    }
    const double um = 0.5 * (ua + ub);
    const Vec m = at(um);
    if (!(m.norm() >= floor)) throw Error(ErrorCode::NonIsolated, "vector field vanishes on the winding curve");
    segment(ua, um, a, m, depth + 1);
    segment(um, ub, m, b, depth + 1);
  };
  for (int k = 0; k < n_samples; ++k) {
    const int next = (k + 1) % n_samples;
    segment(static_cast<double>(k) / n_samples, static_cast<double>(k + 1) / n_samples, samples[k], samples[next], 0);
  }
  const double w = total / kTwoPi;
  const double rounded = std::round(w);
  if (!(std::abs(w - rounded) < max_residual)) {
    std::ostringstream msg;
    msg << "winding residual " << std::abs(w - rounded) << " too large; try " << 4 * n_samples << " samples";
    throw UnderSampled(msg.str(), 4 * n_samples);
  }
  return static_cast<int>(rounded);
}

int winding_index_2d(const ScalarField& f, const Vec& z, double eps, const WindingOptions& options) {
  if (f.dim() != 2) throw Error(ErrorCode::Usage, "winding_index_2d requires a planar field");
  if (!(eps > 0)) throw Error(ErrorCode::Usage, "winding radius must be positive");
  auto at = [&](double u) {
    return f.gradient(z + eps * Vec{{std::cos(kTwoPi * u), std::sin(kTwoPi * u)}});
  };
  return winding_number(at, options.n_samples, options.max_residual, 10 * f.gradient_noise_floor());
}

int sign_index_nondegenerate(const ScalarField& f, const Vec& z, double degeneracy_tol) {
  const Vec eig = symmetric_eigenvalues(f.hessian(z));
  const double hn = eig.cwiseAbs().maxCoeff();
  if (!(eig.cwiseAbs().minCoeff() > degeneracy_tol * std::max(1.0, hn)))
    throw Error(ErrorCode::Degenerate, "Hessian is singular at the critical point");
  const auto negatives = (eig.array() < 0).count();
  return negatives % 2 == 0 ? 1 : -1;
}

double select_index_radius(const ScalarField& f, const Vec& z, const Domain& domain, double nearest_other) {
  double room = std::min(nearest_other, domain.distance_to_boundary(z));
  if (!(room > 0)) room = 1e-3 * domain.diameter();
  const double eps0 = std::min(0.25 * room, 0.5);
  double eps = eps0;
  for (int attempt = 0; attempt <= 6; ++attempt, eps *= 0.5)
    if (min_gradient_on_sphere(f, z, eps) >= 1e-6) return eps;
  return eps0;
}

int homological_index(const ScalarField& f, const Vec& z, const Domain& domain, double eps, double nearest_other) {
  if (!(eps > 0)) eps = select_index_radius(f, z, domain, nearest_other);
  switch (f.dim()) {
    case 1: {
      const Vec step = Vec::Constant(1, eps);
      const int right = sgn(f.gradient(z + step)[0]);
      const int left = sgn(f.gradient(z - step)[0]);
      if (right == 0 || left == 0) throw Error(ErrorCode::NonIsolated, "derivative vanishes at the probe points");
      return (right - left) / 2;
    }
    case 2: return winding_index_2d(f, z, eps);
    default:
      try {
        return sign_index_nondegenerate(f, z);
      } catch (const Error&) {
        throw Error(ErrorCode::Unsupported, "index of degenerate zeros is not computed for D >= 3");
      }
  }
}

namespace {

struct ProbeSigns {
  bool all_below = true;
  bool all_above = true;
};

ProbeSigns probe(const ScalarField& f, const Vec& z, double r) {
  const double center = f.value(z);
  ProbeSigns signs;
  for (const Vec& u : ring_directions(f.dim())) {
    const double diff = f.value(z + r * u) - center;
    if (!(diff < 0)) signs.all_below = false;
    if (!(diff > 0)) signs.all_above = false;
  }
  return signs;
}

}  // namespace

Classification classify_by_index(const ScalarField& f, const Vec& z, int index, double probe_radius) {
  const auto signs = probe(f, z, probe_radius);
  if (signs.all_below) return {PointKind::Max, 0};
  if (signs.all_above) return {PointKind::Min, 0};
  if (index == 0) return {PointKind::Undulation, 0};
  if (f.dim() == 2) {
    if (index == 1) return {PointKind::Unclassified, 0};
    return {PointKind::Saddle, 1 - index};
  }
  if (f.dim() == 1) return {PointKind::Unclassified, 0};
  return {PointKind::Saddle, 0};
}

void classify_points(const ScalarField& f, const Domain& domain, std::vector<CriticalPoint>& points,
                     const DetectorOptions& options) {
  std::vector<Vec> locations;
  for (const auto& p : points) locations.push_back(p.location);
  const auto nearest = nearest_neighbor_distances(locations);
  parallel_for(points.size(), [&](std::size_t i) {
    auto& p = points[i];
    const double hn = p.eigenvalues.size() ? p.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
    const double hmin = p.eigenvalues.size() ? p.eigenvalues.cwiseAbs().minCoeff() : 0.0;
    if (hmin > options.degeneracy_tol * std::max(1.0, hn))
      p.morse_index = static_cast<int>((p.eigenvalues.array() < 0).count());
    const double eps =
        options.eps > 0 ? options.eps : select_index_radius(f, p.location, domain, nearest[i]);
    if (!p.near_boundary) {
      try {
        p.hom_index = homological_index(f, p.location, domain, eps, nearest[i]);
      } catch (const Error&) {
        p.hom_index.reset();
      }
    }
    if (p.hom_index) {
      p.classification = classify_by_index(f, p.location, *p.hom_index, eps);
    } else {
      const auto signs = probe(f, p.location, eps);
      p.classification = {signs.all_below ? PointKind::Max : signs.all_above ? PointKind::Min : PointKind::Unclassified,
                          0};
    }
  });
}

// ---- boundary index ---------------------------------------------------------------------

namespace {

Vec perturbation_direction(int dim, std::uint64_t seed) {
  if (dim == 2) {
    const double angle = kTwoPi * uniform_open(hash_key({seed, 2}));
    return Vec{{std::cos(angle), std::sin(angle)}};
  }
  Vec d(dim);
  for (int i = 0; i < dim; ++i) d[i] = standard_normal(hash_key({seed, static_cast<std::uint64_t>(dim), std::uint64_t(i)}));
  return d.normalized();
}

HalfInteger boundary_weight(double normal_component, double scale) {
  if (!(std::abs(normal_component) > 1e-9 * scale))
    throw Error(ErrorCode::BoundaryCritical, "gradient vanishes at a boundary point");
  return normal_component < 0 ? kHalf : -kHalf;
}

BoundaryIndexResult interval_boundary(const ScalarField& f, const Interval& iv) {
  BoundaryIndexResult out;
  const double scale = std::max(std::abs(f.gradient(Vec::Constant(1, iv.lo))[0]),
                                std::abs(f.gradient(Vec::Constant(1, iv.hi))[0]));
  for (const auto& [x, normal] : {std::pair{iv.lo, -1.0}, std::pair{iv.hi, 1.0}}) {
    const Vec p = Vec::Constant(1, x);
    const double v = f.gradient(p)[0];
    if (v == 0) throw Error(ErrorCode::BoundaryCritical, "derivative vanishes at an endpoint");
    IndexEntry e{p, 1, boundary_weight(v * normal, scale), true};
    out.total += e.contribution();
    out.zeros.push_back(e);
  }
  return out;
}

BoundaryIndexResult loop_boundary(const ScalarField& f, const Domain& domain, const BoundaryOptions& options) {
  const std::size_t n = std::max<std::size_t>(options.n_samples, 64);
  const auto loop = domain.boundary_loop(n);
  std::vector<Vec> grads(n);
  parallel_for(n, [&](std::size_t i) { grads[i] = f.gradient(loop[i].point); });
  double scale = 0;
  for (const auto& g : grads) scale = std::max(scale, g.norm());
  if (!(scale > 0)) throw Error(ErrorCode::NonGeneric, "gradient vanishes on the whole boundary");

  const Vec direction = perturbation_direction(2, options.seed);
  auto tangential_samples = [&](double delta) {
    std::vector<double> par(n);
    for (std::size_t i = 0; i < n; ++i) par[i] = (grads[i] + delta * direction).dot(loop[i].tangent);
    return par;
  };
  auto longest_zero_run = [&](const std::vector<double>& par) {
    std::size_t best = 0, run = 0;
    for (std::size_t k = 0; k < 2 * n; ++k) {
      run = std::abs(par[k % n]) <= 1e-9 * scale ? run + 1 : 0;
      best = std::max(best, std::min(run, n));
    }
    return best;
  };

  BoundaryIndexResult out;
  double delta = 0;
  auto par = tangential_samples(delta);
  if (longest_zero_run(par) > 3) {
    delta = options.perturbation_scale * scale;
    par = tangential_samples(delta);
    out.perturbed = true;
    out.perturbation = delta;
    if (longest_zero_run(par) > 3)
      throw Error(ErrorCode::NonGeneric, "tangential gradient has non-isolated zeros even after perturbation");
  }
  for (auto& p : par)
    if (p == 0) p = std::numeric_limits<double>::denorm_min();

  auto field = [&](const BoundarySample& b) -> Vec { return f.gradient(b.point) + delta * direction; };
  auto tangential_at = [&](double u) {
    const auto b = domain.boundary_loop_at(u - std::floor(u));
    return field(b).dot(b.tangent);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    if (sgn(par[i]) == sgn(par[j])) continue;
    double lo = static_cast<double>(i) / n, hi = static_cast<double>(i + 1) / n;
    const int s_lo = sgn(par[i]);
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double v = tangential_at(mid);
      if (sgn(v) == s_lo) lo = mid;
      else hi = mid;
    }
    const double u = 0.5 * (lo + hi);
    const auto b = domain.boundary_loop_at(u - std::floor(u));
    const Vec v = field(b);
    IndexEntry e{b.point, (sgn(par[j]) - sgn(par[i])) / 2, boundary_weight(v.dot(b.normal), scale), true};
    out.total += e.contribution();
    out.zeros.push_back(e);
  }
  return out;
}

// Tangent frame of the sphere at unit normal n.
std::pair<Vec, Vec> tangent_frame(const Vec& n) {
  Vec a = std::abs(n[0]) < 0.9 ? Vec{{1.0, 0.0, 0.0}} : Vec{{0.0, 1.0, 0.0}};
  Vec e1 = (a - a.dot(n) * n).normalized();
  Vec e2 = Vec{{n[1] * e1[2] - n[2] * e1[1], n[2] * e1[0] - n[0] * e1[2], n[0] * e1[1] - n[1] * e1[0]}};
  return {e1, e2};
}

BoundaryIndexResult sphere_boundary(const ScalarField& f, const Ball& ball, const BoundaryOptions& options) {
  const int n_theta = 48, n_phi = 96;
  auto normal_at = [](double theta, double phi) {
    return Vec{{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)}};
  };
  const Vec direction = perturbation_direction(3, options.seed);
  double delta = 0;
  auto field = [&](const Vec& n) -> Vec { return f.gradient(ball.center + ball.radius * n) + delta * direction; };
  auto tangential = [&](const Vec& n) -> Vec {
    const Vec v = field(n);
    return v - v.dot(n) * n;
  };

  std::vector<Vec> normals(n_theta * n_phi);
  for (int i = 0; i < n_theta; ++i)
    for (int j = 0; j < n_phi; ++j)
      normals[i * n_phi + j] = normal_at((i + 0.5) * std::numbers::pi / n_theta, kTwoPi * j / n_phi);
  double scale = 0;
  for (const auto& n : normals) scale = std::max(scale, field(n).norm());
  if (!(scale > 0)) throw Error(ErrorCode::NonGeneric, "gradient vanishes on the whole boundary");

  BoundaryIndexResult out;
  std::vector<double> mag(normals.size());
  auto measure = [&] {
    std::size_t tiny = 0;
    for (std::size_t k = 0; k < normals.size(); ++k) {
      mag[k] = tangential(normals[k]).norm();
      if (mag[k] <= 1e-9 * scale) ++tiny;
    }
    return tiny;
  };
  if (measure() > 3) {
    delta = options.perturbation_scale * scale;
    out.perturbed = true;
    out.perturbation = delta;
    if (measure() > 3)
      throw Error(ErrorCode::NonGeneric, "tangential gradient has non-isolated zeros even after perturbation");
  }

  // Seeds: grid minima of the tangential magnitude.
  std::vector<Vec> seeds;
  for (int i = 0; i < n_theta; ++i) {
    for (int j = 0; j < n_phi; ++j) {
      const double m = mag[i * n_phi + j];
      double nmax = 0;
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const int ii = i + di;
          if (ii < 0 || ii >= n_theta) continue;
          const double mm = mag[ii * n_phi + (j + dj + n_phi) % n_phi];
          if (mm < m) {
            is_min = false;
            break;
          }
          nmax = std::max(nmax, mm);
        }
      }
      if (is_min && m < 0.5 * nmax) seeds.push_back(normals[i * n_phi + j]);
    }
  }

  // Newton in the tangent plane at the current iterate, recentred each step.
  auto chart = [](const Vec& n0, const Vec& e1, const Vec& e2, double a, double b) {
    return Vec((n0 + a * e1 + b * e2).normalized());
  };
  const double zero_tol = 1e-11 * scale;
  std::vector<Vec> zeros;
  for (Vec n : seeds) {
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
      const auto [e1, e2] = tangent_frame(n);
      auto w = [&](double a, double b) {
        const Vec u = tangential(chart(n, e1, e2, a, b));
        return Vec{{u.dot(e1), u.dot(e2)}};
      };
      const Vec w0 = w(0, 0);
      if (w0.norm() <= zero_tol) {
        ok = true;
        break;
      }
      const double h = 1e-6;
      Mat jac(2, 2);
      jac.col(0) = (w(h, 0) - w(-h, 0)) / (2 * h);
      jac.col(1) = (w(0, h) - w(0, -h)) / (2 * h);
      Vec step = -jac.fullPivLu().solve(w0);
      if (!step.allFinite()) break;
      if (step.norm() > 0.2) step *= 0.2 / step.norm();
      n = chart(n, e1, e2, step[0], step[1]);
    }
    if (!ok) continue;
    bool dup = false;
    for (const auto& z : zeros) dup = dup || (z - n).norm() < 1e-6;
    if (!dup) zeros.push_back(n);
  }
  std::sort(zeros.begin(), zeros.end(), lexicographic_less);

  for (const Vec& n : zeros) {
    double room = 0.1;
    for (const auto& other : zeros)
      if (&other != &n) room = std::min(room, 0.25 * (other - n).norm());
    const auto [e1, e2] = tangent_frame(n);
    auto at = [&](double t) -> Vec {
      const Vec u = tangential(chart(n, e1, e2, room * std::cos(kTwoPi * t), room * std::sin(kTwoPi * t)));
      return Vec{{u.dot(e1), u.dot(e2)}};
    };
    const int index = winding_number(at, 256, 0.1, 1e-14 * scale);
    IndexEntry e{ball.center + ball.radius * n, index, boundary_weight(field(n).dot(n), scale), true};
    out.total += e.contribution();
    out.zeros.push_back(e);
  }
  return out;
}

}  // namespace

BoundaryIndexResult boundary_index(const ScalarField& f, const Domain& domain, const BoundaryOptions& options) {
  if (f.dim() != domain.dim()) throw Error(ErrorCode::Usage, "field and domain dimensions differ");
  if (const auto* iv = domain.as_interval()) return interval_boundary(f, *iv);
  if (domain.dim() == 2) return loop_boundary(f, domain, options);
  if (const auto* ball = domain.as_ball(); ball != nullptr && domain.dim() == 3) return sphere_boundary(f, *ball, options);
  throw Error(ErrorCode::Unsupported, "boundary index is available for intervals, planar domains and 3D balls");
}

IndexResult poincare_hopf_audit(const ScalarField& f, const Domain& domain, const AuditOptions& options) {
  auto detector = options.detector;
  detector.classify = true;
  const auto detection = find_critical_points(f, domain, detector);
  if (!detection.unresolved.empty()) {
    std::ostringstream msg;
    msg << detection.unresolved.size() << " critical cell(s) could not be resolved";
    throw Error(ErrorCode::Unresolved, msg.str());
  }
  IndexResult result;
  for (const auto& p : detection.points) {
    if (p.near_boundary) continue;
    if (!p.hom_index) {
      std::ostringstream msg;
      msg << "index unavailable at interior critical point (";
      for (Eigen::Index i = 0; i < p.location.size(); ++i) msg << (i ? ", " : "") << p.location[i];
      msg << ")";
      throw Error(ErrorCode::Unsupported, msg.str());
    }
    result.interior_index += *p.hom_index;
    result.per_point.push_back({p.location, *p.hom_index, HalfInteger::from_int(1), false});
  }
  const auto boundary = boundary_index(f, domain, options.boundary);
  result.boundary_index = boundary.total;
  result.boundary_perturbed = boundary.perturbed;
  for (const auto& z : boundary.zeros) result.per_point.push_back(z);
  result.total = HalfInteger::from_int(result.interior_index) + result.boundary_index;
  result.euler_target = HalfInteger::from_int(domain.dim() % 2 == 0 ? domain.euler_characteristic() : 0);
  result.pass = result.total == result.euler_target;
  return result;
}

TangencyResult tangency_check(const ScalarField& f, const Vec& p, double c, double delta, int n_samples,
                              double angle_tol) {
  if (!(delta > 0)) throw Error(ErrorCode::Usage, "tangency radius must be positive");
  const double level_tol = 1e-12 * (1 + std::abs(c));
  TangencyResult out;
  out.min_angle = std::numbers::pi / 2;
  auto record = [&](const Vec& s) {
    ++out.intersections;
    const Vec g = f.gradient(s);
    const Vec radial = s - p;
    double angle = 0;
    if (g.norm() > 0) {
      const double cosine = std::clamp(std::abs(g.dot(radial)) / (g.norm() * radial.norm()), 0.0, 1.0);
      angle = std::acos(cosine);
    }
    out.min_angle = std::min(out.min_angle, angle);
    if (!(angle > angle_tol)) out.transversal = false;
  };
  if (f.dim() == 1) {
    for (double side : {-1.0, 1.0}) {
      const Vec s = p + Vec::Constant(1, side * delta);
      if (std::abs(f.value(s) - c) <= level_tol) record(s);
    }
  } else if (f.dim() == 2) {
    auto point = [&](double u) { return Vec(p + delta * Vec{{std::cos(kTwoPi * u), std::sin(kTwoPi * u)}}); };
    std::vector<double> g(n_samples);
    for (int k = 0; k < n_samples; ++k) g[k] = f.value(point(static_cast<double>(k) / n_samples)) - c;
    for (int k = 0; k < n_samples; ++k) {
      const int next = (k + 1) % n_samples;
      if (std::abs(g[k]) <= level_tol) {
        record(point(static_cast<double>(k) / n_samples));
        continue;
      }
      if (std::abs(g[next]) <= level_tol || sgn(g[k]) == sgn(g[next])) continue;
      double lo = static_cast<double>(k) / n_samples, hi = static_cast<double>(k + 1) / n_samples;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sgn(f.value(point(mid)) - c) == sgn(g[k])) lo = mid;
        else hi = mid;
      }
      record(point(0.5 * (lo + hi)));
    }
  } else {
    throw Error(ErrorCode::Unsupported, "tangency check is implemented for D <= 2");
  }
  out.vacuous = out.intersections == 0;
  return out;
}

}  // namespace critsense
