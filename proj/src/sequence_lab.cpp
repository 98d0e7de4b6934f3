#include "critsense/sequence_lab.hpp"

#include "critsense/error.hpp"
#include "critsense/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace critsense {

int default_ck_grid(int dim) {
  switch (dim) {
    case 1: return 10000;
    case 2: return 100;
    default: return 21;
  }
}

CkDistance ck_distance(const ScalarField& f, const ScalarField& g, const Domain& domain, int k, int grid_res) {
  if (k < 0 || k > 2) throw Error(ErrorCode::Usage, "k must be 0, 1 or 2");
  const StructuredGrid grid(domain, grid_res);
  const std::size_t nv = grid.vertex_count();
  std::vector<std::array<double, 3>> local(nv, {0.0, 0.0, 0.0});
  const std::size_t chunk = 1024;
  parallel_for((nv + chunk - 1) / chunk, [&](std::size_t c) {
    const std::size_t end = std::min(nv, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) {
      if (!grid.inside(i)) continue;
      const Vec s = grid.vertex(i);
      local[i][0] = std::abs(f.value(s) - g.value(s));
      if (k >= 1) local[i][1] = (f.gradient(s) - g.gradient(s)).norm();
      if (k >= 2) local[i][2] = spectral_norm(f.hessian(s) - g.hessian(s));
    }
  });
  CkDistance d;
  d.k = k;
  for (const auto& l : local) {
    d.d0 = std::max(d.d0, l[0]);
    d.d1 = std::max(d.d1, l[1]);
    d.d2 = std::max(d.d2, l[2]);
  }
  if (k < 1) d.d1 = std::numeric_limits<double>::quiet_NaN();
  if (k < 2) d.d2 = std::numeric_limits<double>::quiet_NaN();
  return d;
}

bool Counts::identity_holds() const {
  return n_c == n_max + n_min + n_saddle + n_undulation + n_unclassified;
}

Counts count_points(const DetectionResult& detection, const ImproperCounts& improper) {
  Counts c;
  c.improper = improper;
  c.unresolved = static_cast<int>(detection.unresolved.size());
  for (const auto& p : detection.points) {
    ++c.n_c;
    switch (p.classification.kind) {
      case PointKind::Max: ++c.n_max; break;
      case PointKind::Min: ++c.n_min; break;
      case PointKind::Saddle: ++c.n_saddle; break;
      case PointKind::Undulation: ++c.n_undulation; break;
      case PointKind::Unclassified: ++c.n_unclassified; break;
    }
    if (p.hom_index) ++c.hom[*p.hom_index];
    else ++c.hom_unavailable;
    if (p.morse_index) ++c.morse[*p.morse_index];
    else ++c.morse_degenerate;
    if (p.near_boundary) ++c.near_boundary;
  }
  return c;
}

Counts count_report(const ScalarField& f, const Domain& domain, const DetectorOptions& options) {
  auto opts = options;
  opts.classify = true;
  const auto detection = find_critical_points(f, domain, opts);
  return count_points(detection, improper_extrema(f, domain, options.grid_res));
}

Matching match_critical_points(const std::vector<CriticalPoint>& pts_n, const std::vector<CriticalPoint>& pts_limit,
                               double radius) {
  if (!(radius > 0)) throw Error(ErrorCode::Usage, "matching radius must be positive");
  Matching m;
  m.radius = radius;
  struct Candidate {
    double distance;
    std::size_t i, j;
  };
  std::vector<Candidate> candidates;
  std::vector<int> hits(pts_limit.size(), 0);
  for (std::size_t i = 0; i < pts_n.size(); ++i) {
    for (std::size_t j = 0; j < pts_limit.size(); ++j) {
      const double d = (pts_n[i].location - pts_limit[j].location).norm();
      if (d <= radius) {
        candidates.push_back({d, i, j});
        ++hits[j];
      }
    }
  }
  for (int h : hits) m.multi_match = m.multi_match || h >= 2;
  // Ties are broken on the unordered pair of locations so swapping the roles of the two
  // sets yields the same pairs.
  auto key = [&](const Candidate& c) {
    const Vec& a = pts_n[c.i].location;
    const Vec& b = pts_limit[c.j].location;
    return lexicographic_less(a, b) ? std::pair<const Vec*, const Vec*>{&a, &b} : std::pair<const Vec*, const Vec*>{&b, &a};
  };
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& x, const Candidate& y) {
    if (x.distance != y.distance) return x.distance < y.distance;
    const auto kx = key(x), ky = key(y);
    if (*kx.first != *ky.first) return lexicographic_less(*kx.first, *ky.first);
    return lexicographic_less(*kx.second, *ky.second);
  });
  std::vector<bool> used_n(pts_n.size(), false), used_limit(pts_limit.size(), false);
  for (const auto& c : candidates) {
    if (used_n[c.i] || used_limit[c.j]) continue;
    used_n[c.i] = used_limit[c.j] = true;
    const auto& a = pts_n[c.i];
    const auto& b = pts_limit[c.j];
    MatchPair pair{c.i, c.j, c.distance, true, true};
    if (a.hom_index && b.hom_index) pair.hom_agree = *a.hom_index == *b.hom_index;
    if (a.morse_index || b.morse_index) pair.morse_agree = a.morse_index == b.morse_index;
    m.pairs.push_back(pair);
  }
  std::sort(m.pairs.begin(), m.pairs.end(), [](const MatchPair& x, const MatchPair& y) {
    return std::tie(x.index_limit, x.index_n) < std::tie(y.index_limit, y.index_n);
  });
  for (std::size_t i = 0; i < pts_n.size(); ++i)
    if (!used_n[i]) m.unmatched_n.push_back(i);
  for (std::size_t j = 0; j < pts_limit.size(); ++j)
    if (!used_limit[j]) m.unmatched_limit.push_back(j);
  m.bijection = m.unmatched_n.empty() && m.unmatched_limit.empty();
  return m;
}

double default_matching_radius(const std::vector<CriticalPoint>& pts_limit, const Domain& domain) {
  return std::min(resolution(pts_limit) / 2, domain.diameter() / 10);
}

bool decreasing_to_zero(const std::vector<double>& values) {
  if (values.size() < 2) return false;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] < values[i - 1])) return false;
  return values.back() <= 0.5 * values.front();
}

namespace {

int family_grid(const GalleryEntry& family, int n, int grid_override) {
  return grid_override > 0 ? grid_override : std::max(8, family.grid_hint(n));
}

}  // namespace

SequenceReport convergence_experiment(const GalleryEntry& family, const std::vector<int>& n_list,
                                      const Domain& domain, const SequenceOptions& options) {
  if (n_list.empty()) throw Error(ErrorCode::Usage, "n_list must not be empty");
  SequenceReport report;
  report.family = family.name;
  report.domain = domain.to_string();
  const int n_max = *std::max_element(n_list.begin(), n_list.end());

  DetectorOptions detector;
  detector.newton_tol = options.newton_tol;
  const ScalarField limit = family.limit();
  report.limit_grid = family_grid(family, n_max, options.grid_override);
  detector.grid_res = report.limit_grid;
  const auto limit_detection = find_critical_points(limit, domain, detector);
  report.limit_points = limit_detection.points;
  report.limit_counts = count_points(limit_detection, improper_extrema(limit, domain, report.limit_grid));
  report.limit_resolution = resolution(report.limit_points);
  report.limit_boundary_min_gradient = boundary_min_gradient(limit, domain);
  const double radius =
      options.matching_radius > 0 ? options.matching_radius : default_matching_radius(report.limit_points, domain);

  for (int n : n_list) {
    SequenceRow row;
    row.n = n;
    row.grid = family_grid(family, n, options.grid_override);
    try {
      const ScalarField f_n = family.family(n);
      detector.grid_res = row.grid;
      const auto detection = find_critical_points(f_n, domain, detector);
      row.points = detection.points;
      row.counts = count_points(detection, improper_extrema(f_n, domain, row.grid));
      row.resolution = resolution(row.points);
      row.boundary_min_gradient = boundary_min_gradient(f_n, domain);
      const int ck_grid = std::max(options.ck_grid > 0 ? options.ck_grid : default_ck_grid(domain.dim()), row.grid);
      row.distance = ck_distance(f_n, limit, domain, std::min(options.k, 2), ck_grid);
      row.matching = match_critical_points(row.points, report.limit_points, radius);
    } catch (const Error& e) {
      row.error = std::string(to_string(e.code())) + ": " + e.what();
    }
    report.rows.push_back(std::move(row));
  }

  std::vector<double> resolutions;
  report.boundary_hypothesis = report.limit_boundary_min_gradient > options.boundary_threshold;
  double min_resolution = std::numeric_limits<double>::infinity();
  for (const auto& row : report.rows) {
    if (!row.error.empty()) continue;
    resolutions.push_back(row.resolution);
    min_resolution = std::min(min_resolution, row.resolution);
    report.boundary_hypothesis = report.boundary_hypothesis && row.boundary_min_gradient > options.boundary_threshold;
    report.multi_match_seen = report.multi_match_seen || row.matching.multi_match;
  }
  report.resolution_hypothesis = min_resolution >= options.resolution_threshold && !decreasing_to_zero(resolutions);

  const auto& last = report.rows.back();
  const auto& lc = report.limit_counts;
  report.counts_match_at_largest = last.error.empty() && last.counts.n_c == lc.n_c &&
                                   last.counts.n_max == lc.n_max && last.counts.n_min == lc.n_min &&
                                   last.counts.n_saddle == lc.n_saddle && last.counts.hom == lc.hom;
  report.upper_bound_holds = true;
  for (std::size_t i = report.rows.size() >= 2 ? report.rows.size() - 2 : 0; i < report.rows.size(); ++i)
    report.upper_bound_holds =
        report.upper_bound_holds && report.rows[i].error.empty() && report.rows[i].counts.n_c <= lc.n_c;

  const bool hypotheses = report.boundary_hypothesis && report.resolution_hypothesis;
  const bool conclusions = report.counts_match_at_largest && report.upper_bound_holds;
  report.verdict = !hypotheses || conclusions ? "CONSISTENT-WITH-PAPER" : "INCONSISTENT-WITH-PAPER";
  return report;
}

std::vector<std::pair<int, double>> resolution_sequence(const GalleryEntry& family, const std::vector<int>& n_list,
                                                        const Domain& domain, int grid_override) {
  std::vector<std::pair<int, double>> out;
  for (int n : n_list) {
    DetectorOptions detector;
    detector.grid_res = family_grid(family, n, grid_override);
    detector.classify = false;
    out.emplace_back(n, resolution(find_critical_points(family.family(n), domain, detector).points));
  }
  return out;
}

}  // namespace critsense
