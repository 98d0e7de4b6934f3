#pragma once

#include "critsense/critpoint.hpp"
#include "critsense/gallery.hpp"

#include <map>
#include <string>
#include <vector>

namespace critsense {

struct CkDistance {
  int k = 0;
  double d0 = 0;
  double d1 = 0;  // NaN when k < 1
  double d2 = 0;  // NaN when k < 2
};

/// Grid sup of |f - g|, |grad f - grad g| and ||H_f - H_g|| up to order k.
CkDistance ck_distance(const ScalarField& f, const ScalarField& g, const Domain& domain, int k, int grid_res);

/// Default grid for C^k distances: about 10^4 points in one and two dimensions.
int default_ck_grid(int dim);

struct Counts {
  int n_c = 0;
  int n_max = 0;
  int n_min = 0;
  int n_saddle = 0;
  int n_undulation = 0;
  int n_unclassified = 0;
  std::map<int, int> hom;    // lambda -> count
  std::map<int, int> morse;  // lambda -> count
  int hom_unavailable = 0;
  int morse_degenerate = 0;
  int near_boundary = 0;
  int unresolved = 0;
  ImproperCounts improper;

  /// N_C = N_M + N_m + N_S + undulations + unclassified.
  bool identity_holds() const;
};

Counts count_points(const DetectionResult& detection, const ImproperCounts& improper);
Counts count_report(const ScalarField& f, const Domain& domain, const DetectorOptions& options = {});

struct MatchPair {
  std::size_t index_n = 0;
  std::size_t index_limit = 0;
  double distance = 0;
  bool hom_agree = true;
  bool morse_agree = true;
};

struct Matching {
  double radius = 0;
  std::vector<MatchPair> pairs;
  std::vector<std::size_t> unmatched_n;
  std::vector<std::size_t> unmatched_limit;
  bool multi_match = false;  // some limit point has two or more f_n points within radius
  bool bijection = false;
};

/// Greedy nearest-pair matching under a radius cap.
Matching match_critical_points(const std::vector<CriticalPoint>& pts_n, const std::vector<CriticalPoint>& pts_limit,
                               double radius);

/// min(resolution(limit)/2, diameter/10).
double default_matching_radius(const std::vector<CriticalPoint>& pts_limit, const Domain& domain);

struct SequenceOptions {
  int k = 2;
  int grid_override = 0;  // 0: per-n grid hint of the family
  int ck_grid = 0;        // 0: default_ck_grid
  double newton_tol = 1e-9;
  double boundary_threshold = 1e-4;
  double resolution_threshold = 1e-3;
  double matching_radius = 0;  // 0: default_matching_radius
};

struct SequenceRow {
  int n = 0;
  CkDistance distance;
  Counts counts;
  double resolution = 0;
  double boundary_min_gradient = 0;
  Matching matching;
  std::vector<CriticalPoint> points;
  int grid = 0;
  std::string error;
};

struct SequenceReport {
  std::string family;
  std::string domain;
  std::vector<SequenceRow> rows;
  Counts limit_counts;
  std::vector<CriticalPoint> limit_points;
  double limit_resolution = 0;
  double limit_boundary_min_gradient = 0;
  int limit_grid = 0;

  bool boundary_hypothesis = false;
  bool resolution_hypothesis = false;
  bool counts_match_at_largest = false;
  bool upper_bound_holds = false;
  bool multi_match_seen = false;
  std::string verdict;
};

SequenceReport convergence_experiment(const GalleryEntry& family, const std::vector<int>& n_list,
                                      const Domain& domain, const SequenceOptions& options = {});

std::vector<std::pair<int, double>> resolution_sequence(const GalleryEntry& family, const std::vector<int>& n_list,
                                                        const Domain& domain, int grid_override = 0);

/// Strictly decreasing with the last value at most half the first.
bool decreasing_to_zero(const std::vector<double>& values);

}  // namespace critsense
