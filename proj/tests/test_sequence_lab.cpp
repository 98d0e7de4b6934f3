#include "critsense/gallery.hpp"
#include "critsense/sequence_lab.hpp"

#include <doctest.h>

#include <cmath>

using namespace critsense;

namespace {

const Domain disk = Domain::ball(Vec::Zero(2), 1.0);

CriticalPoint at(double x, double y, int hom = 1) {
  CriticalPoint p;
  p.location = Vec{{x, y}};
  p.hom_index = hom;
  return p;
}

}  // namespace

TEST_CASE("c^k distance of a constant shift") {
  const auto f = gallery("bowl", 1);
  for (int n : {1, 4, 16}) {
    const ScalarField g = f + quadratic_field<double>(Mat::Zero(2, 2), Vec::Zero(2), 1.0 / n);
    const auto d = ck_distance(f, g, disk, 2, 64);
    CHECK(d.d0 == doctest::Approx(1.0 / n).epsilon(1e-12));
    CHECK(d.d1 == 0.0);
    CHECK(d.d2 == 0.0);
  }
  const auto d0 = ck_distance(f, f, disk, 0, 16);
  CHECK(std::isnan(d0.d1));
  CHECK(std::isnan(d0.d2));
}

TEST_CASE("c^k distance of a fast oscillation") {
  const ScalarField f = quadratic_field<double>(Mat::Zero(1, 1), Vec::Ones(1), 0.0);
  const ScalarField g =
      ScalarField(1, [](const Vec& s) { return s[0] + std::sin(16 * s[0]) / 16; }, "x+sin(16x)/16")
          .with_gradient([](const Vec& s) { return Vec(Vec::Constant(1, 1 + std::cos(16 * s[0]))); })
          .with_hessian([](const Vec& s) { return Mat(Mat::Constant(1, 1, -16 * std::sin(16 * s[0]))); });
  const auto d = ck_distance(f, g, Domain::interval(0, 1), 2, default_ck_grid(1));
  CHECK(d.d0 <= 1.0 / 16);
  CHECK(std::abs(d.d1 - 1.0) <= 1e-3);
  CHECK(std::abs(d.d2 - 16.0) <= 1e-2);
}

TEST_CASE("fig13a distance to its limit") {
  const auto& e = gallery_entry("fig13a");
  const auto d = ck_distance(e.family(16), e.limit(), e.domain, 2, default_ck_grid(1));
  CHECK(d.d0 <= 0.25 + 5.0 / 16);
}

TEST_CASE("matching identical sets") {
  const std::vector<CriticalPoint> pts{at(0, 0), at(0.5, 0, -1), at(0, 0.5)};
  const auto m = match_critical_points(pts, pts, 0.2);
  CHECK(m.bijection);
  CHECK(!m.multi_match);
  REQUIRE(m.pairs.size() == 3);
  for (const auto& p : m.pairs) {
    CHECK(p.distance == 0.0);
    CHECK(p.index_n == p.index_limit);
    CHECK(p.hom_agree);
  }
}

TEST_CASE("matching is symmetric") {
  const std::vector<CriticalPoint> a{at(0, 0), at(0.3, 0), at(1, 1)};
  const std::vector<CriticalPoint> b{at(0.15, 0), at(1, 1.05), at(-1, -1)};
  const auto ab = match_critical_points(a, b, 0.2);
  const auto ba = match_critical_points(b, a, 0.2);
  REQUIRE(ab.pairs.size() == ba.pairs.size());
  for (const auto& p : ab.pairs) {
    bool found = false;
    for (const auto& q : ba.pairs) found = found || (q.index_n == p.index_limit && q.index_limit == p.index_n);
    CHECK(found);
  }
  CHECK(ab.multi_match);
  CHECK(!ba.multi_match);
  CHECK(!ab.bijection);
}

TEST_CASE("matching flags index disagreement") {
  const auto m = match_critical_points({at(0, 0, -1)}, {at(0.01, 0, 1)}, 0.1);
  REQUIRE(m.pairs.size() == 1);
  CHECK(!m.pairs[0].hom_agree);
}

TEST_CASE("fig10 at n = 64 crowds two maxima onto the limit maximum") {
  const auto& e = gallery_entry("fig10");
  DetectorOptions o;
  o.grid_res = e.grid_hint(64);
  const auto pn = find_critical_points(e.family(64), e.domain, o).points;
  const auto pl = find_critical_points(e.limit(), e.domain, o).points;
  const auto m = match_critical_points(pn, pl, default_matching_radius(pl, e.domain));
  CHECK(m.multi_match);
  CHECK(!m.bijection);
}

TEST_CASE("count reports") {
  const auto bowl = count_report(gallery("bowl", 1), disk);
  CHECK(bowl.n_c == 1);
  CHECK(bowl.n_min == 1);
  CHECK(bowl.n_max == 0);
  CHECK(bowl.n_saddle == 0);
  CHECK(bowl.hom.at(1) == 1);
  CHECK(bowl.morse.at(0) == 1);
  CHECK(bowl.identity_holds());

  const auto monkey = count_report(gallery("monkey", 1), disk);
  CHECK(monkey.n_c == 1);
  CHECK(monkey.n_saddle == 1);
  CHECK(monkey.hom.at(-2) == 1);
  CHECK(monkey.morse_degenerate == 1);
  CHECK(monkey.morse.empty());
  CHECK(monkey.identity_holds());
}

TEST_CASE("fig13b at n = 4 carries a bump maximum and two saddles") {
  const auto& e = gallery_entry("fig13b");
  DetectorOptions o;
  o.grid_res = e.grid_hint(4);
  const auto c = count_report(e.family(4), e.domain, o);
  // The added maximum must be offset by a second saddle to keep the index sum.
  CHECK(c.n_c == 3);
  CHECK(c.n_max == 1);
  CHECK(c.n_saddle == 2);
  CHECK(c.morse.at(2) == 1);
  CHECK(c.morse.at(1) == 2);
  CHECK(c.identity_holds());
}

TEST_CASE("fig10 experiment") {
  const auto& e = gallery_entry("fig10");
  const auto r = convergence_experiment(e, {16, 64, 256}, e.domain);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.limit_counts.n_max == 1);
  for (const auto& row : r.rows) {
    CAPTURE(row.n);
    CHECK(row.error.empty());
    CHECK(row.counts.n_max == 2);
    CHECK(row.counts.improper.maxima == 2);
    CHECK(row.counts.identity_holds());
  }
  CHECK(r.rows[1].resolution <= r.rows[0].resolution / 2);
  CHECK(r.rows[2].resolution <= r.rows[1].resolution / 2);
  CHECK(!r.resolution_hypothesis);
  CHECK(!r.counts_match_at_largest);
  CHECK(r.multi_match_seen);
  CHECK(r.verdict == "CONSISTENT-WITH-PAPER");
}

TEST_CASE("fig4c experiment") {
  const auto& e = gallery_entry("fig4c");
  const auto r = convergence_experiment(e, {4, 16, 64}, e.domain);
  CHECK(r.limit_counts.n_c == 1);
  for (const auto& row : r.rows) CHECK(row.counts.n_c == 2);
  CHECK(r.rows.back().distance.d1 < r.rows.front().distance.d1);
  CHECK(!r.resolution_hypothesis);
  CHECK(r.verdict == "CONSISTENT-WITH-PAPER");
}

TEST_CASE("a well-behaved family converges") {
  const auto& e = gallery_entry("doublewell");
  const auto r = convergence_experiment(e, {16, 64}, e.domain);
  CHECK(r.boundary_hypothesis);
  CHECK(r.resolution_hypothesis);
  CHECK(r.counts_match_at_largest);
  CHECK(r.upper_bound_holds);
  for (const auto& row : r.rows) {
    CHECK(row.counts.n_c == r.limit_counts.n_c);
    CHECK(row.counts.n_min == r.limit_counts.n_min);
    CHECK(row.counts.n_saddle == r.limit_counts.n_saddle);
    CHECK(row.matching.bijection);
  }
  CHECK(r.verdict == "CONSISTENT-WITH-PAPER");
}

TEST_CASE("resolution sequences") {
  const auto& bowl = gallery_entry("bowl");
  for (const auto& [n, r] : resolution_sequence(bowl, {1, 4, 16}, bowl.domain)) CHECK(std::isinf(r));

  const auto& f10 = gallery_entry("fig10");
  std::vector<double> v;
  for (const auto& [n, r] : resolution_sequence(f10, {16, 64, 256}, f10.domain)) v.push_back(r);
  CHECK(decreasing_to_zero(v));

  const auto& f13 = gallery_entry("fig13a");
  v.clear();
  for (const auto& [n, r] : resolution_sequence(f13, {4, 16, 64}, f13.domain)) v.push_back(r);
  CHECK(decreasing_to_zero(v));

  CHECK(!decreasing_to_zero({1.0, 0.9}));
  CHECK(!decreasing_to_zero({1.0, 2.0, 0.1}));
}
