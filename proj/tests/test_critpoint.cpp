#include "critsense/critpoint.hpp"
#include "critsense/error.hpp"
#include "critsense/gallery.hpp"

#include <doctest.h>

#include <cmath>

using namespace critsense;

namespace {

const Domain disk = Domain::ball(Vec::Zero(2), 1.0);

DetectionResult detect(const ScalarField& f, const Domain& d, int grid) {
  DetectorOptions o;
  o.grid_res = grid;
  return find_critical_points(f, d, o);
}

}  // namespace

TEST_CASE("bowl has one minimum") {
  const auto r = detect(gallery("bowl", 1), disk, 32);
  REQUIRE(r.points.size() == 1);
  CHECK(r.points[0].location.norm() < 1e-12);
  CHECK(r.points[0].classification.kind == PointKind::Min);
  CHECK(r.points[0].morse_index == 0);
  CHECK(r.points[0].hom_index == 1);
}

TEST_CASE("monkey saddle is found exactly once") {
  DetectorOptions o;
  const auto r = find_critical_points(gallery("monkey", 1), disk, o);
  REQUIRE(r.points.size() == 1);
  CHECK(r.points[0].location.norm() < 1e-6);
  CHECK(r.points[0].grad_norm <= o.newton_tol);
  CHECK(r.points[0].classification.to_string() == "Saddle(3)");
  CHECK(!r.points[0].morse_index.has_value());
}

TEST_CASE("fig13b members carry a maximum inside the bump support") {
  // Three points: the saddle of the limit, the bump maximum and a second saddle that
  // balances the index sum (-1 + 1 - 1 = -1 with the limit's boundary behavior).
  for (int n : {1, 4, 16}) {
    CAPTURE(n);
    const auto& e = gallery_entry("fig13b");
    const auto r = detect(e.family(n), e.domain, e.grid_hint(n));
    REQUIRE(r.points.size() == 3);
    int maxima = 0, saddles = 0;
    for (const auto& p : r.points) {
      if (p.classification.kind == PointKind::Max) {
        ++maxima;
        CHECK((n * p.location + Vec::Ones(2)).norm() < 1.0);
        CHECK(p.morse_index == 2);
      }
      if (p.classification.kind == PointKind::Saddle) ++saddles;
    }
    CHECK(maxima == 1);
    CHECK(saddles == 2);
    int hom_sum = 0;
    for (const auto& p : r.points) hom_sum += *p.hom_index;
    CHECK(hom_sum == -1);
  }
}

TEST_CASE("newton refinement") {
  const ScalarField sq = quadratic_field<double>(Mat::Constant(1, 1, 2.0), Vec::Zero(1), 0.0);
  CHECK(std::abs(refine_newton(sq, Vec::Constant(1, 0.3), 1e-12, 3)[0]) < 1e-12);
  CHECK(refine_newton(gallery("saddle", 1), Vec{{0.2, -0.1}}, 1e-12).norm() < 1e-12);
  // Degenerate: |grad f| ~ |x|^3 along the valley, so a tight gradient tolerance only pins x to ~1e-3.
  const auto peano = gallery("peano", 1);
  const Vec z = refine_newton(peano, Vec{{0.1, 0.1}}, 1e-9, 200);
  CHECK(peano.gradient(z).norm() <= 1e-9);
  CHECK(z.norm() < 1e-2);
}

TEST_CASE("newton failure carries the best iterate") {
  try {
    refine_newton(gallery("linear", 1), Vec{{0.1, 0.1}}, 1e-12, 20);
    FAIL("expected NoConvergence");
  } catch (const NoConvergence& e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
    CHECK(e.best().size() == 2);
    CHECK(e.best_grad_norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("resolution") {
  CHECK(std::isinf(resolution(std::vector<Vec>{Vec::Zero(2)})));
  CHECK(resolution(std::vector<Vec>{Vec{{0.0, 0.0}}, Vec{{0.0, 3.0}}, Vec{{4.0, 0.0}}}) == 3.0);
  const auto& e = gallery_entry("fig13a");
  const double r4 = resolution(detect(e.family(4), e.domain, e.grid_hint(4)).points);
  const double r16 = resolution(detect(e.family(16), e.domain, e.grid_hint(16)).points);
  CHECK(r16 > 0);
  CHECK(r16 < r4);
}

TEST_CASE("nearest neighbor distances") {
  const std::vector<Vec> pts{Vec{{0.0, 0.0}}, Vec{{0.0, 3.0}}, Vec{{4.0, 0.0}}, Vec{{4.0, 1.0}}};
  const auto d = nearest_neighbor_distances(pts);
  CHECK(d[0] == 3.0);
  CHECK(d[1] == 3.0);
  CHECK(d[2] == 1.0);
  CHECK(d[3] == 1.0);
}

TEST_CASE("boundary minimum gradient") {
  CHECK(boundary_min_gradient(gallery("bowl", 1), disk) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(boundary_min_gradient(gallery("linear", 1), disk) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(boundary_min_gradient(gallery("saddle", 1), disk) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("improper extrema") {
  const ScalarField cap = quadratic_field<double>(Mat::Constant(1, 1, -2.0), Vec::Zero(1), 0.0);
  CHECK(improper_extrema(cap, Domain::interval(-1, 1), 256) == ImproperCounts{1, 0});
  const ScalarField flat(2, [](const Vec&) { return 0.0; }, "0");
  CHECK(improper_extrema(flat, disk, 32) == ImproperCounts{1, 1});
  const auto& e = gallery_entry("fig10");
  CHECK(improper_extrema(e.family(16), e.domain, e.grid_hint(16)).maxima == 2);
}

TEST_CASE("improper extrema ignore lattice artifacts near anisotropic saddles") {
  const auto& e = gallery_entry("fig13b");
  const auto c = improper_extrema(e.family(64), e.domain, e.grid_hint(64));
  CHECK(c.maxima == 1);
  CHECK(c.minima == 0);
}

TEST_CASE("improper extrema reject degenerate saddles that look extremal on every line") {
  // -Peano decreases along every line through the origin, yet rises between the parabolas.
  const auto& e = gallery_entry("peano_morse");
  CHECK(improper_extrema(e.limit(), e.domain, 64) == ImproperCounts{0, 0});
  CHECK(improper_extrema(gallery("peano", 1), e.domain, 256) == ImproperCounts{0, 0});
  CHECK(improper_extrema(gallery("peak", 1), e.domain, 64) == ImproperCounts{1, 0});
}

TEST_CASE("detection output is sorted") {
  const auto& e = gallery_entry("doublewell");
  const auto a = detect(e.family(16), e.domain, 64);
  for (std::size_t i = 1; i < a.points.size(); ++i)
    CHECK(lexicographic_less(a.points[i - 1].location, a.points[i].location));
}
