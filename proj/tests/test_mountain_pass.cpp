#include "critsense/critpoint.hpp"
#include "critsense/error.hpp"
#include "critsense/gallery.hpp"
#include "critsense/mountain_pass.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace critsense;

namespace {

const Domain disk = Domain::ball(Vec::Zero(2), 1.0);

PassResult pass_with_knots(const ScalarField& f, const Vec& p1, const Vec& p2, int knots) {
  PassOptions o;
  o.path.n_knots = knots;
  return mountain_pass_point(f, disk, p1, p2, o);
}

}  // namespace

TEST_CASE("two gaussians meet at an interior saddle") {
  const auto f = gallery("twogauss", 1);
  const Vec p1 = refine_newton(f, Vec{{0.4, 0.0}}, 1e-12);
  const Vec p2 = refine_newton(f, Vec{{-0.4, 0.0}}, 1e-12);
  const auto r = mountain_pass_point(f, disk, p1, p2);
  CHECK(r.kind == PassKind::InteriorCritical);
  CHECK(r.certified);
  CHECK(r.p3.norm() < 1e-6);
  CHECK(r.certificate <= 1e-6);
  CHECK(r.c == doctest::Approx(f.value(Vec::Zero(2))).epsilon(1e-9));
  CHECK(r.c < std::min(r.f_p1, r.f_p2));
  CHECK(r.f_p1 <= r.f_p2);
  // Grid oracle over the disk: the saddle value is the lowest pass.
  CHECK(r.c == doctest::Approx(2 * std::exp(-0.16 / 0.05)).epsilon(1e-9));
}

TEST_CASE("tilted gaussians pass through the boundary") {
  const auto f = gallery("tiltgauss", 1);
  const Vec p1 = refine_newton(f, Vec{{0.4, 0.7}}, 1e-12);
  const Vec p2 = refine_newton(f, Vec{{-0.4, 0.7}}, 1e-12);
  const auto r = mountain_pass_point(f, disk, p1, p2);
  CHECK(r.kind == PassKind::BoundaryTangency);
  CHECK(r.certified);
  CHECK(std::abs(r.p3.norm() - 1.0) <= 1e-9);
  CHECK((r.p3 - Vec{{0.0, 1.0}}).norm() < 1e-4);
  CHECK(r.certificate <= 1e-6);
  // Gradient normal to the circle and pointing out.
  CHECK(r.normal_component > 0);
  // Dense boundary oracle: lowest point of the arc between the peaks' angles (about 60 and 120 degrees).
  double lo = 1e300;
  Vec arg;
  for (int k = 0; k <= 20000; ++k) {
    const double t = 7 * M_PI / 18 + (2 * M_PI / 9) * k / 20000.0;
    const Vec s{{std::cos(t), std::sin(t)}};
    if (f.value(s) < lo) lo = f.value(s), arg = s;
  }
  CHECK((arg - r.p3).norm() < 1e-3);
  CHECK(r.c < std::min(r.f_p1, r.f_p2));
}

TEST_CASE("a single maximum fails the precondition") {
  const auto f = gallery("peak", 1);
  try {
    mountain_pass_point(f, disk, Vec::Zero(2), Vec{{0.5, 0.0}});
    FAIL("expected Precondition");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Precondition);
  }
}

TEST_CASE("minimax path values never drop") {
  // The straight segment between the tilted peaks dips low; the pass sits on the boundary.
  const auto f = gallery("tiltgauss", 1);
  const Vec p1{{0.4, 0.7}}, p2{{-0.4, 0.7}};
  const auto r = minimax_over_paths(f, disk, p1, p2);
  CHECK(r.monotone);
  REQUIRE(r.history.size() >= 2);
  CHECK(std::is_sorted(r.history.begin(), r.history.end()));
  CHECK(r.history.back() > r.history.front());
  CHECK(!r.degenerate);
  CHECK(r.path.front() == p1);
  CHECK(r.path.back() == p2);
  // Symmetric peaks: the straight segment already crosses the saddle.
  const auto g = gallery("twogauss", 1);
  const auto s = minimax_over_paths(g, disk, Vec{{0.4, 0.0}}, Vec{{-0.4, 0.0}});
  CHECK(s.monotone);
  CHECK(s.value == doctest::Approx(g.value(Vec::Zero(2))).epsilon(1e-12));
}

TEST_CASE("constant fields give degenerate paths") {
  const ScalarField flat(2, [](const Vec&) { return 3.0; }, "3");
  const auto r = minimax_over_paths(flat, disk, Vec{{0.4, 0.0}}, Vec{{-0.4, 0.0}});
  CHECK(r.value == 3.0);
  CHECK(r.degenerate);
}

TEST_CASE("knot count does not move the pass") {
  const auto f = gallery("twogauss", 1);
  const Vec p1 = refine_newton(f, Vec{{0.4, 0.0}}, 1e-12);
  const Vec p2 = refine_newton(f, Vec{{-0.4, 0.0}}, 1e-12);
  const auto one = pass_with_knots(f, p1, p2, 1);
  const auto many = pass_with_knots(f, p1, p2, 16);
  CHECK((one.p3 - many.p3).norm() < 1e-3);
  for (int k : {8, 16}) {
    CAPTURE(k);
    CHECK(std::abs(pass_with_knots(f, p1, p2, k).c - pass_with_knots(f, p1, p2, 2 * k).c) < 1e-4);
  }
  const auto g = gallery("tiltgauss", 1);
  const Vec q1 = refine_newton(g, Vec{{0.4, 0.7}}, 1e-12);
  const Vec q2 = refine_newton(g, Vec{{-0.4, 0.7}}, 1e-12);
  CHECK(std::abs(pass_with_knots(g, q1, q2, 16).c - pass_with_knots(g, q1, q2, 32).c) < 1e-4);
}

TEST_CASE("path densification") {
  const auto d = densify({Vec{{0.0, 0.0}}, Vec{{1.0, 0.0}}}, 4);
  REQUIRE(d.size() == 5);
  CHECK(d[2].isApprox(Vec{{0.5, 0.0}}));
}
