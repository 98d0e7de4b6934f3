#include "critsense/critpoint.hpp"
#include "critsense/error.hpp"
#include "critsense/gallery.hpp"
#include "critsense/morse.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace critsense;

namespace {

const Domain disk = Domain::ball(Vec::Zero(2), 1.0);

double residual(const ScalarField& f, const FlowChart& c, const Vec& x) {
  const Vec g = morse_flow_map(f, c, x);
  const Vec d = x - c.center;
  return std::abs(f.value(g) - c.center_value - 0.5 * d.dot(c.h * d));
}

}  // namespace

TEST_CASE("morse index and degeneracy") {
  const Vec o = Vec::Zero(2);
  CHECK(morse_classify(gallery("bowl", 1), o) == 0);
  CHECK(morse_classify(gallery("saddle", 1), o) == 1);
  CHECK(morse_classify(gallery("peak", 1), o) == 2);
  CHECK(!morse_classify(gallery("monkey", 1), o).has_value());
  CHECK(!morse_index_of(Mat::Zero(2, 2)).has_value());
  CHECK(morse_index_of(Vec{{-3.0, -1.0, 2.0}}.asDiagonal().toDenseMatrix()) == 2);
}

TEST_CASE("morse statistic") {
  CHECK(morse_statistic(gallery("bowl", 1), disk, 64) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(morse_statistic(gallery("linear", 1), disk, 64) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(morse_statistic(gallery("peano", 1), Domain::ball(Vec::Zero(2), 0.5), 64) < 1e-3);
  CHECK(morse_statistic(gallery("monkey", 1), disk, 64) < 1e-12);
}

TEST_CASE("chart constants for m = 1/2") {
  const auto id = morse_constants(Mat::Identity(3, 3));
  CHECK(id.k1 == doctest::Approx(std::log(2.0) / 24).epsilon(1e-14));
  CHECK(id.k1 == doctest::Approx(0.0288811).epsilon(1e-6));
  CHECK(id.k2 == doctest::Approx(0.125).epsilon(1e-14));
  const auto d = morse_constants(Vec{{2.0, -1.0}}.asDiagonal().toDenseMatrix());
  CHECK(d.norm_h == doctest::Approx(2.0));
  CHECK(d.norm_h_inv == doctest::Approx(1.0));
  CHECK(d.k1 == doctest::Approx(std::log(2.0) / 48).epsilon(1e-14));
  CHECK(d.k1 == doctest::Approx(0.0144406).epsilon(1e-6));
  CHECK(d.k2 == doctest::Approx(1.0 / 16).epsilon(1e-14));
  try {
    morse_constants(Mat::Zero(2, 2));
    FAIL("expected NotMorse");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotMorse);
  }
}

TEST_CASE("chart constants for general m") {
  const auto a = morse_constants(Mat::Identity(2, 2), 0.25);
  CHECK(a.k1 == doctest::Approx(std::min(0.75, 0.0625 * std::log(2.0) / 6)).epsilon(1e-14));
  CHECK(a.k2 == doctest::Approx(0.0625).epsilon(1e-14));
  // m = 1/2 through the general formula agrees with the specialized one.
  const auto h = morse_constants(Mat::Identity(2, 2), 0.5);
  CHECK(h.k1 == doctest::Approx(std::log(2.0) / 24).epsilon(1e-14));
}

TEST_CASE("quadratic fields give the identity chart") {
  for (const char* name : {"bowl", "saddle", "peak"}) {
    CAPTURE(name);
    const auto f = gallery(name, 1);
    RadiusOptions o;
    o.search_cap = 1.0;
    auto chart = morse_chart(f, Vec::Zero(2), o);
    CHECK(chart.r == doctest::Approx(chart.constants.k2).epsilon(1e-12));
    CHECK(chart.r < chart.constants.k2);
    for (const auto& x : ball_samples(2, chart.r, 100)) CHECK((morse_flow_map(f, chart, x) - x).norm() <= 1e-12);
    const auto rep = verify_morse_chart(f, chart);
    CHECK(rep.residual_sup <= 1e-12);
    CHECK(rep.bilip_lo == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.bilip_hi == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.within_bounds);
  }
}

TEST_CASE("cubic perturbation in one dimension") {
  const auto f = gallery("cubic1d", 1);
  auto chart = morse_chart(f, Vec::Zero(1));
  REQUIRE(chart.r >= 0.01);
  CHECK(residual(f, chart, Vec::Constant(1, 0.01)) <= 1e-8);
  // Root-finding oracle: the chart image solves f(g) = x^2/2 on the branch through x.
  const double x = 0.01;
  double lo = 0, hi = 0.02;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f.value(Vec::Constant(1, mid)) < 0.5 * x * x ? lo : hi) = mid;
  }
  CHECK(morse_flow_map(f, chart, Vec::Constant(1, x))[0] == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-9));
  const auto rep = verify_morse_chart(f, chart);
  CHECK(rep.residual_sup <= 1e-8);
  CHECK(rep.bilip_lo >= 0.9);
  CHECK(rep.bilip_hi <= 1.1);
  CHECK(rep.within_bounds);
}

TEST_CASE("cubic perturbation in two dimensions") {
  const auto f = gallery("cubic2d", 1);
  auto chart = morse_chart(f, Vec::Zero(2));
  const auto rep = verify_morse_chart(f, chart);
  CHECK(rep.residual_sup <= 1e-6);
  CHECK(rep.within_bounds);
  // Halving the step moves the image by far less than the residual budget.
  for (const auto& x : ball_samples(2, chart.r, 20)) {
    const Vec a = morse_flow_map(f, chart, x, 1e-3);
    const Vec b = morse_flow_map(f, chart, x, 5e-4);
    CHECK((a - b).norm() < 1e-9);
  }
}

TEST_CASE("fig13b saddle far from the bump is a pure saddle chart") {
  const auto f = gallery("fig13b", 64);
  const auto& e = gallery_entry("fig13b");
  // Near the origin f_64 and the limit agree; the bump sits about 1/64 away.
  const auto pts = find_critical_points(f, e.domain, {.grid_res = e.grid_hint(64)}).points;
  const CriticalPoint* saddle = nullptr;
  for (const auto& p : pts)
    if (p.classification.kind == PointKind::Saddle && p.location.norm() < 0.05 &&
        (saddle == nullptr || p.location.norm() < saddle->location.norm()))
      saddle = &p;
  REQUIRE(saddle != nullptr);
  auto chart = morse_chart(f, saddle->location);
  const auto rep = verify_morse_chart(f, chart);
  CHECK(rep.residual_sup <= 1e-8);
}

TEST_CASE("flow pair distances") {
  const auto f = gallery("cubic2d", 1);
  const auto chart = morse_chart(f, Vec::Zero(2));
  CHECK(flow_pair_distance(f, f, chart, chart, chart.r) <= 1e-12);

  const auto& e = gallery_entry("quadcubic");
  const auto lim = e.limit();
  const auto lc = morse_chart(lim, Vec::Zero(2));
  // One ball shared by every member so the sups are comparable.
  std::vector<FlowChart> charts;
  double shared = lc.r;
  for (int n : {4, 16, 64}) {
    const auto fn = e.family(n);
    charts.push_back(morse_chart(fn, refine_newton(fn, Vec::Zero(2), 1e-12)));
    shared = std::min(shared, charts.back().r);
  }
  std::vector<double> d;
  for (int i = 0; i < 3; ++i) d.push_back(flow_pair_distance(e.family(4 << (2 * i)), lim, charts[i], lc, shared));
  CHECK(d[0] > d[1]);
  CHECK(d[1] > d[2]);

  // Critical point shifted by 1/n: recentering leaves only the integrator noise.
  const auto saddle = gallery("saddle", 1);
  const auto sc = morse_chart(saddle, Vec::Zero(2));
  for (int n : {4, 16, 64}) {
    const Vec shift = Vec::Constant(2, 1.0 / n);
    const auto sn = translated(saddle, shift);
    const auto cn = morse_chart(sn, shift);
    CHECK(flow_pair_distance(sn, saddle, cn, sc, std::min(sc.r, cn.r)) <= 1e-12);
  }
}

TEST_CASE("flow trajectories end at the flow map") {
  const auto f = gallery("cubic1d", 1);
  const auto chart = morse_chart(f, Vec::Zero(1));
  const Vec x = Vec::Constant(1, 0.5 * chart.r);
  const auto traj = morse_flow_trajectory(f, chart, x);
  REQUIRE(!traj.empty());
  CHECK(traj.front().first == 0.0);
  CHECK(traj.back().first == doctest::Approx(1.0));
  CHECK((traj.back().second - morse_flow_map(f, chart, x)).norm() < 1e-15);
}
