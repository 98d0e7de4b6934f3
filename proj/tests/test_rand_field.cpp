#include "critsense/critpoint.hpp"
#include "critsense/error.hpp"
#include "critsense/morse.hpp"
#include "critsense/parallel.hpp"
#include "critsense/rand_field.hpp"
#include "critsense/sequence_lab.hpp"

#include <doctest.h>

#include <cmath>

using namespace critsense;

namespace {

bool same_report(const MonteCarloReport& a, const MonteCarloReport& b) {
  if (a.rows.size() != b.rows.size() || a.trials.size() != b.trials.size()) return false;
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    const auto &x = a.rows[k], &y = b.rows[k];
    if (x.valid != y.valid || x.frequency != y.frequency || x.tv_distance != y.tv_distance ||
        x.min_r_hat != y.min_r_hat || x.mean_l != y.mean_l || x.mean_m != y.mean_m ||
        x.median_resolution_gap != y.median_resolution_gap)
      return false;
  }
  for (std::size_t t = 0; t < a.trials.size(); ++t) {
    const auto &x = a.trials[t], &y = b.trials[t];
    if (!(x.limit == y.limit) || x.r != y.r || x.m != y.m || x.l_inf != y.l_inf || x.match != y.match ||
        x.r_hat != y.r_hat)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("limit fields are reproducible") {
  const BasisSpec spec{2, 3, 2.0};
  const auto a = sample_limit_field(spec, 7, 3);
  const auto b = sample_limit_field(spec, 7, 3);
  CHECK(a.coefficients() == b.coefficients());
  CHECK(a.coefficients() != sample_limit_field(spec, 7, 4).coefficients());
  CHECK(a.coefficients() != sample_limit_field(spec, 8, 3).coefficients());
  CHECK(BasisField::basis_size(spec) == 49);
  CHECK_THROWS_AS(sample_limit_field(BasisSpec{1, 0, 2.0}, 1), Error);
}

TEST_CASE("basis derivatives agree with differences") {
  for (int dim : {1, 2, 3}) {
    CAPTURE(dim);
    const auto g = sample_limit_field(BasisSpec{dim, 3, 2.0}, 11);
    for (int k = 0; k < 5; ++k) {
      const Vec s = Vec::LinSpaced(dim, -0.7 + 0.3 * k, 0.2 + 0.1 * k);
      const auto fd = central_gradient<double>([&g](const Vec& x) { return g.value(x); }, s, 1e-5);
      CHECK((g.gradient(s) - fd).norm() <= 1e-6 * (1 + fd.norm()));
      const auto fh = central_jacobian_symmetric<double>([&g](const Vec& x) { return g.gradient(x); }, s, 1e-5);
      CHECK((g.hessian(s) - fh).norm() <= 1e-6 * (1 + fh.norm()));
    }
  }
}

TEST_CASE("degree one fields have one critical point per half period") {
  // a sin(pi x) + b cos(pi x) + c: critical points at the phase x0 and x0 + 1 only.
  const BasisSpec spec{1, 1, 2.0};
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    CAPTURE(trial);
    const auto g = sample_limit_field(spec, 99, trial);
    const double a = g.coefficients()[2], b = g.coefficients()[1];
    REQUIRE(a * a + b * b > 0);
    const double x0 = std::atan2(a, b) / M_PI;  // derivative -b sin + a cos vanishes
    const double lo = x0 - 0.5, hi = x0 + 0.5;
    const Domain half = Domain::interval(lo + 1e-3, hi - 1e-3);
    DetectorOptions o;
    o.grid_res = 256;
    const auto pts = find_critical_points(g.to_field(), half, o).points;
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].location[0] == doctest::Approx(x0).epsilon(1e-9));
  }
}

TEST_CASE("steep decay gives morse fields") {
  const BasisSpec spec{1, 5, 3.0};
  int morse = 0;
  for (std::uint64_t t = 0; t < 100; ++t)
    morse += morse_statistic(sample_limit_field(spec, 2024, t).to_field(), basis_domain(1), 512) > 0;
  CHECK(morse >= 95);
}

TEST_CASE("empirical means") {
  const BasisSpec spec{1, 4, 2.0};
  const auto g = sample_limit_field(spec, 5, 0);
  CHECK(empirical_mean_field(g, 0.0, 10).coefficients() == g.coefficients());
  // n = 1 is G + noise E_1 with E_1 fixed by G's stream.
  const Vec e1 = empirical_mean_field(g, 1.0, 1).coefficients() - g.coefficients();
  CHECK((empirical_mean_field(g, 0.5, 1).coefficients() - (g.coefficients() + 0.5 * e1)).norm() <= 1e-15);
  // Members share their prefix: 2 G_2 - G_1 - G = E_2 has the decay profile of a single draw.
  const Vec e2 = 2 * empirical_mean_field(g, 1.0, 2).coefficients() - empirical_mean_field(g, 1.0, 1).coefficients() -
                 g.coefficients();
  CHECK(e2 != e1);
  CHECK(e2.cwiseQuotient(BasisField::scales(spec)).cwiseAbs().maxCoeff() < 6);
  CHECK_THROWS_AS(empirical_mean_field(g, 0.5, 0), Error);

  const auto gf = g.to_field();
  std::vector<double> d;
  for (int n : {10, 100, 1000})
    d.push_back(ck_distance(empirical_mean_field(g, 0.5, n).to_field(), gf, basis_domain(1), 2, 2000).d2);
  CHECK(d[0] > d[1]);
  CHECK(d[1] > d[2]);
}

TEST_CASE("zero noise matches every trial") {
  MonteCarloConfig c;
  c.noise = 0;
  c.trials = 40;
  const auto r = monte_carlo_convergence(c);
  for (const auto& row : r.rows) {
    CHECK(row.frequency == 1.0);
    CHECK(row.tv_distance == 0.0);
  }
}

TEST_CASE("default experiment") {
  const auto r = monte_carlo_convergence(MonteCarloConfig{});
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].frequency <= r.rows[1].frequency);
  CHECK(r.rows[1].frequency <= r.rows[2].frequency);
  CHECK(r.rows[2].frequency >= 0.9);
  CHECK(r.rows[2].tv_distance <= r.rows[0].tv_distance);
  CHECK(r.rows[2].median_resolution_gap <= r.rows[0].median_resolution_gap);
  for (const auto& row : r.rows) {
    CHECK(row.valid + row.failed == 200);
    CHECK(row.mean_l >= 0);
    CHECK(row.mean_m >= 0);
  }
  for (const auto& t : r.trials) {
    CHECK(t.l_inf >= 0);
    CHECK(t.r >= 0);
    CHECK(t.m >= 0);
  }
}

TEST_CASE("degenerate limits match less often") {
  // sin(pi x) + cos(2 pi x)/4 has a quartic maximum at x = 1/2; sin(pi x) alone is Morse.
  MonteCarloConfig c;
  c.basis.degree = 2;
  c.fixed_coefficients = Vec{{0.0, 0.0, 1.0, 0.25, 0.0}};
  const auto low = monte_carlo_convergence(c);
  c.fixed_coefficients = Vec{{0.0, 0.0, 1.0, 0.0, 0.0}};
  const auto high = monte_carlo_convergence(c);
  for (std::size_t k = 0; k < low.rows.size(); ++k) {
    CAPTURE(low.rows[k].n);
    CHECK(low.rows[k].low_m_trials == 200);
    CHECK(high.rows[k].high_m_trials == 200);
    CHECK(low.rows[k].frequency_low_m < high.rows[k].frequency_high_m);
  }
  c.fixed_coefficients = Vec::Zero(3);
  CHECK_THROWS_AS(monte_carlo_convergence(c), Error);
}

TEST_CASE("tables do not depend on the worker count") {
  MonteCarloConfig c;
  c.trials = 60;
  set_worker_count(1);
  const auto one = monte_carlo_convergence(c);
  set_worker_count(4);
  const auto four = monte_carlo_convergence(c);
  set_worker_count(0);
  const auto again = monte_carlo_convergence(c);
  CHECK(same_report(one, four));
  CHECK(same_report(one, again));
}
