#include "critsense/error.hpp"
#include "critsense/io.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace critsense;

TEST_CASE("numbers keep 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(num(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(num(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(num(2.5).is_number());
}

TEST_CASE("dump is deterministic and keeps insertion order") {
  Json j{{"b", 1}, {"a", Json::array({0.1, 2, "x"})}, {"c", Json{{"z", true}, {"y", nullptr}}}};
  const auto s = dump(j);
  CHECK(s == dump(j));
  CHECK(s.find("\"b\"") < s.find("\"a\""));
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(s.back() == '\n');
  CHECK(Json::parse(s) == j);
}

TEST_CASE("critical points serialize with their indices") {
  const auto f = gallery("monkey", 1);
  const auto r = find_critical_points(f, Domain::ball(Vec::Zero(2), 1.0));
  const Json j = to_json(r);
  REQUIRE(j.at("points").size() == 1);
  const auto& p = j.at("points")[0];
  CHECK(p.at("hom_index") == -2);
  CHECK(p.at("classification") == "Saddle(3)");
  CHECK(p.at("morse_index").is_string());
}

TEST_CASE("half integers serialize exactly") {
  const auto r = poincare_hopf_audit(gallery("linear", 1), Domain::ball(Vec::Zero(2), 1.0));
  const Json j = to_json(r);
  CHECK(j.at("total") == 1);
  bool half = false;
  for (const auto& e : j.at("per_point"))
    if (e.at("boundary") == true) half = half || e.at("weight") == "1/2" || e.at("weight") == "-1/2";
  CHECK(half);
}

TEST_CASE("field specs") {
  const auto g = parse_field_spec(Json::parse(R"({"gallery": "fig13a", "n": 4})"));
  CHECK(g.field.value(Vec::Zero(1)) == doctest::Approx(-1.25));
  CHECK(g.domain.has_value());

  const auto lim = parse_field_spec(Json::parse(R"({"gallery": "fig10", "n": "limit"})"));
  CHECK(lim.field.dim() == 1);

  const auto sum = parse_field_spec(Json::parse(R"({
    "terms": [
      {"gaussian": {"center": [0.4, 0], "width": 0.05, "amplitude": 1}},
      {"gaussian": {"center": [-0.4, 0], "width": 0.05}},
      {"linear": [0, 0.5]},
      {"quadratic": {"A": [[2, 0], [0, 2]], "b": [0, 0], "c": 1}}
    ],
    "domain": "ball:0,0:1"})"));
  REQUIRE(sum.domain.has_value());
  CHECK(sum.domain->to_string() == Domain::parse("ball:0,0:1").to_string());
  const Vec p{{0.1, 0.2}};
  const double expect = std::exp(-(0.09 + 0.04) / 0.05) + std::exp(-(0.25 + 0.04) / 0.05) + 0.1 + 0.05 + 1;
  CHECK(sum.field.value(p) == doctest::Approx(expect).epsilon(1e-14));
  const Vec fd = central_gradient<double>(sum.field.value_fn(), p, 1e-6);
  CHECK((sum.field.gradient(p) - fd).norm() < 1e-7);

  const auto basis = parse_field_spec(Json::parse(R"({"basis": {"D": 1, "degree": 3, "decay": 2, "seed": 4}})"));
  CHECK(basis.field.value(Vec::Constant(1, 0.3)) ==
        sample_limit_field(BasisSpec{1, 3, 2.0}, 4).value(Vec::Constant(1, 0.3)));

  CHECK_THROWS_AS(parse_field_spec(Json::parse(R"({"nope": 1})")), Error);
  CHECK_THROWS_AS(parse_field_spec(Json::parse(R"({"gallery": "nope"})")), Error);
  CHECK_THROWS_AS(parse_field_spec(Json::parse(R"({"gaussian": {"center": [0], "width": -1}})")), Error);
}

TEST_CASE("monte carlo configs") {
  const auto c = parse_montecarlo_config(
      Json::parse(R"({"D": 1, "degree": 3, "decay": 2.5, "noise": 0.25, "n_list": [5, 50], "trials": 7, "seed": 9})"));
  CHECK(c.basis.degree == 3);
  CHECK(c.basis.decay == 2.5);
  CHECK(c.noise == 0.25);
  CHECK(c.n_list == std::vector<int>{5, 50});
  CHECK(c.trials == 7);
  CHECK(c.seed == 9);
  const Json back = to_json(c);
  CHECK(back.at("grid") == 512);
  CHECK(parse_montecarlo_config(back).n_list == c.n_list);
  CHECK_THROWS_AS(parse_montecarlo_config(Json::parse(R"({"trials": "many"})")), Error);
}

TEST_CASE("csv tables") {
  MonteCarloConfig c;
  c.trials = 5;
  c.n_list = {10};
  const auto csv = montecarlo_csv(monte_carlo_convergence(c));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  const auto& e = gallery_entry("fig4c");
  const auto seq = sequence_csv(convergence_experiment(e, {4, 16}, e.domain));
  // Header, one row per n and the limit row.
  CHECK(std::count(seq.begin(), seq.end(), '\n') == 4);
  CHECK(seq.find("limit") != std::string::npos);
}
