// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "critsense/critpoint.hpp"
#include "critsense/gallery.hpp"
#include "critsense/hom_index.hpp"
#include "critsense/io.hpp"
#include "critsense/morse.hpp"
#include "critsense/mountain_pass.hpp"
#include "critsense/parallel.hpp"
#include "critsense/rand_field.hpp"
#include "critsense/random.hpp"
#include "critsense/sequence_lab.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace critsense;

namespace {

const Domain disk = Domain::ball(Vec::Zero(2), 1.0);
const std::vector<int> kN = {16, 64, 256};

struct Outcome {
  bool ok = true;
  std::ostringstream why;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) why << "; ";
      why << what;
      ok = false;
    }
  }
};

int failures = 0;

void run(int k, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("threw: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s criterion %d: %s (%.1f s)%s%s\n", o.ok ? "PASS" : "FAIL", k, title, secs, o.ok ? "" : " -- ",
              o.ok ? "" : o.why.str().c_str());
  std::fflush(stdout);
  failures += !o.ok;
}

// count_report per (family, n), shared between criteria 7 and 11.
const Counts& counts_of(const std::string& name, int n) {
  static std::map<std::pair<std::string, int>, Counts> cache;
  const auto key = std::make_pair(name, n);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const auto& e = gallery_entry(name);
  DetectorOptions o;
  o.grid_res = e.grid_hint(n);
  return cache.emplace(key, count_report(e.family(n), e.domain, o)).first->second;
}

const Counts& limit_counts_of(const std::string& name) {
  static std::map<std::string, Counts> cache;
  if (auto it = cache.find(name); it != cache.end()) return it->second;
  const auto& e = gallery_entry(name);
  DetectorOptions o;
  o.grid_res = e.grid_hint(kN.back());
  return cache.emplace(name, count_report(e.limit(), e.domain, o)).first->second;
}

std::string tag(const std::string& name, int n) { return name + " n=" + std::to_string(n); }

}  // namespace

int main() {
  run(1, "winding index table", [](Outcome& o) {
    const std::vector<std::pair<const char*, int>> table = {
        {"bowl", 1}, {"peak", 1}, {"undulation", 0}, {"saddle", -1}, {"monkey", -2}};
    for (double eps : {0.1, 0.05})
      for (const auto& [name, want] : table) {
        const int got = winding_index_2d(gallery(name, 1), Vec::Zero(2), eps);
        o.require(got == want, std::string(name) + " eps=" + std::to_string(eps) + " gave " + std::to_string(got));
      }
  });

  run(2, "Poincare-Hopf audits", [](Outcome& o) {
    for (const char* name : {"bowl", "peak", "saddle", "monkey", "undulation", "linear"}) {
      const auto r = poincare_hopf_audit(gallery(name, 1), disk);
      o.require(r.pass && r.total == HalfInteger::from_int(1), std::string(name) + " total " + r.total.to_string());
      if (std::string(name) == "bowl") o.require(r.boundary_perturbed, "bowl boundary not perturbed");
    }
    const auto sq = quadratic_field<double>(Mat::Constant(1, 1, 2.0), Vec::Zero(1), 0.0);
    const auto line = poincare_hopf_audit(sq, Domain::interval(-1, 1));
    o.require(line.pass && line.total == HalfInteger::from_int(0), "x^2 on interval total " + line.total.to_string());
    const auto ball = poincare_hopf_audit(gallery("bowl3", 1), Domain::ball(Vec::Zero(3), 1.0));
    o.require(ball.pass && ball.total == HalfInteger::from_int(0), "bowl3 total " + ball.total.to_string());
  });

  run(3, "degree equals sign of the Hessian determinant", [](Outcome& o) {
    int agree = 0, drawn = 0;
    for (std::uint64_t k = 0; drawn < 50; ++k) {
      Mat a(2, 2);
      for (int i = 0; i < 4; ++i) a(i / 2, i % 2) = standard_normal(hash_key({0xdecaf, k, static_cast<std::uint64_t>(i)}));
      const Mat h = (a + a.transpose()) / 2;
      if (std::abs(h.determinant()) < 1e-3) continue;  // keep the draws clearly nondegenerate
      ++drawn;
      const auto f = quadratic_field<double>(h, Vec::Zero(2), 0.0);
      const int want = h.determinant() > 0 ? 1 : -1;
      agree += winding_index_2d(f, Vec::Zero(2), 0.5) == want;
    }
    o.require(agree == 50, std::to_string(agree) + "/50 agree");
  });

  run(4, "Morse constants for m = 1/2", [](Outcome& o) {
    const auto id = morse_constants(Mat::Identity(2, 2));
    o.require(std::abs(id.k1 - std::log(2.0) / 24) <= 1e-12, "identity K1");
    o.require(std::abs(id.k2 - 0.125) <= 1e-12, "identity K2");
    const auto d = morse_constants(Vec{{2.0, -1.0}}.asDiagonal().toDenseMatrix());
    o.require(std::abs(d.k1 - std::log(2.0) / 48) <= 1e-12, "diag(2,-1) K1");
    o.require(std::abs(d.k2 - 1.0 / 16) <= 1e-12, "diag(2,-1) K2");
  });

  run(5, "Morse flow residuals", [](Outcome& o) {
    for (const char* name : {"bowl", "saddle"}) {
      const auto f = gallery(name, 1);
      const auto chart = morse_chart(f, Vec::Zero(2));
      double worst = 0;
      for (const auto& x : ball_samples(2, chart.r, 100)) worst = std::max(worst, (morse_flow_map(f, chart, x) - x).norm());
      o.require(worst <= 1e-12, std::string(name) + " identity error " + format_double(worst));
    }
    for (const char* name : {"cubic1d", "cubic2d"}) {
      const auto f = gallery(name, 1);
      auto chart = morse_chart(f, Vec::Zero(f.dim()));
      chart.ode_step = 1e-3;
      const auto rep = verify_morse_chart(f, chart, 100);
      o.require(rep.residual_sup <= 1e-6, std::string(name) + " residual " + format_double(rep.residual_sup));
      double halving = 0;
      for (const auto& x : ball_samples(f.dim(), chart.r, 100))
        halving = std::max(halving, (morse_flow_map(f, chart, x, 1e-3) - morse_flow_map(f, chart, x, 5e-4)).norm());
      o.require(halving < 1e-9, std::string(name) + " step halving " + format_double(halving));
    }
  });

  run(6, "flow-pair convergence", [](Outcome& o) {
    const auto& e = gallery_entry("quadcubic");
    const auto lim = e.limit();
    const auto lc = morse_chart(lim, Vec::Zero(2));
    std::vector<FlowChart> charts;
    double shared = lc.r;
    for (int n : {4, 16, 64}) {
      const auto fn = e.family(n);
      charts.push_back(morse_chart(fn, refine_newton(fn, Vec::Zero(2), 1e-12)));
      shared = std::min(shared, charts.back().r);
    }
    std::vector<double> d;
    for (int i = 0; i < 3; ++i) d.push_back(flow_pair_distance(e.family(4 << (2 * i)), lim, charts[i], lc, shared));
    o.require(d[0] > d[1] && d[1] > d[2],
              "distances " + format_double(d[0]) + ", " + format_double(d[1]) + ", " + format_double(d[2]));
  });

  run(7, "counterexample regressions", [](Outcome& o) {
    const auto& f10 = limit_counts_of("fig10");
    o.require(f10.n_max == 1, "fig10 limit N_M " + std::to_string(f10.n_max));
    const auto& e10 = gallery_entry("fig10");
    double prev = 0;
    for (int n : kN) {
      const auto& c = counts_of("fig10", n);
      o.require(c.n_max == 2, tag("fig10", n) + " N_M " + std::to_string(c.n_max));
      DetectorOptions opt;
      opt.grid_res = e10.grid_hint(n);
      const double r = resolution(find_critical_points(e10.family(n), e10.domain, opt).points);
      if (n != kN.front()) o.require(r <= prev / 2, tag("fig10", n) + " resolution " + format_double(r));
      prev = r;
    }
    for (const char* name : {"fig13a", "fig13b"}) {
      const int limit_max = limit_counts_of(name).n_max;
      for (int n : kN) {
        const auto& c = counts_of(name, n);
        o.require(c.n_max > limit_max, tag(name, n) + " N_M " + std::to_string(c.n_max) + " vs limit " +
                                           std::to_string(limit_max));
      }
    }
    o.require(limit_counts_of("fig4c").n_c == 1, "fig4c limit N_C");
    for (int n : kN) {
      const auto& c = counts_of("fig4c", n);
      o.require(c.n_c == 2, tag("fig4c", n) + " N_C " + std::to_string(c.n_c));
    }
  });

  run(8, "positive convergence case", [](Outcome& o) {
    const auto& e = gallery_entry("doublewell");
    const auto r = convergence_experiment(e, kN, e.domain);
    const auto& l = r.limit_counts;
    o.require(e.dim == 2 && l.n_c == 3, "limit N_C " + std::to_string(l.n_c));
    for (const auto& row : r.rows) {
      const auto& c = row.counts;
      const bool same = c.n_c == l.n_c && c.n_max == l.n_max && c.n_min == l.n_min && c.n_saddle == l.n_saddle &&
                        c.morse == l.morse && c.hom == l.hom;
      o.require(same, tag("doublewell", row.n) + " counts differ");
      o.require(row.matching.bijection, tag("doublewell", row.n) + " no bijection");
      for (const auto& p : row.matching.pairs)
        o.require(p.distance < 0.1, tag("doublewell", row.n) + " pair distance " + format_double(p.distance));
    }
  });

  run(9, "mountain pass", [](Outcome& o) {
    const auto f = gallery("twogauss", 1);
    const auto r = mountain_pass_point(f, disk, refine_newton(f, Vec{{0.4, 0.0}}, 1e-12),
                                       refine_newton(f, Vec{{-0.4, 0.0}}, 1e-12));
    o.require(r.kind == PassKind::InteriorCritical, "twogauss kind");
    o.require(r.p3.norm() <= 1e-3, "twogauss p3 " + format_double(r.p3.norm()));
    o.require(r.certificate <= 1e-6, "twogauss grad " + format_double(r.certificate));
    o.require(r.c < r.f_p1, "twogauss c >= f(p1)");
    const auto g = gallery("tiltgauss", 1);
    const auto b = mountain_pass_point(g, disk, refine_newton(g, Vec{{0.4, 0.7}}, 1e-12),
                                       refine_newton(g, Vec{{-0.4, 0.7}}, 1e-12));
    o.require(b.kind == PassKind::BoundaryTangency, "tiltgauss kind");
    o.require(b.certificate <= 1e-6, "tiltgauss tangential " + format_double(b.certificate));
  });

  run(10, "Monte Carlo match frequencies", [](Outcome& o) {
    const MonteCarloConfig c;
    const auto r = monte_carlo_convergence(c);
    std::string freq;
    for (const auto& row : r.rows) freq += " " + format_double(row.frequency);
    o.require(r.rows[0].frequency <= r.rows[1].frequency && r.rows[1].frequency <= r.rows[2].frequency,
              "not nondecreasing:" + freq);
    o.require(r.rows[2].frequency >= 0.9, "n=1000 frequency" + freq);
    const std::string text = dump(to_json(r));
    o.require(dump(to_json(monte_carlo_convergence(c))) == text, "second run differs");
    set_worker_count(1);
    const std::string one = dump(to_json(monte_carlo_convergence(c)));
    set_worker_count(4);
    const std::string four = dump(to_json(monte_carlo_convergence(c)));
    set_worker_count(0);
    o.require(one == text && four == text, "table depends on the worker count");
  });

  run(11, "improper extrema bound", [](Outcome& o) {
    for (const auto& e : gallery_catalogue()) {
      if (e.convergence == "exact") continue;
      const auto& l = limit_counts_of(e.name).improper;
      for (int n : kN) {
        const auto& c = counts_of(e.name, n).improper;
        o.require(c.maxima >= l.maxima && c.minima >= l.minima,
                  tag(e.name, n) + " IM/Im " + std::to_string(c.maxima) + "/" + std::to_string(c.minima) +
                      " vs limit " + std::to_string(l.maxima) + "/" + std::to_string(l.minima));
      }
    }
  });

  return failures == 0 ? 0 : 1;
}
