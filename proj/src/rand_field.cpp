#include "critsense/rand_field.hpp"

#include "critsense/critpoint.hpp"
#include "critsense/error.hpp"
#include "critsense/morse.hpp"
#include "critsense/parallel.hpp"
#include "critsense/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>

namespace critsense {

namespace {

// Local basis index a: 0 -> 1, 2j-1 -> cos(j pi x), 2j -> sin(j pi x).
struct Axis1d {
  std::vector<double> v, d1, d2;
};

Axis1d axis_values(int degree, double x) {
  const int b = 2 * degree + 1;
  Axis1d out{std::vector<double>(b), std::vector<double>(b), std::vector<double>(b)};
  out.v[0] = 1;
  for (int j = 1; j <= degree; ++j) {
    const double w = j * std::numbers::pi;
    const double c = std::cos(w * x), s = std::sin(w * x);
    out.v[2 * j - 1] = c;
    out.d1[2 * j - 1] = -w * s;
    out.d2[2 * j - 1] = -w * w * c;
    out.v[2 * j] = s;
    out.d1[2 * j] = w * c;
    out.d2[2 * j] = -w * w * s;
  }
  return out;
}

}  // namespace

BasisField::BasisField(BasisSpec spec, Vec coefficients, std::uint64_t stream)
    : spec_(spec), coefficients_(std::move(coefficients)), stream_(stream) {
  if (spec_.dim < 1) throw Error(ErrorCode::Usage, "basis dimension must be at least 1");
  if (spec_.degree < 1) throw Error(ErrorCode::Usage, "basis degree must be at least 1");
  if (static_cast<std::size_t>(coefficients_.size()) != basis_size(spec_))
    throw Error(ErrorCode::Usage, "coefficient count does not match the basis");
}

std::size_t BasisField::basis_size(const BasisSpec& spec) {
  std::size_t n = 1;
  for (int k = 0; k < spec.dim; ++k) n *= static_cast<std::size_t>(2 * spec.degree + 1);
  return n;
}

Vec BasisField::scales(const BasisSpec& spec) {
  const std::size_t n = basis_size(spec);
  const std::size_t b = static_cast<std::size_t>(2 * spec.degree + 1);
  Vec out(static_cast<Eigen::Index>(n));
  for (std::size_t m = 0; m < n; ++m) {
    double s = 1;
    std::size_t rest = m;
    for (int k = 0; k < spec.dim; ++k) {
      const auto a = static_cast<int>(rest % b);
      rest /= b;
      const int j = (a + 1) / 2;
      s *= std::pow(static_cast<double>(std::max(j, 1)), -spec.decay);
    }
    out[static_cast<Eigen::Index>(m)] = s;
  }
  return out;
}

template <int Order>
void BasisField::accumulate(const Vec& x, double& v, Vec* g, Mat* h) const {
  const int d = spec_.dim;
  if (x.size() != d) throw Error(ErrorCode::Usage, "point dimension does not match the basis field");
  std::vector<Axis1d> axes;
  axes.reserve(d);
  for (int k = 0; k < d; ++k) axes.push_back(axis_values(spec_.degree, x[k]));
  const std::size_t b = static_cast<std::size_t>(2 * spec_.degree + 1);
  std::vector<int> idx(d);
  v = 0;
  if constexpr (Order >= 1) g->setZero(d);
  if constexpr (Order >= 2) h->setZero(d, d);
  for (Eigen::Index m = 0; m < coefficients_.size(); ++m) {
    const double c = coefficients_[m];
    if (c == 0) continue;
    std::size_t rest = static_cast<std::size_t>(m);
    for (int k = 0; k < d; ++k) {
      idx[k] = static_cast<int>(rest % b);
      rest /= b;
    }
    auto product = [&](int da, int db) {
      // Product over axes with derivative order bumped on axes da and db (may coincide).
      double p = c;
      for (int k = 0; k < d; ++k) {
        const int order = (k == da) + (k == db);
        const auto& ax = axes[k];
        p *= order == 0 ? ax.v[idx[k]] : order == 1 ? ax.d1[idx[k]] : ax.d2[idx[k]];
      }
      return p;
    };
    v += product(-1, -1);
    if constexpr (Order >= 1)
      for (int k = 0; k < d; ++k) (*g)[k] += product(k, -1);
    if constexpr (Order >= 2)
      for (int k = 0; k < d; ++k)
        for (int l = k; l < d; ++l) (*h)(k, l) += product(k, l);
  }
  if constexpr (Order >= 2)
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < k; ++l) (*h)(k, l) = (*h)(l, k);
}

double BasisField::value(const Vec& x) const {
  double v;
  accumulate<0>(x, v, nullptr, nullptr);
  return v;
}

Vec BasisField::gradient(const Vec& x) const {
  double v;
  Vec g;
  accumulate<1>(x, v, &g, nullptr);
  return g;
}

Mat BasisField::hessian(const Vec& x) const {
  double v;
  Vec g;
  Mat h;
  accumulate<2>(x, v, &g, &h);
  return h;
}

ScalarField BasisField::to_field(std::string label) const {
  if (label.empty()) {
    std::ostringstream os;
    os << "basis(D=" << spec_.dim << ",degree=" << spec_.degree << ",stream=" << std::hex << stream_ << ")";
    label = os.str();
  }
  auto self = std::make_shared<const BasisField>(*this);
  return ScalarField(spec_.dim, [self](const Vec& x) { return self->value(x); }, std::move(label))
      .with_gradient([self](const Vec& x) { return self->gradient(x); })
      .with_hessian([self](const Vec& x) { return self->hessian(x); });
}

Domain basis_domain(int dim) {
  if (dim == 1) return Domain::interval(-1, 1);
  return Domain::box(Vec::Constant(dim, -1.0), Vec::Constant(dim, 1.0));
}

namespace {

Vec draw(const BasisSpec& spec, std::uint64_t stream, std::uint64_t draw_id) {
  const Vec s = BasisField::scales(spec);
  Vec c(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k)
    c[k] = s[k] * standard_normal(hash_key({stream, draw_id, static_cast<std::uint64_t>(k)}));
  return c;
}

}  // namespace

BasisField sample_limit_field(const BasisSpec& spec, std::uint64_t seed, std::uint64_t trial) {
  if (spec.degree < 1) throw Error(ErrorCode::Usage, "basis degree must be at least 1");
  const std::uint64_t stream = hash_key({seed, trial});
  return BasisField(spec, draw(spec, stream, 0), stream);
}

BasisField empirical_mean_field(const BasisField& g, double noise, int n) {
  if (n < 1) throw Error(ErrorCode::Usage, "n must be at least 1");
  Vec sum = Vec::Zero(g.coefficients().size());
  if (noise != 0)
    for (int i = 1; i <= n; ++i) sum += draw(g.spec(), g.stream(), static_cast<std::uint64_t>(i));
  return BasisField(g.spec(), g.coefficients() + (noise / n) * sum, g.stream());
}

int default_mc_grid(int dim) {
  switch (dim) {
    case 1: return 512;
    case 2: return 64;
    default: return 16;
  }
}

namespace {

struct Detected {
  TripleCounts counts;
  double resolution;
};

Detected detect(const ScalarField& f, const Domain& domain, int grid) {
  DetectorOptions opts;
  opts.grid_res = grid;
  const auto result = find_critical_points(f, domain, opts);
  Detected d{{}, resolution(result.points)};
  for (const auto& p : result.points) {
    ++d.counts.n_c;
    if (p.classification.kind == PointKind::Max) ++d.counts.n_max;
    if (p.classification.kind == PointKind::Min) ++d.counts.n_min;
    if (p.classification.kind == PointKind::Saddle) ++d.counts.n_saddle;
  }
  return d;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  if (v.size() % 2 == 1) return v[h];
  if (std::isinf(v[h - 1]) || std::isinf(v[h])) return v[h];
  return 0.5 * (v[h - 1] + v[h]);
}

double gap(double a, double b) {
  if (std::isinf(a) && std::isinf(b)) return 0;
  return std::abs(a - b);
}

}  // namespace

MonteCarloReport monte_carlo_convergence(const MonteCarloConfig& config) {
  if (config.trials < 1) throw Error(ErrorCode::Usage, "trials must be at least 1");
  if (config.n_list.empty()) throw Error(ErrorCode::Usage, "n_list must not be empty");
  for (int n : config.n_list)
    if (n < 1) throw Error(ErrorCode::Usage, "every n must be at least 1");
  MonteCarloReport report;
  report.config = config;
  const Domain domain = basis_domain(config.basis.dim);
  const int grid = config.grid > 0 ? config.grid : default_mc_grid(config.basis.dim);
  const std::size_t nn = config.n_list.size();
  const bool fixed = config.fixed_coefficients.size() > 0;
  if (fixed && static_cast<std::size_t>(config.fixed_coefficients.size()) != BasisField::basis_size(config.basis))
    throw Error(ErrorCode::Usage, "fixed_coefficients must have " + std::to_string(BasisField::basis_size(config.basis)) +
                                      " entries");

  report.trials.resize(static_cast<std::size_t>(config.trials));
  parallel_for(report.trials.size(), [&](std::size_t t) {
    auto& rec = report.trials[t];
    rec.trial = static_cast<int>(t);
    try {
      const BasisField g = fixed ? BasisField(config.basis, config.fixed_coefficients, hash_key({config.seed, t}))
                                 : sample_limit_field(config.basis, config.seed, t);
      const ScalarField gf = g.to_field();
      const auto limit = detect(gf, domain, grid);
      rec.limit = limit.counts;
      rec.r = limit.resolution;
      rec.l_inf = boundary_min_gradient(gf, domain);
      rec.m = morse_statistic(gf, domain, grid);
      rec.hypotheses = rec.l_inf > config.l_tol && rec.r > config.r_tol && rec.m > config.m_tol;
      for (int n : config.n_list) {
        const auto hat = detect(empirical_mean_field(g, config.noise, n).to_field(), domain, grid);
        rec.counts.push_back(hat.counts);
        rec.r_hat.push_back(hat.resolution);
        rec.match.push_back(hat.counts == rec.limit);
      }
    } catch (const Error& e) {
      rec.error = std::string(to_string(e.code())) + ": " + e.what();
      rec.counts.clear();
      rec.r_hat.clear();
      rec.match.clear();
    }
  });

  for (std::size_t k = 0; k < nn; ++k) {
    MonteCarloRow row;
    row.n = config.n_list[k];
    int matches = 0, hyp_matches = 0, nonhyp_matches = 0, low_matches = 0, high_matches = 0, tail = 0;
    std::map<int, int> law_hat, law_limit;
    std::vector<double> gaps;
    double sum_l = 0, sum_m = 0;
    row.min_r_hat = std::numeric_limits<double>::infinity();
    for (const auto& rec : report.trials) {
      if (!rec.error.empty()) {
        ++row.failed;
        continue;
      }
      ++row.valid;
      const bool match = rec.match[k];
      matches += match;
      if (rec.hypotheses) {
        ++row.hyp_trials;
        hyp_matches += match;
      } else {
        nonhyp_matches += match;
      }
      if (rec.m < 1e-4) {
        ++row.low_m_trials;
        low_matches += match;
      }
      if (rec.m > 1e-2) {
        ++row.high_m_trials;
        high_matches += match;
      }
      ++law_hat[rec.counts[k].n_max];
      ++law_limit[rec.limit.n_max];
      gaps.push_back(gap(rec.r_hat[k], rec.r));
      tail += rec.r_hat[k] < config.delta;
      row.min_r_hat = std::min(row.min_r_hat, rec.r_hat[k]);
      sum_l += rec.l_inf;
      sum_m += rec.m;
    }
    auto ratio = [](int a, int b) { return b > 0 ? static_cast<double>(a) / b : std::numeric_limits<double>::quiet_NaN(); };
    row.frequency = ratio(matches, row.valid);
    row.frequency_hyp = ratio(hyp_matches, row.hyp_trials);
    row.frequency_nonhyp = ratio(nonhyp_matches, row.valid - row.hyp_trials);
    row.frequency_low_m = ratio(low_matches, row.low_m_trials);
    row.frequency_high_m = ratio(high_matches, row.high_m_trials);
    double tv = 0;
    for (const auto& [value, count] : law_hat) {
      const auto it = law_limit.find(value);
      tv += std::abs(count - (it == law_limit.end() ? 0 : it->second));
    }
    for (const auto& [value, count] : law_limit)
      if (!law_hat.count(value)) tv += count;
    row.tv_distance = row.valid > 0 ? 0.5 * tv / row.valid : 0.0;
    row.median_resolution_gap = median(gaps);
    row.tail_probability = ratio(tail, row.valid);
    row.mean_l = row.valid > 0 ? sum_l / row.valid : 0.0;
    row.mean_m = row.valid > 0 ? sum_m / row.valid : 0.0;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace critsense
