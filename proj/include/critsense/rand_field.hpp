#pragma once

#include "critsense/domain.hpp"
#include "critsense/field.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace critsense {

struct BasisSpec {
  int dim = 1;
  int degree = 4;
  double decay = 2.0;  // amplitude of frequency j scales as j^-decay
};

/// Finite sum over the tensor basis {1, cos(j pi x), sin(j pi x) : 1 <= j <= degree} per axis.
class BasisField {
 public:
  BasisField(BasisSpec spec, Vec coefficients, std::uint64_t stream);

  const BasisSpec& spec() const noexcept { return spec_; }
  const Vec& coefficients() const noexcept { return coefficients_; }
  std::uint64_t stream() const noexcept { return stream_; }

  static std::size_t basis_size(const BasisSpec& spec);
  /// Decay profile per coefficient: product over axes of max(j, 1)^-decay.
  static Vec scales(const BasisSpec& spec);

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  Mat hessian(const Vec& x) const;

  ScalarField to_field(std::string label = {}) const;

 private:
  BasisSpec spec_;
  Vec coefficients_;
  std::uint64_t stream_;

  template <int Order>
  void accumulate(const Vec& x, double& v, Vec* g, Mat* h) const;
};

/// [-1, 1]^D; one period of every basis function.
Domain basis_domain(int dim);

/// Coefficients i.i.d. standard normal times the decay profile, keyed by (seed, trial).
BasisField sample_limit_field(const BasisSpec& spec, std::uint64_t seed, std::uint64_t trial = 0);

/// G + (1/n) sum_{i=1..n} E_i, with E_i noise times an independent draw of the same law.
/// The E_i stream continues G's stream, so members for different n share their first terms.
BasisField empirical_mean_field(const BasisField& g, double noise, int n);

struct MonteCarloConfig {
  BasisSpec basis;
  double noise = 0.5;
  std::vector<int> n_list = {10, 100, 1000};
  int trials = 200;
  std::uint64_t seed = 20240601;
  int grid = 0;  // 0: 512 / 64 / 16 for D = 1 / 2 / 3
  double l_tol = 1e-4;
  double r_tol = 1e-3;
  double m_tol = 1e-6;
  double delta = 1e-3;  // tail threshold for R_hat_n
  // Nonempty: G has these coefficients in every trial and only the noise varies.
  Vec fixed_coefficients;
};

int default_mc_grid(int dim);

struct TripleCounts {
  int n_c = 0;
  int n_max = 0;
  int n_min = 0;
  int n_saddle = 0;
  bool operator==(const TripleCounts& o) const {
    return n_max == o.n_max && n_min == o.n_min && n_saddle == o.n_saddle;
  }
};

struct TrialRecord {
  int trial = 0;
  TripleCounts limit;
  double l_inf = 0;
  double r = 0;
  double m = 0;
  bool hypotheses = false;
  std::vector<TripleCounts> counts;  // per n
  std::vector<double> r_hat;         // per n
  std::vector<bool> match;           // per n
  std::string error;
};

struct MonteCarloRow {
  int n = 0;
  int valid = 0;
  int failed = 0;
  double frequency = 0;
  int hyp_trials = 0;
  double frequency_hyp = 0;
  double frequency_nonhyp = 0;
  int low_m_trials = 0;   // M < 1e-4
  double frequency_low_m = 0;
  int high_m_trials = 0;  // M > 1e-2
  double frequency_high_m = 0;
  double tv_distance = 0;  // between the laws of N_M(G_hat_n) and N_M(G)
  double median_resolution_gap = 0;
  double tail_probability = 0;  // P[R_hat_n < delta]
  double min_r_hat = 0;
  double mean_l = 0;
  double mean_m = 0;
};

struct MonteCarloReport {
  MonteCarloConfig config;
  std::vector<MonteCarloRow> rows;
  std::vector<TrialRecord> trials;
};

MonteCarloReport monte_carlo_convergence(const MonteCarloConfig& config);

}  // namespace critsense
