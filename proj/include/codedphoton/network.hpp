#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace codedphoton {

/// Residual-phase and chip-flip noise for a decoded link.
struct NoiseModel {
  double sigma_phi = 0.0;  ///< rms residual spectral phase, rad
  double p = 0.0;          ///< per-chip sign-flip probability
  void validate() const;
};

/// Per-chip decoded amplitudes a_n of the desired user.
struct ChipAmplitudes {
  std::vector<std::complex<double>> a;

  [[nodiscard]] std::size_t length() const { return a.size(); }
  [[nodiscard]] std::complex<double> coherent_sum() const;
  [[nodiscard]] double incoherent_sum() const;
  void validate() const;

  static ChipAmplitudes flat(std::size_t n0, std::complex<double> value = 1.0);
};

/// Monte-Carlo summary. For code correlations var_c is the second moment
/// about the ensemble mean of zero, E|C|^2; elsewhere it is the sample
/// variance of the complex sample. std_error is that of mean_power.
struct CrosstalkStats {
  std::complex<double> mean_c{0.0, 0.0};
  double var_c = 0.0;
  double mean_power = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

/// e^{-sigma^2}.
double phase_noise_factor(double sigma_phi);

/// Ensemble mean of |sum a_n e^{i phi_n}|^2 / |sum a_n|^2 with i.i.d.
/// zero-mean Gaussian phases of standard deviation sigma on every chip.
CrosstalkStats phase_noise_monte_carlo(const ChipAmplitudes& chips, double sigma_phi, std::size_t trials,
                                       std::uint64_t seed, unsigned workers = 0);

/// Exact <|A|^2> = (1-2p)^2 |sum a|^2 + 4p(1-p) sum |a|^2 under independent sign flips.
double chip_flip_power(const ChipAmplitudes& chips, double p);

/// Large-N0 coherent approximation (1-2p)^2.
double chip_flip_factor(double p);

/// Sample of |sum a_n X_n|^2 with X_n = -1 with probability p, else +1.
CrosstalkStats chip_flip_monte_carlo(const ChipAmplitudes& chips, double p, std::size_t trials, std::uint64_t seed,
                                     unsigned workers = 0);

/// C_jk = (1/N0) sum X_n over i.i.d. random binary code pairs.
CrosstalkStats code_correlation_stats(std::size_t n0, std::size_t trials, std::uint64_t seed, unsigned workers = 0);

/// |sum_{k != j} I_jk|^2 with I_jk = sum a_n X_n^{(k)} over K-1 independent interferers.
CrosstalkStats interference_power(const ChipAmplitudes& chips, std::size_t users, std::size_t trials,
                                  std::uint64_t seed, unsigned workers = 0);

/// |sum a|^2 / ((K-1) sum |a|^2).
double sir(const ChipAmplitudes& chips, std::size_t users);

struct CrosstalkPoint {
  std::size_t n0 = 0;
  double mean_power = 0.0;  ///< normalized by the matched-code power
  double std_error = 0.0;
};

struct CrosstalkScaling {
  std::vector<CrosstalkPoint> points;
  double slope = 0.0;  ///< least-squares slope of log(mean_power) vs log(N0)
  double slope_stderr = 0.0;
};

/// E|\int xi e^{i(theta_j - theta_k)} chi_A d omega|^2 over random code pairs,
/// normalized by the matched-code value, for a rectangular spectrum of fixed
/// bandwidth (defaults to the optimal bandwidth) split into N0 chips.
CrosstalkScaling crosstalk_scaling(std::span<const std::size_t> n0_list, double gamma, std::size_t trials,
                                   std::uint64_t seed, double bandwidth = 0.0, unsigned workers = 0);

struct BudgetInputs {
  std::size_t users = 2;  ///< K
  std::size_t n0 = 31;
  double sigma_phi = 0.0;
  double p = 0.0;
  double w_over_gamma = 0.0;  ///< 0 selects the optimal bandwidth
  double beta = 1.0;
};

struct BudgetThresholds {
  double min_sir = 3.0;
  double max_sigma_phi = 0.3;
  double max_flip_probability = 0.05;
  double max_users_per_chip = 0.3;
};

struct RuleCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct LinkBudget {
  BudgetInputs inputs;
  double bandwidth_factor = 0.0;    ///< |M(W)|^2 / |M(W*)|^2
  double phase_noise = 0.0;         ///< e^{-sigma^2}
  double chip_flip = 0.0;           ///< (1-2p)^2
  double predicted_pe_factor = 0.0; ///< beta * product of the above
  double predicted_sir = 0.0;       ///< N0 / (K-1)
  std::vector<RuleCheck> rules;

  [[nodiscard]] bool all_pass() const;
};

LinkBudget design_report(const BudgetInputs& in, const BudgetThresholds& thresholds = {});

/// Human-readable table.
std::string format_report(const LinkBudget& budget);

}  // namespace codedphoton
