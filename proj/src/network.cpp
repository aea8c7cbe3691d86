#include "codedphoton/network.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "codedphoton/ensemble.hpp"
#include "codedphoton/error.hpp"
#include "codedphoton/overlap.hpp"
#include "codedphoton/random.hpp"

namespace codedphoton {

namespace {

using cplx = std::complex<double>;

constexpr std::size_t kMinCorrelationTrials = 100;

CrosstalkStats summarize(const std::vector<cplx>& samples, double power_scale = 1.0) {
  CrosstalkStats s;
  s.trials = samples.size();
  if (samples.empty()) return s;
  const auto n = static_cast<double>(samples.size());
  cplx mean{0.0, 0.0};
  double power = 0.0;
  for (const auto& z : samples) {
    mean += z;
    power += std::norm(z) * power_scale;
  }
  mean /= n;
  power /= n;
  double var_z = 0.0;
  double var_p = 0.0;
  for (const auto& z : samples) {
    var_z += std::norm(z - mean);
    const double d = std::norm(z) * power_scale - power;
    var_p += d * d;
  }
  if (samples.size() > 1) {
    var_z /= n - 1.0;
    var_p /= n - 1.0;
  }
  s.mean_c = mean;
  s.var_c = var_z;
  s.mean_power = power;
  s.std_error = std::sqrt(var_p / n);
  return s;
}

void check_probability(double p, const char* where) {
  require(std::isfinite(p) && p >= 0.0 && p <= 1.0, std::string(where) + ": p must lie in [0, 1]");
}

}  // namespace

void NoiseModel::validate() const {
  require(std::isfinite(sigma_phi) && sigma_phi >= 0.0, "noise model: sigma_phi must be >= 0");
  check_probability(p, "noise model");
}

cplx ChipAmplitudes::coherent_sum() const {
  cplx s{0.0, 0.0};
  for (const auto& x : a) s += x;
  return s;
}

double ChipAmplitudes::incoherent_sum() const {
  double s = 0.0;
  for (const auto& x : a) s += std::norm(x);
  return s;
}

void ChipAmplitudes::validate() const {
  require(!a.empty(), "chip amplitudes: N0 must be >= 1");
  require(incoherent_sum() > 0.0, "chip amplitudes: all chips are zero");
}

ChipAmplitudes ChipAmplitudes::flat(std::size_t n0, cplx value) { return ChipAmplitudes{std::vector<cplx>(n0, value)}; }

double phase_noise_factor(double sigma_phi) {
  require(std::isfinite(sigma_phi) && sigma_phi >= 0.0, "phase_noise_factor: sigma must be >= 0");
  return std::exp(-sigma_phi * sigma_phi);
}

CrosstalkStats phase_noise_monte_carlo(const ChipAmplitudes& chips, double sigma_phi, std::size_t trials,
                                       std::uint64_t seed, unsigned workers) {
  chips.validate();
  require(sigma_phi >= 0.0 && trials >= 1, "phase_noise_monte_carlo: need sigma >= 0 and trials >= 1");
  const double reference = std::norm(chips.coherent_sum());
  require(reference > 0.0, "phase_noise_monte_carlo: chips sum to zero");
  const auto samples = run_trials(trials, workers, [&](std::size_t t) {
    auto eng = trial_engine(seed, Stream::kPhaseNoise, t);
    std::normal_distribution<double> phase(0.0, sigma_phi);
    cplx acc{0.0, 0.0};
    for (const auto& x : chips.a) acc += x * std::polar(1.0, sigma_phi > 0.0 ? phase(eng) : 0.0);
    return acc;
  });
  return summarize(samples, 1.0 / reference);
}

double chip_flip_power(const ChipAmplitudes& chips, double p) {
  chips.validate();
  check_probability(p, "chip_flip_power");
  const double q = 1.0 - 2.0 * p;
  return q * q * std::norm(chips.coherent_sum()) + 4.0 * p * (1.0 - p) * chips.incoherent_sum();
}

double chip_flip_factor(double p) {
  check_probability(p, "chip_flip_factor");
  const double q = 1.0 - 2.0 * p;
  return q * q;
}

CrosstalkStats chip_flip_monte_carlo(const ChipAmplitudes& chips, double p, std::size_t trials, std::uint64_t seed,
                                     unsigned workers) {
  chips.validate();
  check_probability(p, "chip_flip_monte_carlo");
  require(trials >= 1, "chip_flip_monte_carlo: trials must be >= 1");
  const auto samples = run_trials(trials, workers, [&](std::size_t t) {
    auto eng = trial_engine(seed, Stream::kChipFlips, t);
    cplx acc{0.0, 0.0};
    for (const auto& x : chips.a) acc += uniform01(eng) < p ? -x : x;
    return acc;
  });
  return summarize(samples);
}

CrosstalkStats code_correlation_stats(std::size_t n0, std::size_t trials, std::uint64_t seed, unsigned workers) {
  require(n0 >= 1, "code_correlation_stats: N0 must be >= 1");
  require(trials >= kMinCorrelationTrials, "code_correlation_stats: trials = " + std::to_string(trials) +
                                               " is too small; need >= " + std::to_string(kMinCorrelationTrials));
  const auto samples = run_trials(trials, workers, [&](std::size_t t) {
    auto eng = trial_engine(seed, Stream::kCorrelation, t);
    long sum = 0;
    // X_n = exp(i(theta_j - theta_k)) for two independent uniform {0, pi} chips.
    for (std::size_t n = 0; n < n0; ++n) sum += rademacher(eng) * rademacher(eng);
    return cplx{static_cast<double>(sum) / static_cast<double>(n0), 0.0};
  });
  auto s = summarize(samples);
  s.var_c = s.mean_power;
  return s;
}

CrosstalkStats interference_power(const ChipAmplitudes& chips, std::size_t users, std::size_t trials,
                                  std::uint64_t seed, unsigned workers) {
  chips.validate();
  require(users >= 2, "interference_power: need K >= 2 users");
  require(trials >= 1, "interference_power: trials must be >= 1");
  const auto samples = run_trials(trials, workers, [&](std::size_t t) {
    auto eng = trial_engine(seed, Stream::kInterference, t);
    cplx total{0.0, 0.0};
    for (std::size_t k = 1; k < users; ++k) {
      for (const auto& x : chips.a) total += static_cast<double>(rademacher(eng) * rademacher(eng)) * x;
    }
    return total;
  });
  return summarize(samples);
}

double sir(const ChipAmplitudes& chips, std::size_t users) {
  chips.validate();
  require(users >= 2, "sir: need K >= 2 users (no interferers otherwise)");
  return std::norm(chips.coherent_sum()) / (static_cast<double>(users - 1) * chips.incoherent_sum());
}

CrosstalkScaling crosstalk_scaling(std::span<const std::size_t> n0_list, double gamma, std::size_t trials,
                                   std::uint64_t seed, double bandwidth, unsigned workers) {
  require(n0_list.size() >= 3, "crosstalk_scaling: need at least three code lengths");
  require(gamma > 0.0 && trials >= 2, "crosstalk_scaling: need gamma > 0 and trials >= 2");
  if (bandwidth <= 0.0) bandwidth = optimal_bandwidth(gamma);
  CrosstalkScaling out;
  for (std::size_t n0 : n0_list) {
    require(n0 % 2 == 1, "crosstalk_scaling: code lengths must be odd (got " + std::to_string(n0) + ")");
    const ChipAmplitudes chips{chip_amplitudes(n0, bandwidth / static_cast<double>(n0), gamma)};
    const double matched = std::norm(chips.coherent_sum());
    const auto samples = run_trials(trials, workers, [&](std::size_t t) {
      auto eng = trial_engine(seed, Stream::kCrosstalk, (static_cast<std::uint64_t>(n0) << 40) ^ t);
      cplx acc{0.0, 0.0};
      for (const auto& x : chips.a) acc += static_cast<double>(rademacher(eng) * rademacher(eng)) * x;
      return acc;
    });
    const auto s = summarize(samples, 1.0 / matched);
    out.points.push_back({n0, s.mean_power, s.std_error});
  }

  const auto n = static_cast<double>(out.points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& pt : out.points) {
    const double x = std::log(static_cast<double>(pt.n0));
    const double y = std::log(pt.mean_power);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  out.slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - out.slope * sx) / n;
  double rss = 0.0;
  for (const auto& pt : out.points) {
    const double r = std::log(pt.mean_power) - intercept - out.slope * std::log(static_cast<double>(pt.n0));
    rss += r * r;
  }
  out.slope_stderr = n > 2 ? std::sqrt(rss / (n - 2.0) * n / denom) : 0.0;
  return out;
}

bool LinkBudget::all_pass() const {
  for (const auto& r : rules) {
    if (!r.pass) return false;
  }
  return true;
}

LinkBudget design_report(const BudgetInputs& in, const BudgetThresholds& thresholds) {
  require(in.users >= 1, "design_report: K must be >= 1");
  require(in.n0 >= 1, "design_report: N0 must be >= 1");
  require(in.beta > 0.0 && in.beta <= 1.0, "design_report: beta must lie in (0, 1]");
  require(in.w_over_gamma >= 0.0, "design_report: W/gamma must be >= 0");
  NoiseModel{in.sigma_phi, in.p}.validate();

  LinkBudget b;
  b.inputs = in;
  const double w_star = optimal_bandwidth(1.0);
  const double w = in.w_over_gamma > 0.0 ? in.w_over_gamma : w_star;
  b.inputs.w_over_gamma = w;
  b.bandwidth_factor = bandwidth_match(w, 1.0) / bandwidth_match(w_star, 1.0);
  b.phase_noise = phase_noise_factor(in.sigma_phi);
  b.chip_flip = chip_flip_factor(in.p);
  b.predicted_pe_factor = in.beta * b.bandwidth_factor * b.phase_noise * b.chip_flip;
  b.predicted_sir = in.users >= 2 ? static_cast<double>(in.n0) / static_cast<double>(in.users - 1)
                                  : std::numeric_limits<double>::infinity();
  const double load = static_cast<double>(in.users) / static_cast<double>(in.n0);
  b.rules = {
      {"sir", b.predicted_sir, thresholds.min_sir, b.predicted_sir >= thresholds.min_sir},
      {"phase_noise", in.sigma_phi, thresholds.max_sigma_phi, in.sigma_phi <= thresholds.max_sigma_phi},
      {"chip_flip", in.p, thresholds.max_flip_probability, in.p <= thresholds.max_flip_probability},
      {"addressability", load, thresholds.max_users_per_chip, load <= thresholds.max_users_per_chip},
  };
  return b;
}

std::string format_report(const LinkBudget& b) {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "link budget: K = " << b.inputs.users << ", N0 = " << b.inputs.n0 << ", W/gamma = " << b.inputs.w_over_gamma
     << ", beta = " << b.inputs.beta << "\n";
  os << "  bandwidth factor      " << b.bandwidth_factor << "\n";
  os << "  phase-noise factor    " << b.phase_noise << "  (sigma_phi = " << b.inputs.sigma_phi << " rad)\n";
  os << "  chip-flip factor      " << b.chip_flip << "  (p = " << b.inputs.p << ")\n";
  os << "  predicted P_e factor  " << b.predicted_pe_factor << "\n";
  os << "  predicted SIR         " << b.predicted_sir << "\n";
  os << "  rule             value        limit        result\n";
  for (const auto& r : b.rules) {
    os << "  " << std::left << std::setw(16) << r.name << std::setw(13) << r.value << std::setw(13) << r.threshold
       << (r.pass ? "pass" : "FAIL") << std::right << "\n";
  }
  return os.str();
}

}  // namespace codedphoton
