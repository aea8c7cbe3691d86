#include "codedphoton/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "codedphoton/ensemble.hpp"
#include "codedphoton/error.hpp"

namespace codedphoton {

TimeGrid default_time_grid(double bandwidth, double gamma, std::size_t n0) {
  require(bandwidth > 0.0 && gamma > 0.0, "default_time_grid: need W > 0 and gamma > 0");
  double lo = 60.0 / gamma;
  double hi = 30.0 / gamma;
  if (n0 > 0) {
    const double period = 2.0 * kPi * static_cast<double>(n0) / bandwidth;
    lo = std::max(lo, 4.0 * period);
    hi = std::max(hi, 4.0 * period);
  }
  const double dt = std::min(2.0 * kPi / (8.0 * bandwidth), 0.01 / gamma);
  return TimeGrid::cell_aligned(-lo, hi, dt);
}

FrequencyGrid default_frequency_grid(double bandwidth, std::size_t n0) {
  require(bandwidth > 0.0, "default_frequency_grid: need W > 0");
  const double spacing = n0 > 0 ? bandwidth / static_cast<double>(n0) / 16.0 : bandwidth / 256.0;
  return FrequencyGrid::covering(0.0, 0.5 * bandwidth, spacing);
}

TemporalMode uncoded_mode(double bandwidth, const TimeGrid& grid) {
  return normalize(sinc_temporal(bandwidth, 1.0, grid));
}

TemporalMode encoded_mode(const PhaseCode& code, const TimeGrid& grid) {
  code.validate();
  const double w = code.total_bandwidth();
  if (code.length() % 2 == 1) return normalize(encoded_temporal_closed_form(code, w, 1.0, grid));
  const auto spectrum = encode(rect_spectrum(w, 1.0, default_frequency_grid(w, code.length())), code);
  return normalize(to_time(spectrum, grid));
}

std::vector<CodeLengthRow> codelength_sweep(double bandwidth, const AtomParams& atom,
                                            std::span<const std::size_t> n0_list, std::size_t trials,
                                            std::uint64_t seed, unsigned workers) {
  atom.validate();
  require(trials >= 1, "codelength_sweep: trials must be >= 1");
  for (std::size_t n0 : n0_list) {
    require(n0 % 2 == 1, "codelength_sweep: N0 = " + std::to_string(n0) + " is even; sweeps use odd code lengths");
  }
  std::vector<CodeLengthRow> rows;
  for (std::size_t n0 : n0_list) {
    const auto grid = default_time_grid(bandwidth, atom.gamma, n0);
    const double chip = bandwidth / static_cast<double>(n0);
    const auto peaks = run_trials(trials, workers, [&](std::size_t t) {
      const auto code = PhaseCode::random_binary(n0, chip, seed, t);
      return excite(encoded_mode(code, grid), atom).peak_value;
    });
    double mean = 0.0;
    for (double p : peaks) mean += p;
    mean /= static_cast<double>(trials);
    double var = 0.0;
    for (double p : peaks) var += (p - mean) * (p - mean);
    var = trials > 1 ? var / static_cast<double>(trials - 1) : 0.0;
    rows.push_back({n0, mean, std::sqrt(var / static_cast<double>(trials)), trials});
  }
  return rows;
}

}  // namespace codedphoton
