#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "codedphoton/atom.hpp"
#include "codedphoton/signal.hpp"

namespace codedphoton {

/// Time grid used for excitation runs. The window is [-60/gamma, 30/gamma],
/// widened to +/- 4 comb periods (4 * 2 pi / Omega) for encoded pulses, whose
/// sinc(Omega t / 2) envelope is N0 times longer than the uncoded pulse.
/// dt = min(2 pi / (8 W), 0.01 / gamma). n0 = 0 means uncoded.
TimeGrid default_time_grid(double bandwidth, double gamma, std::size_t n0 = 0);

/// Frequency grid tiling [-W/2, W/2] with spacing Omega/16 (W/256 uncoded).
FrequencyGrid default_frequency_grid(double bandwidth, std::size_t n0 = 0);

/// Unit-normalized sinc pulse of bandwidth W on the grid.
TemporalMode uncoded_mode(double bandwidth, const TimeGrid& grid);

/// Unit-normalized encoded rectangular pulse. Odd N0 uses the closed form;
/// even N0 goes through the spectral transform.
TemporalMode encoded_mode(const PhaseCode& code, const TimeGrid& grid);

struct CodeLengthRow {
  std::size_t n0 = 0;
  double mean_peak = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

/// Ensemble mean of the peak excitation over random binary codes for each N0
/// (odd only) at fixed total bandwidth W.
std::vector<CodeLengthRow> codelength_sweep(double bandwidth, const AtomParams& atom,
                                            std::span<const std::size_t> n0_list, std::size_t trials,
                                            std::uint64_t seed, unsigned workers = 0);

}  // namespace codedphoton
