#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "codedphoton/grid.hpp"

namespace codedphoton {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Spectral mode xi(omega) sampled on a frequency grid.
///
/// peak_power and bandwidth are bookkeeping for the rectangular family; the
/// dynamics always consume unit-normalized temporal modes. chip_width is set
/// once a phase code has been imprinted and records the finest spectral
/// structure the transform has to resolve.
struct SpectralAmplitude {
  FrequencyGrid grid;
  std::vector<cplx> values;
  double peak_power = 1.0;
  double bandwidth = 0.0;
  std::optional<double> chip_width;

  [[nodiscard]] double norm_squared() const;
};

/// Temporal mode xi(t) on a time grid.
struct TemporalMode {
  TimeGrid grid;
  std::vector<cplx> values;
  bool normalized = false;
  /// Fraction of the full-line mass outside the grid, when known analytically.
  std::optional<double> truncated_mass;

  [[nodiscard]] double norm_squared() const;
};

/// Length-N0 sequence of chip phases. Chip j (0-based) is the j-th chip from
/// the low-frequency edge of the coded band.
struct PhaseCode {
  std::vector<double> phases;
  double chip_width = 1.0;

  [[nodiscard]] std::size_t length() const { return phases.size(); }
  [[nodiscard]] bool is_binary() const;
  [[nodiscard]] double total_bandwidth() const { return chip_width * static_cast<double>(phases.size()); }
  void validate() const;

  /// Binary code from signs: +1 -> phase 0, -1 -> phase pi.
  static PhaseCode from_signs(std::span<const int> signs, double chip_width);
  static PhaseCode zeros(std::size_t n0, double chip_width);
  /// Uniform random {0, pi} code drawn from the stream keyed by (seed, index).
  static PhaseCode random_binary(std::size_t n0, double chip_width, std::uint64_t seed, std::uint64_t index);
};

[[nodiscard]] double sinc(double x);

SpectralAmplitude rect_spectrum(double bandwidth, double peak_power, const FrequencyGrid& grid, double center = 0.0);

TemporalMode sinc_temporal(double bandwidth, double peak_power, const TimeGrid& grid);

/// Piecewise-constant phase theta(omega) on the grid. Odd N0 centres chip 0 of
/// the index set -N..N on `center`; even N0 uses half-integer indices so that
/// `center` falls on the boundary between the two middle chips.
std::vector<double> chip_phase_mask(const PhaseCode& code, const FrequencyGrid& grid, double center = 0.0);

/// xi_e(omega) = xi(omega) exp(-i theta(omega)).
SpectralAmplitude apply_spectral_phase(const SpectralAmplitude& xi, std::span<const double> theta);

/// Mask + phase in one step; records the chip width on the result.
SpectralAmplitude encode(const SpectralAmplitude& xi, const PhaseCode& code, double center = 0.0);

/// xi(t) = (2 pi)^{-1/2} \int d omega xi(omega) exp(-i omega t).
///
/// The spectrum is treated as constant over each grid cell, so every cell is
/// transformed exactly (a cell of width d contributes a sinc(d t / 2) factor).
/// Rejects grids that under-resolve the chip structure (d > chip/8) and time
/// windows reaching past the first alias at |t| = pi/d.
TemporalMode to_time(const SpectralAmplitude& xi, const TimeGrid& grid);

/// Closed-form encoded rectangular pulse for odd N0:
///   xi_e(t) = sqrt(P0)/N0 * sinc(Omega t / 2) * sum_{n=-N}^{N} exp[-i(n Omega t + phi_n)].
TemporalMode encoded_temporal_closed_form(const PhaseCode& code, double bandwidth, double peak_power,
                                          const TimeGrid& grid);

TemporalMode normalize(const TemporalMode& mode);

std::vector<double> intensity_trace(const TemporalMode& mode);

}  // namespace codedphoton
