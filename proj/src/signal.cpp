#include "codedphoton/signal.hpp"

#include <cmath>
#include <string>

#include "codedphoton/error.hpp"
#include "codedphoton/random.hpp"

namespace codedphoton {

namespace {

double sum_abs2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

}  // namespace

double SpectralAmplitude::norm_squared() const { return sum_abs2(values) * grid.spacing; }

double TemporalMode::norm_squared() const { return sum_abs2(values) * grid.dt; }

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

bool PhaseCode::is_binary() const {
  for (double p : phases) {
    if (p != 0.0 && p != kPi) return false;
  }
  return true;
}

void PhaseCode::validate() const {
  require(!phases.empty(), "phase code: N0 must be >= 1");
  require(std::isfinite(chip_width) && chip_width > 0.0, "phase code: chip width must be > 0");
  for (double p : phases) require(std::isfinite(p), "phase code: phases must be finite");
}

PhaseCode PhaseCode::from_signs(std::span<const int> signs, double chip_width) {
  PhaseCode code{{}, chip_width};
  code.phases.reserve(signs.size());
  for (int s : signs) {
    require(s == 1 || s == -1, "phase code: signs must be +1 or -1");
    code.phases.push_back(s == 1 ? 0.0 : kPi);
  }
  code.validate();
  return code;
}

PhaseCode PhaseCode::zeros(std::size_t n0, double chip_width) {
  PhaseCode code{std::vector<double>(n0, 0.0), chip_width};
  code.validate();
  return code;
}

PhaseCode PhaseCode::random_binary(std::size_t n0, double chip_width, std::uint64_t seed, std::uint64_t index) {
  auto eng = trial_engine(seed, Stream::kCodes, (static_cast<std::uint64_t>(n0) << 40) ^ index);
  PhaseCode code{std::vector<double>(n0), chip_width};
  for (auto& p : code.phases) p = rademacher(eng) == 1 ? 0.0 : kPi;
  code.validate();
  return code;
}

SpectralAmplitude rect_spectrum(double bandwidth, double peak_power, const FrequencyGrid& grid, double center) {
  grid.validate();
  require(std::isfinite(bandwidth) && bandwidth > 0.0, "rect_spectrum: bandwidth W must be > 0");
  require(peak_power >= 0.0, "rect_spectrum: peak power must be >= 0");
  const double tol = 1e-9 * bandwidth;
  const double lo = center - 0.5 * bandwidth;
  const double hi = center + 0.5 * bandwidth;
  require(grid.lower_edge() <= lo + tol && grid.upper_edge() >= hi - tol,
          "rect_spectrum: grid [" + std::to_string(grid.lower_edge()) + ", " + std::to_string(grid.upper_edge()) +
              "] is narrower than the band [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");

  SpectralAmplitude out{grid, std::vector<cplx>(grid.count), peak_power, bandwidth, std::nullopt};
  const double level = std::sqrt(peak_power) / bandwidth;
  for (std::size_t k = 0; k < grid.count; ++k) {
    if (std::abs(grid[k] - center) <= 0.5 * bandwidth) out.values[k] = level;
  }
  return out;
}

TemporalMode sinc_temporal(double bandwidth, double peak_power, const TimeGrid& grid) {
  grid.validate();
  require(std::isfinite(bandwidth) && bandwidth > 0.0, "sinc_temporal: bandwidth W must be > 0");
  require(peak_power >= 0.0, "sinc_temporal: peak power must be >= 0");
  TemporalMode out{grid, std::vector<cplx>(grid.count), false, std::nullopt};
  const double amp = std::sqrt(peak_power);
  for (std::size_t k = 0; k < grid.count; ++k) out.values[k] = amp * sinc(0.5 * bandwidth * grid[k]);
  if (peak_power > 0.0) {
    // Full-line mass of sqrt(P0) sinc(W t / 2) is 2 pi P0 / W.
    out.truncated_mass = 1.0 - out.norm_squared() * bandwidth / (2.0 * kPi * peak_power);
  }
  return out;
}

std::vector<double> chip_phase_mask(const PhaseCode& code, const FrequencyGrid& grid, double center) {
  code.validate();
  grid.validate();
  const auto n0 = static_cast<double>(code.length());
  std::vector<double> theta(grid.count, 0.0);
  for (std::size_t k = 0; k < grid.count; ++k) {
    // Chip j covers [(j - N0/2) Omega, (j + 1 - N0/2) Omega) relative to center,
    // which is n in -N..N for odd N0 and half-integer n for even N0.
    const double j = std::floor((grid[k] - center) / code.chip_width + 0.5 * n0);
    if (j >= 0.0 && j < n0) theta[k] = code.phases[static_cast<std::size_t>(j)];
  }
  return theta;
}

SpectralAmplitude apply_spectral_phase(const SpectralAmplitude& xi, std::span<const double> theta) {
  require(theta.size() == xi.values.size(), "apply_spectral_phase: phase mask is not defined on the spectrum's grid (" +
                                                std::to_string(theta.size()) + " vs " +
                                                std::to_string(xi.values.size()) + " samples)");
  SpectralAmplitude out = xi;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    if (theta[k] != 0.0) out.values[k] = xi.values[k] * std::polar(1.0, -theta[k]);
  }
  return out;
}

SpectralAmplitude encode(const SpectralAmplitude& xi, const PhaseCode& code, double center) {
  auto out = apply_spectral_phase(xi, chip_phase_mask(code, xi.grid, center));
  out.chip_width = code.chip_width;
  return out;
}

TemporalMode to_time(const SpectralAmplitude& xi, const TimeGrid& grid) {
  grid.validate();
  xi.grid.validate();
  const double dw = xi.grid.spacing;
  if (xi.chip_width) {
    const double needed = *xi.chip_width / 8.0;
    require(dw <= needed * (1.0 + 1e-12), "to_time: frequency spacing " + std::to_string(dw) +
                                              " under-resolves the chip structure; need spacing <= " +
                                              std::to_string(needed));
  }
  const double t_max = std::max(std::abs(grid.first_edge()), std::abs(grid.last_edge()));
  require(t_max * dw <= kPi * (1.0 + 1e-12), "to_time: time window reaches |t| = " + std::to_string(t_max) +
                                                  " beyond the alias limit pi/spacing = " + std::to_string(kPi / dw) +
                                                  "; refine the frequency spacing");

  TemporalMode out{grid, std::vector<cplx>(grid.count), false, std::nullopt};
  const double w0 = xi.grid[0];
  const double scale = dw / std::sqrt(2.0 * kPi);
  const std::size_t m = xi.values.size();
  for (std::size_t j = 0; j < grid.count; ++j) {
    const double t = grid[j];
    const cplx step = std::polar(1.0, -dw * t);
    cplx phasor = std::polar(1.0, -w0 * t);
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < m; ++k) {
      acc += xi.values[k] * phasor;
      phasor *= step;
      // Re-anchor periodically to keep the recurrence error at rounding level.
      if ((k & 255U) == 255U) phasor = std::polar(1.0, -xi.grid[k + 1] * t);
    }
    out.values[j] = acc * (scale * sinc(0.5 * dw * t));
  }
  return out;
}

TemporalMode encoded_temporal_closed_form(const PhaseCode& code, double bandwidth, double peak_power,
                                          const TimeGrid& grid) {
  code.validate();
  grid.validate();
  require(code.length() % 2 == 1, "encoded_temporal_closed_form: N0 = " + std::to_string(code.length()) +
                                      " is even; the closed form indexes n = -N..N, use to_time for even N0");
  require(bandwidth > 0.0 && peak_power >= 0.0, "encoded_temporal_closed_form: need W > 0 and P0 >= 0");
  require(std::abs(code.total_bandwidth() - bandwidth) <= 1e-9 * bandwidth,
          "encoded_temporal_closed_form: chip width * N0 must equal the bandwidth W");

  const std::size_t n0 = code.length();
  const auto half = static_cast<double>((n0 - 1) / 2);
  const double omega = code.chip_width;
  std::vector<cplx> coeff(n0);
  for (std::size_t j = 0; j < n0; ++j) coeff[j] = std::polar(1.0, -code.phases[j]);

  TemporalMode out{grid, std::vector<cplx>(grid.count), false, std::nullopt};
  const double amp = std::sqrt(peak_power) / static_cast<double>(n0);
  for (std::size_t k = 0; k < grid.count; ++k) {
    const double t = grid[k];
    // sum_j c_j z^(j - N) with z = exp(-i Omega t), evaluated by Horner.
    const cplx z = std::polar(1.0, -omega * t);
    cplx acc = coeff[n0 - 1];
    for (std::size_t j = n0 - 1; j-- > 0;) acc = acc * z + coeff[j];
    acc *= std::polar(1.0, half * omega * t);
    out.values[k] = amp * sinc(0.5 * omega * t) * acc;
  }
  return out;
}

TemporalMode normalize(const TemporalMode& mode) {
  const double n2 = mode.norm_squared();
  require(n2 > 0.0 && std::isfinite(n2), "normalize: mode has zero (or non-finite) norm");
  TemporalMode out = mode;
  const double s = 1.0 / std::sqrt(n2);
  for (auto& v : out.values) v *= s;
  out.normalized = true;
  return out;
}

std::vector<double> intensity_trace(const TemporalMode& mode) {
  std::vector<double> out(mode.values.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::norm(mode.values[k]);
  return out;
}

}  // namespace codedphoton
