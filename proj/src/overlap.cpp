#include "codedphoton/overlap.hpp"

#include <cmath>
#include <string>

#include "codedphoton/ensemble.hpp"
#include "codedphoton/error.hpp"
#include "codedphoton/random.hpp"

namespace codedphoton {

namespace {

constexpr double kChiSpanInLinewidths = 20.0;
constexpr double kChiNormSquared = 2.0 * kPi;
constexpr double kNearZeroFraction = 0.01;

cplx chi(double gamma, double offset) { return std::sqrt(gamma) / cplx{0.5 * gamma, -offset}; }

// \int_lo^hi d omega / (gamma/2 - i(omega - Delta)) = i [ln(gamma/2 - i(omega - Delta))]_lo^hi.
cplx lorentz_integral(double gamma, double detuning, double lo, double hi) {
  const cplx i{0.0, 1.0};
  return i * (std::log(cplx{0.5 * gamma, -(hi - detuning)}) - std::log(cplx{0.5 * gamma, -(lo - detuning)}));
}

}  // namespace

Susceptibility lorentzian_chi(double gamma, double detuning, const FrequencyGrid& grid) {
  grid.validate();
  require(gamma > 0.0, "lorentzian_chi: gamma must be > 0");
  const double need = kChiSpanInLinewidths * gamma;
  require(grid.lower_edge() <= detuning - need && grid.upper_edge() >= detuning + need,
          "lorentzian_chi: grid must span at least +/- " + std::to_string(need) + " around Delta = " +
              std::to_string(detuning));
  Susceptibility out{gamma, detuning, grid, std::vector<cplx>(grid.count)};
  for (std::size_t k = 0; k < grid.count; ++k) out.values[k] = chi(gamma, grid[k] - detuning);
  return out;
}

OverlapResult spectral_overlap(const SpectralAmplitude& xi, std::span<const double> residual_phase, double detuning,
                               double gamma) {
  require(gamma > 0.0, "spectral_overlap: gamma must be > 0");
  require(residual_phase.size() == xi.values.size(),
          "spectral_overlap: residual phase is not defined on the spectrum's grid");
  const double xi_norm2 = xi.norm_squared();
  require(xi_norm2 > 0.0, "spectral_overlap: spectrum has zero norm");
  cplx acc{0.0, 0.0};
  for (std::size_t k = 0; k < xi.values.size(); ++k) {
    if (xi.values[k] == cplx{}) continue;
    acc += xi.values[k] * std::polar(1.0, residual_phase[k]) * chi(gamma, xi.grid[k] - detuning);
  }
  acc *= xi.grid.spacing;
  OverlapResult r;
  r.m = acc / std::sqrt(xi_norm2 * kChiNormSquared);
  r.m_abs2 = std::norm(r.m);
  return r;
}

double bandwidth_match(double bandwidth, double gamma, double detuning) {
  require(bandwidth > 0.0 && gamma > 0.0, "bandwidth_match: need W > 0 and gamma > 0");
  if (detuning == 0.0) {
    const double a = std::atan(bandwidth / gamma);
    return 2.0 * gamma / (kPi * bandwidth) * a * a;
  }
  // |sqrt(gamma) I|^2 / (W * 2 pi) with I the Lorentzian integral over the band.
  const cplx integral = lorentz_integral(gamma, detuning, -0.5 * bandwidth, 0.5 * bandwidth);
  return gamma * std::norm(integral) / (2.0 * kPi * bandwidth);
}

double optimal_bandwidth_residual(double x) { return std::atan(x) - 2.0 * x / (1.0 + x * x); }

double optimal_bandwidth(double gamma) {
  require(std::isfinite(gamma) && gamma > 0.0, "optimal_bandwidth: gamma must be > 0");
  // f < 0 at 0.1 and f > 0 at 10; the bracket excludes the trivial root x = 0.
  double lo = 0.1;
  double hi = 10.0;
  double x = 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double f = optimal_bandwidth_residual(x);
    if (std::abs(f) < 1e-14) break;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    // f'(x) = 1/(1+x^2) - 2(1-x^2)/(1+x^2)^2
    const double q = 1.0 + x * x;
    const double fp = 1.0 / q - 2.0 * (1.0 - x * x) / (q * q);
    double next = fp != 0.0 ? x - f / fp : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-15 * x) {
      x = next;
      break;
    }
    x = next;
  }
  return x * gamma;
}

std::vector<cplx> chip_amplitudes(std::size_t n0, double chip_width, double gamma, double detuning) {
  require(n0 >= 1 && chip_width > 0.0 && gamma > 0.0, "chip_amplitudes: need N0 >= 1, Omega > 0, gamma > 0");
  const double w = chip_width * static_cast<double>(n0);
  const double scale = std::sqrt(gamma / (2.0 * kPi * w));
  std::vector<cplx> a(n0);
  for (std::size_t j = 0; j < n0; ++j) {
    const double lo = (static_cast<double>(j) - 0.5 * static_cast<double>(n0)) * chip_width;
    a[j] = scale * lorentz_integral(gamma, detuning, lo, lo + chip_width);
  }
  return a;
}

cplx coded_overlap(const PhaseCode& code, double chip_width, double gamma) {
  code.validate();
  require(gamma > 0.0 && chip_width > 0.0, "coded_overlap: need gamma > 0 and Omega > 0");
  require(code.length() % 2 == 1, "coded_overlap: N0 = " + std::to_string(code.length()) +
                                      " is even; the term-wise comb form needs odd N0");
  const std::size_t n0 = code.length();
  const auto half = static_cast<long>((n0 - 1) / 2);
  const double w = chip_width * static_cast<double>(n0);
  const cplx i{0.0, 1.0};
  cplx acc{0.0, 0.0};
  for (long n = -half; n <= half; ++n) {
    const double center = static_cast<double>(n) * chip_width;
    const cplx term = (std::log(cplx{0.5 * gamma, center + 0.5 * chip_width}) -
                       std::log(cplx{0.5 * gamma, center - 0.5 * chip_width})) /
                      (i * chip_width);
    acc += std::polar(1.0, code.phases[static_cast<std::size_t>(n + half)]) * term;
  }
  // Unit-normalized pulse: sqrt(W / 2 pi) / N0 * sinc * comb; xi_opt carries sqrt(gamma).
  return std::sqrt(gamma) * std::sqrt(w / (2.0 * kPi)) / static_cast<double>(n0) * acc;
}

cplx coded_overlap_spectral(const PhaseCode& code, double gamma) {
  code.validate();
  const auto a = chip_amplitudes(code.length(), code.chip_width, gamma, 0.0);
  cplx acc{0.0, 0.0};
  for (std::size_t j = 0; j < a.size(); ++j) acc += std::polar(1.0, code.phases[j]) * std::conj(a[j]);
  return acc;
}

std::pair<double, double> wilson_interval(std::size_t k, std::size_t n) {
  if (n == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double denom = 1.0 + z * z / nn;
  const double center = (p + z * z / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

ParityResult parity_comparison(std::size_t n0_odd, std::size_t n0_even, double chip_width, double gamma,
                               std::size_t trials, std::uint64_t seed, unsigned workers) {
  require(n0_odd % 2 == 1, "parity_comparison: first code length must be odd");
  require(n0_even == n0_odd + 1, "parity_comparison: even code length must be N0_odd + 1");
  require(trials >= 1, "parity_comparison: trials must be >= 1");
  require(chip_width > 0.0 && gamma > 0.0, "parity_comparison: need Omega > 0 and gamma > 0");

  auto fraction = [&](std::size_t n0, std::uint64_t tag) {
    const auto a = chip_amplitudes(n0, chip_width, gamma, 0.0);
    cplx uncoded{0.0, 0.0};
    for (const auto& x : a) uncoded += x;
    const double threshold = kNearZeroFraction * std::norm(uncoded);
    const auto hits = run_trials(trials, workers, [&](std::size_t t) {
      auto eng = trial_engine(seed, Stream::kParity, (tag << 48) ^ t);
      cplx acc{0.0, 0.0};
      for (const auto& x : a) acc += static_cast<double>(rademacher(eng)) * x;
      return std::norm(acc) < threshold ? 1 : 0;
    });
    std::size_t k = 0;
    for (int h : hits) k += static_cast<std::size_t>(h);
    return k;
  };

  ParityResult r;
  r.trials = trials;
  const std::size_t k_odd = fraction(n0_odd, 1);
  const std::size_t k_even = fraction(n0_even, 2);
  r.odd_fraction = static_cast<double>(k_odd) / static_cast<double>(trials);
  r.even_fraction = static_cast<double>(k_even) / static_cast<double>(trials);
  std::tie(r.odd_lo, r.odd_hi) = wilson_interval(k_odd, trials);
  std::tie(r.even_lo, r.even_hi) = wilson_interval(k_even, trials);
  return r;
}

}  // namespace codedphoton
