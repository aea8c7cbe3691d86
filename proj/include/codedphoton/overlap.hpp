#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "codedphoton/signal.hpp"

namespace codedphoton {

/// chi_A(omega) = sqrt(gamma) / (gamma/2 - i (omega - Delta)) on a grid.
struct Susceptibility {
  double gamma = 1.0;
  double detuning = 0.0;
  FrequencyGrid grid;
  std::vector<cplx> values;
};

/// Normalized spectral-overlap functional M[phi, Delta].
struct OverlapResult {
  cplx m{0.0, 0.0};
  double m_abs2 = 0.0;
};

Susceptibility lorentzian_chi(double gamma, double detuning, const FrequencyGrid& grid);

/// M = \int xi e^{i phi} chi_A(omega - Delta) d omega / (||xi|| ||chi_A||).
///
/// The numerator is a midpoint sum over the spectrum's cells; ||chi_A||^2 is
/// the full-line value 2 pi (independent of gamma and Delta), so a spectrum
/// that only covers part of the Lorentzian is not credited with the tails it
/// does not contain.
OverlapResult spectral_overlap(const SpectralAmplitude& xi, std::span<const double> residual_phase, double detuning,
                               double gamma);

/// Analytic |M[0, Delta]|^2 for a perfectly decoded rectangular spectrum of
/// width W centred on resonance. At Delta = 0 this is
/// (2 gamma / (pi W)) arctan^2(W / gamma).
double bandwidth_match(double bandwidth, double gamma, double detuning = 0.0);

/// Residual arctan(x) - 2x/(1+x^2) of the optimal-bandwidth condition.
double optimal_bandwidth_residual(double x);

/// Bandwidth W* maximizing bandwidth_match at Delta = 0: the nonzero root of
/// arctan(x) = 2x/(1+x^2), x = W/gamma, searched on [0.1, 10].
double optimal_bandwidth(double gamma);

/// Per-chip contributions to M for a unit-normalized rectangular spectrum of
/// N0 chips of width Omega (odd or even layout, see chip_phase_mask):
///   a_j = (2 pi W)^{-1/2} \int_{chip j} chi_A(omega - Delta) d omega,
/// so that M[phi] = sum_j a_j e^{i phi_j} for chip-constant phase errors and
/// sum_j a_j = M[0, Delta].
std::vector<cplx> chip_amplitudes(std::size_t n0, double chip_width, double gamma, double detuning = 0.0);

/// <xi_e|xi_opt> for the unit-normalized encoded rectangular pulse (odd N0),
/// evaluated term-wise: every comb tooth n contributes the closed-form integral
///   J_n = \int_{-inf}^0 sinc(Omega t/2) e^{(gamma/2 + i n Omega) t} dt
///       = [ln(gamma/2 + i(n Omega + nu))]_{nu=-Omega/2}^{Omega/2} / (i Omega).
/// With all phases zero this is the uncoded <xi|xi_opt>.
cplx coded_overlap(const PhaseCode& code, double chip_width, double gamma);

/// Same overlap through the spectral route, valid for either parity:
/// <xi_e|xi_opt> = sum_j e^{i phi_j} conj(a_j(Delta = 0)).
cplx coded_overlap_spectral(const PhaseCode& code, double gamma);

struct ParityResult {
  double odd_fraction = 0.0;
  double even_fraction = 0.0;
  /// Wilson 95% intervals.
  double odd_lo = 0.0, odd_hi = 0.0;
  double even_lo = 0.0, even_hi = 0.0;
  std::size_t trials = 0;
};

/// Fraction of random binary codes whose |<xi_e|xi_opt>|^2 is below 1% of the
/// uncoded value, for N0_odd and N0_even = N0_odd + 1 at the same chip width.
ParityResult parity_comparison(std::size_t n0_odd, std::size_t n0_even, double chip_width, double gamma,
                               std::size_t trials, std::uint64_t seed, unsigned workers = 0);

/// Wilson score interval for k successes out of n at ~95% confidence.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n);

}  // namespace codedphoton
