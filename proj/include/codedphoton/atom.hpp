#pragma once

#include <utility>
#include <vector>

#include "codedphoton/signal.hpp"

namespace codedphoton {

/// Two-level atom in the rotating frame.
///   gamma       coupling rate into the photon's channel
///   gamma_total total decay rate (>= gamma)
///   detuning    photon carrier minus atomic transition, rad/time
struct AtomParams {
  double gamma = 1.0;
  double gamma_total = 1.0;
  double detuning = 0.0;

  [[nodiscard]] double beta() const { return gamma / gamma_total; }
  void validate() const;

  /// beta = 1: all emission goes into the photon's channel.
  static AtomParams ideal(double gamma, double detuning = 0.0);
  /// Gamma_tot = gamma / beta.
  static AtomParams with_efficiency(double gamma, double beta, double detuning = 0.0);
};

/// P_e(t) sampled at the cell edges of the driving mode's grid, i.e. on
/// grid.t_start = drive.t_start + dt/2. pe[k] is the probability after the
/// drive's k-th cell has been absorbed.
struct ExcitationTrace {
  TimeGrid grid;
  std::vector<double> pe;
  double peak_value = 0.0;
  double peak_time = 0.0;
  /// beta |<xi|xi_opt(Gamma_tot)>|^2 with xi_opt anchored at t = 0.
  double bound = 0.0;
};

/// Time-reversed spontaneous-emission mode sqrt(rate) e^{rate t / 2} Theta(-t),
/// normalized on the grid. Requires the grid to start at or before -40/rate.
TemporalMode optimal_mode(double rate, const TimeGrid& grid);

/// Integrates dc/dt = -(Gamma_tot/2 + i Delta) c + sqrt(gamma) xi(t), c = 0
/// before the first cell. Each cell is propagated exactly with the drive held
/// at its sample value, which keeps the discrete problem an exact convolution
/// (the Cauchy-Schwarz bound and its saturation carry over sample by sample).
ExcitationTrace excite(const TemporalMode& xi, const AtomParams& atom);

/// <xi|eta> = sum conj(xi) eta dt.
cplx temporal_overlap(const TemporalMode& xi, const TemporalMode& eta);

/// beta |<xi|xi_opt(Gamma_tot)>|^2, with xi_opt carrying e^{-i Delta t} when
/// the atom is detuned. This is P_e at t = 0 (the anchor of xi_opt); it
/// bounds P_e(0), not the later peak of a pulse still arriving at t = 0.
double excitation_bound(const TemporalMode& xi, const AtomParams& atom);

/// (max P_e, time of max); ties resolve to the earliest sample.
std::pair<double, double> peak_excitation(const ExcitationTrace& trace);

/// P_e interpolated linearly to time t (clamped to the trace's range).
double excitation_at(const ExcitationTrace& trace, double t);

}  // namespace codedphoton
