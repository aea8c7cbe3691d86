#include "codedphoton/atom.hpp"

#include <cmath>
#include <string>
#include <tuple>

#include "codedphoton/error.hpp"

namespace codedphoton {

namespace {

constexpr double kNormTolerance = 1e-9;
constexpr double kOptimalModeExtent = 40.0;

// e^z - 1 without cancellation for small |z|.
cplx expm1(cplx z) {
  const double s = std::sin(0.5 * z.imag());
  return {std::expm1(z.real()) * std::cos(z.imag()) - 2.0 * s * s, std::exp(z.real()) * std::sin(z.imag())};
}

// xi_opt on an arbitrary grid, normalized by the mass of its (infinite)
// sampled extension so that a truncated grid does not inflate the mode. A
// nonzero detuning adds the phase e^{-i Delta t} of the detuned atom's
// time-reversed emission.
TemporalMode optimal_mode_on(double rate, const TimeGrid& grid, double detuning = 0.0) {
  TemporalMode out{grid, std::vector<cplx>(grid.count), true, std::nullopt};
  // Last sample strictly before t = 0 on the infinitely extended grid.
  const double k_last = std::ceil(-grid.t_start / grid.dt) - 1.0;
  const double t_last = grid.t_start + k_last * grid.dt;
  const double x = rate * grid.dt;
  const double extended_mass = rate * grid.dt * std::exp(rate * t_last) / -std::expm1(-x);
  const double scale = std::sqrt(rate / extended_mass);
  for (std::size_t k = 0; k < grid.count; ++k) {
    const double t = grid[k];
    out.values[k] = t < 0.0 ? scale * std::exp(0.5 * rate * t) * std::polar(1.0, -detuning * t) : 0.0;
  }
  if (grid.first_edge() > -kOptimalModeExtent / rate) {
    out.truncated_mass = std::exp(rate * grid.first_edge());
  }
  return out;
}

}  // namespace

void AtomParams::validate() const {
  require(std::isfinite(gamma) && gamma > 0.0, "atom: gamma must be > 0");
  require(std::isfinite(gamma_total) && gamma_total >= gamma, "atom: Gamma_tot must be >= gamma");
  require(std::isfinite(detuning), "atom: detuning must be finite");
}

AtomParams AtomParams::ideal(double gamma, double detuning) {
  AtomParams a{gamma, gamma, detuning};
  a.validate();
  return a;
}

AtomParams AtomParams::with_efficiency(double gamma, double beta, double detuning) {
  require(beta > 0.0 && beta <= 1.0, "atom: beta must lie in (0, 1]");
  AtomParams a{gamma, beta == 1.0 ? gamma : gamma / beta, detuning};
  a.validate();
  return a;
}

TemporalMode optimal_mode(double rate, const TimeGrid& grid) {
  grid.validate();
  require(std::isfinite(rate) && rate > 0.0, "optimal_mode: rate must be > 0");
  const double needed = -kOptimalModeExtent / rate;
  require(grid.first_edge() <= needed + 1e-12 * std::abs(needed),
          "optimal_mode: time grid starts at " + std::to_string(grid.first_edge()) + "; it must extend to t <= " +
              std::to_string(needed));
  return optimal_mode_on(rate, grid);
}

ExcitationTrace excite(const TemporalMode& xi, const AtomParams& atom) {
  atom.validate();
  xi.grid.validate();
  require(xi.normalized, "excite: input mode must be normalized (call normalize first)");
  const double n2 = xi.norm_squared();
  require(std::abs(n2 - 1.0) <= kNormTolerance, "excite: input mode is not unit-norm (sum |xi|^2 dt = " +
                                                    std::to_string(n2) + ")");
  const double dt = xi.grid.dt;
  require(dt <= 0.05 / atom.gamma_total * (1.0 + 1e-12),
          "excite: dt = " + std::to_string(dt) + " is too coarse; need dt <= " +
              std::to_string(0.05 / atom.gamma_total));

  const cplx lambda{0.5 * atom.gamma_total, atom.detuning};
  const cplx decay = std::exp(-lambda * dt);
  // \int_0^dt e^{-lambda s} ds, written to stay accurate for small lambda dt.
  const cplx gain = -expm1(-lambda * dt) / lambda;
  const cplx drive = std::sqrt(atom.gamma) * gain;

  ExcitationTrace trace;
  trace.grid = TimeGrid{xi.grid.t_start + 0.5 * dt, dt, xi.grid.count};
  trace.pe.resize(xi.grid.count);
  cplx c{0.0, 0.0};
  for (std::size_t k = 0; k < xi.values.size(); ++k) {
    c = decay * c + drive * xi.values[k];
    trace.pe[k] = std::norm(c);
  }
  std::tie(trace.peak_value, trace.peak_time) = peak_excitation(trace);
  trace.bound = excitation_bound(xi, atom);
  return trace;
}

cplx temporal_overlap(const TemporalMode& xi, const TemporalMode& eta) {
  require(same_grid(xi.grid, eta.grid), "temporal_overlap: modes live on different time grids");
  require(xi.normalized && eta.normalized, "temporal_overlap: both modes must be normalized");
  cplx acc{0.0, 0.0};
  for (std::size_t k = 0; k < xi.values.size(); ++k) acc += std::conj(xi.values[k]) * eta.values[k];
  return acc * xi.grid.dt;
}

double excitation_bound(const TemporalMode& xi, const AtomParams& atom) {
  atom.validate();
  const auto reference = optimal_mode_on(atom.gamma_total, xi.grid, atom.detuning);
  return atom.beta() * std::norm(temporal_overlap(xi, reference));
}

std::pair<double, double> peak_excitation(const ExcitationTrace& trace) {
  if (trace.pe.empty()) return {0.0, trace.grid.t_start};
  std::size_t best = 0;
  for (std::size_t k = 1; k < trace.pe.size(); ++k) {
    if (trace.pe[k] > trace.pe[best]) best = k;
  }
  return {trace.pe[best], trace.grid[best]};
}

double excitation_at(const ExcitationTrace& trace, double t) {
  if (trace.pe.empty()) return 0.0;
  const double u = (t - trace.grid.t_start) / trace.grid.dt;
  if (u <= 0.0) return trace.pe.front();
  const auto k = static_cast<std::size_t>(std::floor(u));
  if (k + 1 >= trace.pe.size()) return trace.pe.back();
  const double f = u - static_cast<double>(k);
  return (1.0 - f) * trace.pe[k] + f * trace.pe[k + 1];
}

}  // namespace codedphoton
