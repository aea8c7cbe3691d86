#pragma once

#include <cstddef>
#include <vector>

namespace codedphoton {

/// Uniform angular-frequency grid in the rotating frame (0 = atomic resonance).
///
/// Sample k sits at center_offset + (k - (count-1)/2) * spacing and stands for
/// the cell [omega_k - spacing/2, omega_k + spacing/2). With an even count the
/// cell edges fall on integer multiples of the spacing, which is what lets
/// chip boundaries coincide with cell boundaries.
struct FrequencyGrid {
  double center_offset = 0.0;
  double spacing = 1.0;
  std::size_t count = 1;

  [[nodiscard]] double operator[](std::size_t k) const {
    return center_offset + (static_cast<double>(k) - 0.5 * static_cast<double>(count - 1)) * spacing;
  }
  [[nodiscard]] double lower_edge() const { return (*this)[0] - 0.5 * spacing; }
  [[nodiscard]] double upper_edge() const { return (*this)[count - 1] + 0.5 * spacing; }
  [[nodiscard]] std::vector<double> samples() const;

  void validate() const;

  /// Even-count grid whose cells tile [center - half_span, center + half_span].
  /// half_span is rounded up to a whole number of cells.
  static FrequencyGrid covering(double center, double half_span, double spacing);

  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;
};

/// Uniform time grid. Sample k sits at t_start + k*dt and stands for the cell
/// [t_k - dt/2, t_k + dt/2); modes are held constant over each cell.
struct TimeGrid {
  double t_start = 0.0;
  double dt = 1.0;
  std::size_t count = 1;

  [[nodiscard]] double operator[](std::size_t k) const { return t_start + static_cast<double>(k) * dt; }
  [[nodiscard]] double first_edge() const { return t_start - 0.5 * dt; }
  [[nodiscard]] double last_edge() const { return (*this)[count - 1] + 0.5 * dt; }
  [[nodiscard]] std::vector<double> samples() const;

  void validate() const;

  /// Grid whose cell edges lie on integer multiples of dt (so t = 0 is a cell
  /// edge) and which covers [t_lo, t_hi].
  static TimeGrid cell_aligned(double t_lo, double t_hi, double dt);

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

bool same_grid(const FrequencyGrid& a, const FrequencyGrid& b);
bool same_grid(const TimeGrid& a, const TimeGrid& b);

}  // namespace codedphoton
