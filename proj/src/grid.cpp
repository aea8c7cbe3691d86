#include "codedphoton/grid.hpp"

#include <cmath>
#include <string>

#include "codedphoton/error.hpp"

namespace codedphoton {

namespace {
bool close(double a, double b, double scale) { return std::abs(a - b) <= 1e-12 * scale; }
}  // namespace

std::vector<double> FrequencyGrid::samples() const {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = (*this)[k];
  return out;
}

void FrequencyGrid::validate() const {
  require(count >= 1, "frequency grid: count must be positive");
  require(std::isfinite(spacing) && spacing > 0.0, "frequency grid: spacing must be > 0");
  require(std::isfinite(center_offset), "frequency grid: center offset must be finite");
}

FrequencyGrid FrequencyGrid::covering(double center, double half_span, double spacing) {
  require(spacing > 0.0 && half_span > 0.0, "frequency grid: spacing and span must be > 0");
  auto half_cells = static_cast<std::size_t>(std::ceil(half_span / spacing - 1e-9));
  return FrequencyGrid{center, spacing, 2 * half_cells};
}

std::vector<double> TimeGrid::samples() const {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = (*this)[k];
  return out;
}

void TimeGrid::validate() const {
  require(count >= 1, "time grid: count must be positive");
  require(std::isfinite(dt) && dt > 0.0, "time grid: dt must be > 0");
  require(std::isfinite(t_start), "time grid: t_start must be finite");
}

TimeGrid TimeGrid::cell_aligned(double t_lo, double t_hi, double dt) {
  require(dt > 0.0 && t_hi > t_lo, "time grid: need dt > 0 and t_hi > t_lo");
  const double first = std::floor(t_lo / dt + 1e-9);
  const double last = std::ceil(t_hi / dt - 1e-9);
  const auto cells = static_cast<std::size_t>(last - first);
  return TimeGrid{(first + 0.5) * dt, dt, cells};
}

bool same_grid(const FrequencyGrid& a, const FrequencyGrid& b) {
  return a.count == b.count && close(a.spacing, b.spacing, a.spacing) &&
         close(a.center_offset, b.center_offset, a.spacing * static_cast<double>(a.count));
}

bool same_grid(const TimeGrid& a, const TimeGrid& b) {
  return a.count == b.count && close(a.dt, b.dt, a.dt) &&
         close(a.t_start, b.t_start, a.dt * static_cast<double>(a.count));
}

}  // namespace codedphoton
