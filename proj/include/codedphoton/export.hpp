#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "codedphoton/atom.hpp"
#include "codedphoton/signal.hpp"

namespace codedphoton {

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

/// Column-major table written as CSV with a header row.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  ///< one vector per column

  void add_column(std::string name, std::vector<double> values);
  [[nodiscard]] std::size_t rows() const;
  void write_csv(std::ostream& os) const;
  void write_csv(const std::filesystem::path& path) const;
};

/// Columns t, re, im, abs2.
Table mode_table(const TemporalMode& mode);
/// Columns omega, re, im, abs2.
Table spectrum_table(const SpectralAmplitude& xi);
/// Columns t, pe.
Table trace_table(const ExcitationTrace& trace);

}  // namespace codedphoton
