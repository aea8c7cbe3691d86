#include "codedphoton/export.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include "codedphoton/error.hpp"

namespace codedphoton {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), end);
}

void Table::add_column(std::string name, std::vector<double> values) {
  require(data.empty() || values.size() == data.front().size(), "table: column '" + name + "' has the wrong length");
  columns.push_back(std::move(name));
  data.push_back(std::move(values));
}

std::size_t Table::rows() const { return data.empty() ? 0 : data.front().size(); }

void Table::write_csv(std::ostream& os) const {
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c = 0; c < data.size(); ++c) os << (c ? "," : "") << format_double(data[c][r]);
    os << '\n';
  }
}

void Table::write_csv(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), "cannot open " + path.string() + " for writing");
  write_csv(os);
  require(static_cast<bool>(os), "failed writing " + path.string());
}

namespace {

Table complex_table(const char* axis, std::vector<double> x, const std::vector<cplx>& v) {
  std::vector<double> re(v.size()), im(v.size()), a2(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    re[k] = v[k].real();
    im[k] = v[k].imag();
    a2[k] = std::norm(v[k]);
  }
  Table t;
  t.add_column(axis, std::move(x));
  t.add_column("re", std::move(re));
  t.add_column("im", std::move(im));
  t.add_column("abs2", std::move(a2));
  return t;
}

}  // namespace

Table mode_table(const TemporalMode& mode) { return complex_table("t", mode.grid.samples(), mode.values); }

Table spectrum_table(const SpectralAmplitude& xi) { return complex_table("omega", xi.grid.samples(), xi.values); }

Table trace_table(const ExcitationTrace& trace) {
  Table t;
  t.add_column("t", trace.grid.samples());
  t.add_column("pe", trace.pe);
  return t;
}

}  // namespace codedphoton
