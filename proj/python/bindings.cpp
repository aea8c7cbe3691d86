#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "codedphoton/atom.hpp"
#include "codedphoton/experiments.hpp"
#include "codedphoton/network.hpp"
#include "codedphoton/overlap.hpp"
#include "codedphoton/scenario.hpp"

namespace py = pybind11;
namespace cp = codedphoton;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::dict trace_dict(const cp::ExcitationTrace& tr) {
  py::dict d;
  d["t"] = to_array(tr.grid.samples());
  d["pe"] = to_array(tr.pe);
  d["peak_value"] = tr.peak_value;
  d["peak_time"] = tr.peak_time;
  d["bound"] = tr.bound;
  return d;
}

cp::PhaseCode make_code(const std::vector<double>& phases, double bandwidth) {
  cp::PhaseCode code{phases, bandwidth / static_cast<double>(phases.size())};
  code.validate();
  return code;
}

py::dict stats_dict(const cp::CrosstalkStats& s) {
  py::dict d;
  d["mean_c"] = s.mean_c;
  d["var_c"] = s.var_c;
  d["mean_power"] = s.mean_power;
  d["stderr"] = s.std_error;
  d["trials"] = s.trials;
  return d;
}

}  // namespace

PYBIND11_MODULE(_codedphoton, m) {
  m.doc() = "Single-photon excitation of a two-level atom by spectrally phase-coded pulses";
  m.attr("__version__") = CODEDPHOTON_VERSION;

  m.def("optimal_bandwidth", &cp::optimal_bandwidth, py::arg("gamma") = 1.0);
  m.def("optimal_bandwidth_residual", &cp::optimal_bandwidth_residual, py::arg("x"));
  m.def("bandwidth_match", &cp::bandwidth_match, py::arg("bandwidth"), py::arg("gamma") = 1.0,
        py::arg("detuning") = 0.0);
  m.def("chip_amplitudes", &cp::chip_amplitudes, py::arg("n0"), py::arg("chip_width"), py::arg("gamma") = 1.0,
        py::arg("detuning") = 0.0);

  m.def(
      "random_code",
      [](std::size_t n0, std::uint64_t seed, std::uint64_t index) {
        return cp::PhaseCode::random_binary(n0, 1.0, seed, index).phases;
      },
      py::arg("n0"), py::arg("seed"), py::arg("index") = 0, "Random binary {0, pi} phases.");

  m.def(
      "coded_overlap",
      [](const std::vector<double>& phases, double bandwidth, double gamma) {
        const auto code = make_code(phases, bandwidth);
        return code.length() % 2 == 1 ? cp::coded_overlap(code, code.chip_width, gamma)
                                      : cp::coded_overlap_spectral(code, gamma);
      },
      py::arg("phases"), py::arg("bandwidth"), py::arg("gamma") = 1.0,
      "<xi_e|xi_opt> for a unit-normalized rectangular pulse carrying the code.");

  m.def(
      "excite",
      [](double bandwidth, std::optional<std::vector<double>> phases, double gamma, double beta, double detuning) {
        const auto atom = cp::AtomParams::with_efficiency(gamma, beta, detuning);
        if (!phases) {
          const auto grid = cp::default_time_grid(bandwidth, gamma);
          return trace_dict(cp::excite(cp::uncoded_mode(bandwidth, grid), atom));
        }
        const auto code = make_code(*phases, bandwidth);
        const auto grid = cp::default_time_grid(bandwidth, gamma, code.length());
        return trace_dict(cp::excite(cp::encoded_mode(code, grid), atom));
      },
      py::arg("bandwidth"), py::arg("phases") = py::none(), py::arg("gamma") = 1.0, py::arg("beta") = 1.0,
      py::arg("detuning") = 0.0, "P_e(t) on the default grid for an uncoded or encoded rectangular pulse.");

  m.def(
      "excite_optimal",
      [](double gamma, double beta) {
        const auto atom = cp::AtomParams::with_efficiency(gamma, beta);
        const auto grid = cp::TimeGrid::cell_aligned(-60.0 / atom.gamma_total, 30.0 / atom.gamma_total,
                                                     0.01 / atom.gamma_total);
        return trace_dict(cp::excite(cp::optimal_mode(atom.gamma_total, grid), atom));
      },
      py::arg("gamma") = 1.0, py::arg("beta") = 1.0, "P_e(t) for the time-reversed optimal mode.");

  m.def(
      "intensity",
      [](double bandwidth, std::optional<std::vector<double>> phases, double gamma) {
        const std::size_t n0 = phases ? phases->size() : 0;
        const auto grid = cp::default_time_grid(bandwidth, gamma, n0);
        const auto mode = phases ? cp::encoded_mode(make_code(*phases, bandwidth), grid)
                                 : cp::uncoded_mode(bandwidth, grid);
        py::dict d;
        d["t"] = to_array(grid.samples());
        d["intensity"] = to_array(cp::intensity_trace(mode));
        return d;
      },
      py::arg("bandwidth"), py::arg("phases") = py::none(), py::arg("gamma") = 1.0);

  m.def(
      "codelength_sweep",
      [](double bandwidth, const std::vector<std::size_t>& n0_list, std::size_t trials, std::uint64_t seed,
         double gamma, unsigned workers) {
        py::gil_scoped_release release;
        const auto rows = cp::codelength_sweep(bandwidth, cp::AtomParams::ideal(gamma), n0_list, trials, seed, workers);
        py::gil_scoped_acquire acquire;
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["n0"] = r.n0;
          d["mean_peak_pe"] = r.mean_peak;
          d["stderr"] = r.std_error;
          out.append(d);
        }
        return out;
      },
      py::arg("bandwidth"), py::arg("n0_list"), py::arg("trials"), py::arg("seed") = 1, py::arg("gamma") = 1.0,
      py::arg("workers") = 0);

  m.def("phase_noise_factor", &cp::phase_noise_factor, py::arg("sigma_phi"));
  m.def("chip_flip_factor", &cp::chip_flip_factor, py::arg("p"));
  m.def(
      "chip_flip_power",
      [](const std::vector<cp::cplx>& a, double p) { return cp::chip_flip_power(cp::ChipAmplitudes{a}, p); },
      py::arg("a"), py::arg("p"));
  m.def(
      "sir", [](const std::vector<cp::cplx>& a, std::size_t users) { return cp::sir(cp::ChipAmplitudes{a}, users); },
      py::arg("a"), py::arg("users"));
  m.def(
      "chip_flip_monte_carlo",
      [](const std::vector<cp::cplx>& a, double p, std::size_t trials, std::uint64_t seed, unsigned workers) {
        return stats_dict(cp::chip_flip_monte_carlo(cp::ChipAmplitudes{a}, p, trials, seed, workers));
      },
      py::arg("a"), py::arg("p"), py::arg("trials"), py::arg("seed") = 1, py::arg("workers") = 0);
  m.def(
      "phase_noise_monte_carlo",
      [](const std::vector<cp::cplx>& a, double sigma, std::size_t trials, std::uint64_t seed, unsigned workers) {
        return stats_dict(cp::phase_noise_monte_carlo(cp::ChipAmplitudes{a}, sigma, trials, seed, workers));
      },
      py::arg("a"), py::arg("sigma_phi"), py::arg("trials"), py::arg("seed") = 1, py::arg("workers") = 0);
  m.def(
      "code_correlation_stats",
      [](std::size_t n0, std::size_t trials, std::uint64_t seed, unsigned workers) {
        return stats_dict(cp::code_correlation_stats(n0, trials, seed, workers));
      },
      py::arg("n0"), py::arg("trials"), py::arg("seed") = 1, py::arg("workers") = 0);

  m.def(
      "crosstalk_scaling",
      [](const std::vector<std::size_t>& n0_list, double gamma, std::size_t trials, std::uint64_t seed,
         double bandwidth, unsigned workers) {
        const auto s = cp::crosstalk_scaling(n0_list, gamma, trials, seed, bandwidth, workers);
        py::dict d;
        py::list pts;
        for (const auto& p : s.points) pts.append(py::make_tuple(p.n0, p.mean_power, p.std_error));
        d["points"] = pts;
        d["slope"] = s.slope;
        d["slope_stderr"] = s.slope_stderr;
        return d;
      },
      py::arg("n0_list"), py::arg("gamma") = 1.0, py::arg("trials") = 1000, py::arg("seed") = 1,
      py::arg("bandwidth") = 0.0, py::arg("workers") = 0);

  m.def(
      "parity_comparison",
      [](std::size_t n0_odd, double chip_width, double gamma, std::size_t trials, std::uint64_t seed) {
        const auto r = cp::parity_comparison(n0_odd, n0_odd + 1, chip_width, gamma, trials, seed);
        py::dict d;
        d["odd_fraction"] = r.odd_fraction;
        d["even_fraction"] = r.even_fraction;
        d["odd_interval"] = py::make_tuple(r.odd_lo, r.odd_hi);
        d["even_interval"] = py::make_tuple(r.even_lo, r.even_hi);
        return d;
      },
      py::arg("n0_odd"), py::arg("chip_width"), py::arg("gamma") = 1.0, py::arg("trials") = 10000,
      py::arg("seed") = 1);

  m.def(
      "design_report",
      [](std::size_t users, std::size_t n0, double sigma_phi, double p, double w_over_gamma, double beta) {
        const auto b = cp::design_report(cp::BudgetInputs{users, n0, sigma_phi, p, w_over_gamma, beta});
        py::dict d;
        d["bandwidth_factor"] = b.bandwidth_factor;
        d["phase_noise"] = b.phase_noise;
        d["chip_flip"] = b.chip_flip;
        d["predicted_pe_factor"] = b.predicted_pe_factor;
        d["predicted_sir"] = b.predicted_sir;
        py::dict rules;
        for (const auto& r : b.rules) rules[py::str(r.name)] = r.pass;
        d["rules"] = rules;
        d["all_pass"] = b.all_pass();
        d["report"] = cp::format_report(b);
        return d;
      },
      py::arg("users") = 2, py::arg("n0") = 31, py::arg("sigma_phi") = 0.0, py::arg("p") = 0.0,
      py::arg("w_over_gamma") = 0.0, py::arg("beta") = 1.0);

  m.def(
      "run_command",
      [](const std::string& command, const std::map<std::string, std::string>& config, const std::string& out_dir,
         bool force) {
        cp::ScenarioConfig c;
        cp::apply_key_values(c, config);
        std::ostringstream log;
        const auto r = cp::run_command(command, c, cp::RunOptions{out_dir, force, false}, log);
        py::dict d;
        d["outputs"] = r.outputs;
        d["summary"] = r.summary;
        d["log"] = log.str();
        return d;
      },
      py::arg("command"), py::arg("config") = std::map<std::string, std::string>{}, py::arg("out_dir"),
      py::arg("force") = false, "Runs a CLI subcommand; config values are strings as in a config file.");
}
