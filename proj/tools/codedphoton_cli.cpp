#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "codedphoton/error.hpp"
#include "codedphoton/scenario.hpp"

namespace cp = codedphoton;

namespace {

struct Flags {
  std::string config_file;
  std::string out;
  bool force = false;
  bool gnuplot = false;
  std::map<std::string, std::string> overrides;
};

// Scenario flags are collected as strings and routed through the same parser
// as the config file, so both paths validate identically.
void add_scenario_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_file, "key = value config file")->check(CLI::ExistingFile);
  sub->add_option("--out", f.out, "run directory")->required();
  sub->add_flag("--force", f.force, "allow writing into a non-empty run directory");
  sub->add_flag("--gnuplot", f.gnuplot, "also write a plot.gp script");
  const std::pair<const char*, const char*> keys[] = {
      {"preset", "figure preset (fig2..fig7)"},
      {"seed", "master RNG seed"},
      {"trials", "Monte-Carlo trials"},
      {"gamma", "atomic decay rate into the guided mode"},
      {"w_over_gamma", "pulse bandwidth W / gamma"},
      {"n0", "code length"},
      {"n0_list", "comma-separated code lengths"},
      {"code", "'random' or comma-separated chip phases"},
      {"beta", "coupling efficiency"},
      {"delta_over_gamma", "detuning / gamma"},
      {"users", "number of users K"},
      {"sigma_phi", "rms residual phase (rad)"},
      {"flip_probability", "chip sign-flip probability"},
      {"dt", "time step override (1/gamma)"},
      {"t_min", "window start override (1/gamma)"},
      {"t_max", "window end override (1/gamma)"},
      {"workers", "worker threads (0 = hardware)"},
  };
  for (const auto& [key, help] : keys) {
    std::string flag = std::string("--") + key;
    for (auto& ch : flag) if (ch == '_') ch = '-';
    sub->add_option_function<std::string>(flag, [&f, k = std::string(key)](const std::string& v) { f.overrides[k] = v; },
                                          help);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectrally phase-coded single-photon excitation of a two-level atom"};
  app.set_version_flag("--version", std::string(CODEDPHOTON_VERSION));
  app.require_subcommand(1);
  app.failure_message([](const CLI::App*, const CLI::Error& e) { return "error: " + std::string(e.what()) + "\n"; });

  Flags flags;
  const std::map<std::string, std::string> descriptions{
      {"excite", "atomic excitation P_e(t) for uncoded and encoded pulses"},
      {"intensity", "temporal intensity of uncoded and encoded pulses"},
      {"sweep-codelength", "mean peak excitation versus code length"},
      {"opt-bandwidth", "optimal bandwidth W*/gamma and |M(W)|^2"},
      {"budget", "link-budget design report"},
      {"crosstalk", "cross-talk power versus code length"},
      {"figures", "run every figure preset into subdirectories"},
  };
  for (const auto& name : cp::command_names()) {
    add_scenario_flags(app.add_subcommand(name, descriptions.at(name)), flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    auto* sub = app.get_subcommands().front();
    cp::ScenarioConfig config;
    if (!flags.config_file.empty()) config = cp::load_config(flags.config_file);
    auto overrides = flags.overrides;
    if (auto it = overrides.find("n0_list"); it != overrides.end()) it->second = "[" + it->second + "]";
    cp::apply_key_values(config, overrides);
    cp::RunOptions opt{flags.out, flags.force, flags.gnuplot};
    std::cout << sub->get_name() << " -> " << flags.out << "\n";
    const auto record = cp::run_command(sub->get_name(), config, opt, std::cout);
    std::cout << "wrote " << record.outputs.size() << " files\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
