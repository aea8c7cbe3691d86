#include "codedphoton/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "codedphoton/error.hpp"
#include "codedphoton/experiments.hpp"
#include "codedphoton/export.hpp"
#include "codedphoton/network.hpp"
#include "codedphoton/overlap.hpp"

namespace codedphoton {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

const std::vector<std::size_t> kFigureCodeLengths{3, 5, 7, 31, 63};
const std::vector<std::size_t> kCrosstalkCodeLengths{7, 15, 31, 63};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == v.size() && !v.empty(), "config: '" + key + "' expects a number, got '" + v + "'");
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long out = 0;
  try {
    require(!v.empty() && v[0] != '-', "");
    out = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == v.size() && !v.empty(), "config: '" + key + "' expects a non-negative integer, got '" + v + "'");
  return out;
}

std::vector<std::size_t> to_uint_list(const std::string& key, std::string v) {
  if (!v.empty() && v.front() == '[') {
    require(v.back() == ']', "config: '" + key + "' has an unterminated list");
    v = v.substr(1, v.size() - 2);
  }
  std::vector<std::size_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(static_cast<std::size_t>(to_uint(key, item)));
  }
  return out;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s;
}

// ---------------------------------------------------------------------------

struct Context {
  ScenarioConfig cfg;
  RunOptions opt;
  std::ostream& log;
  RunRecord record;

  [[nodiscard]] double bandwidth() const { return cfg.w_over_gamma * cfg.gamma; }
  [[nodiscard]] AtomParams atom() const {
    return AtomParams::with_efficiency(cfg.gamma, cfg.beta, cfg.delta_over_gamma * cfg.gamma);
  }

  [[nodiscard]] TimeGrid grid(std::size_t n0) const {
    auto g = default_time_grid(bandwidth(), cfg.gamma, n0);
    if (cfg.dt > 0.0 || cfg.t_min != 0.0 || cfg.t_max != 0.0) {
      const double dt = cfg.dt > 0.0 ? cfg.dt / cfg.gamma : g.dt;
      const double lo = cfg.t_min != 0.0 ? cfg.t_min / cfg.gamma : g.first_edge();
      const double hi = cfg.t_max != 0.0 ? cfg.t_max / cfg.gamma : g.last_edge();
      g = TimeGrid::cell_aligned(lo, hi, dt);
    }
    return g;
  }

  [[nodiscard]] PhaseCode code(std::size_t n0, std::uint64_t seed, std::uint64_t index) const {
    const double chip = bandwidth() / static_cast<double>(n0);
    if (cfg.code == "random") return PhaseCode::random_binary(n0, chip, seed, index);
    PhaseCode c{{}, chip};
    std::stringstream ss(cfg.code);
    std::string item;
    while (std::getline(ss, item, ',')) c.phases.push_back(to_double("code", trim(item)));
    require(c.length() == n0, "config: explicit code has " + std::to_string(c.length()) + " phases but N0 = " +
                                  std::to_string(n0));
    c.validate();
    return c;
  }

  void write(const std::string& name, const Table& table) {
    table.write_csv(opt.out_dir / name);
    record.outputs.push_back(name);
  }

  void write_text(const std::string& name, const std::string& text) {
    std::ofstream os(opt.out_dir / name, std::ios::binary);
    require(static_cast<bool>(os), "cannot write " + (opt.out_dir / name).string());
    os << text;
    record.outputs.push_back(name);
  }
};

void prepare_out_dir(const RunOptions& opt) {
  require(!opt.out_dir.empty(), "an output directory is required (--out DIR)");
  if (fs::exists(opt.out_dir)) {
    require(fs::is_directory(opt.out_dir), "output path " + opt.out_dir.string() + " is not a directory");
    require(opt.force || fs::is_empty(opt.out_dir),
            "output directory " + opt.out_dir.string() + " is not empty; pass --force to overwrite");
  } else {
    fs::create_directories(opt.out_dir);
  }
}

std::string gnuplot_lines(const std::vector<std::pair<std::string, std::string>>& files, const std::string& xlabel,
                          const std::string& ylabel, int ycol) {
  std::ostringstream gp;
  gp << "set datafile separator ','\nset key autotitle columnhead\n";
  gp << "set xlabel '" << xlabel << "'\nset ylabel '" << ylabel << "'\nplot ";
  for (std::size_t i = 0; i < files.size(); ++i) {
    gp << (i ? ", \\\n     " : "") << "'" << files[i].first << "' using 1:" << ycol << " with lines title '"
       << files[i].second << "'";
  }
  gp << "\n";
  return gp.str();
}

void add_trace(Context& ctx, const std::string& name, const ExcitationTrace& trace,
               std::vector<std::pair<std::string, std::string>>& plotted) {
  const std::string file = "trace_" + name + ".csv";
  ctx.write(file, trace_table(trace));
  plotted.emplace_back(file, name);
  ctx.record.summary[name + ".peak_pe"] = trace.peak_value;
  ctx.record.summary[name + ".peak_time"] = trace.peak_time;
  ctx.record.summary[name + ".bound"] = trace.bound;
  ctx.log << "  " << name << ": peak P_e = " << trace.peak_value << " at t = " << trace.peak_time
          << ", overlap bound (t = 0 anchor) = " << trace.bound << "\n";
}

void cmd_excite(Context& ctx) {
  const auto atom = ctx.atom();
  std::vector<std::pair<std::string, std::string>> plotted;
  const auto& preset = ctx.cfg.preset;
  require(preset.empty() || preset == "fig2" || preset == "fig3" || preset == "fig5",
          "excite: preset must be fig2, fig3 or fig5 (got '" + preset + "')");

  add_trace(ctx, "uncoded", excite(uncoded_mode(ctx.bandwidth(), ctx.grid(0)), atom), plotted);
  if (preset == "fig3") {
    const auto list = ctx.cfg.n0_list.empty() ? kFigureCodeLengths : ctx.cfg.n0_list;
    for (std::size_t n0 : list) {
      const auto mode = encoded_mode(ctx.code(n0, ctx.cfg.seed, 0), ctx.grid(n0));
      add_trace(ctx, "n0_" + std::to_string(n0), excite(mode, atom), plotted);
    }
  } else if (preset == "fig5") {
    for (std::uint64_t s = 0; s < 3; ++s) {
      const auto mode = encoded_mode(ctx.code(63, ctx.cfg.seed + s, 0), ctx.grid(63));
      add_trace(ctx, "n0_63_seed_" + std::to_string(ctx.cfg.seed + s), excite(mode, atom), plotted);
    }
  } else if (preset.empty() && ctx.cfg.n0 > 0) {
    const auto mode = encoded_mode(ctx.code(ctx.cfg.n0, ctx.cfg.seed, 0), ctx.grid(ctx.cfg.n0));
    add_trace(ctx, "n0_" + std::to_string(ctx.cfg.n0), excite(mode, atom), plotted);
  }
  if (ctx.opt.gnuplot) ctx.write_text("plot.gp", gnuplot_lines(plotted, "gamma t", "P_e(t)", 2));
}

void cmd_intensity(Context& ctx) {
  const auto& preset = ctx.cfg.preset;
  require(preset.empty() || preset == "fig4" || preset == "fig7",
          "intensity: preset must be fig4 or fig7 (got '" + preset + "')");
  std::vector<std::size_t> list;
  if (preset == "fig4") {
    list = {31};
  } else if (preset == "fig7") {
    list = ctx.cfg.n0_list.empty() ? kFigureCodeLengths : ctx.cfg.n0_list;
  } else {
    list = {ctx.cfg.n0};
  }
  std::vector<std::pair<std::string, std::string>> plotted;
  for (std::size_t n0 : list) {
    require(n0 > 0, "intensity: N0 must be >= 1");
    const auto grid = ctx.grid(n0);
    const auto uncoded = intensity_trace(uncoded_mode(ctx.bandwidth(), grid));
    const auto encoded = intensity_trace(encoded_mode(ctx.code(n0, ctx.cfg.seed, 0), grid));
    Table t;
    t.add_column("t", grid.samples());
    t.add_column("uncoded", uncoded);
    t.add_column("encoded", encoded);
    const std::string file = list.size() == 1 ? "intensity.csv" : "intensity_n0_" + std::to_string(n0) + ".csv";
    ctx.write(file, t);
    plotted.emplace_back(file, "N0 = " + std::to_string(n0));
    const double pu = *std::max_element(uncoded.begin(), uncoded.end());
    const double pe = *std::max_element(encoded.begin(), encoded.end());
    ctx.record.summary["n0_" + std::to_string(n0) + ".peak_intensity_uncoded"] = pu;
    ctx.record.summary["n0_" + std::to_string(n0) + ".peak_intensity_encoded"] = pe;
    ctx.log << "  N0 = " << n0 << ": peak |xi|^2 uncoded " << pu << ", encoded " << pe << "\n";
  }
  if (ctx.opt.gnuplot) ctx.write_text("plot.gp", gnuplot_lines(plotted, "gamma t", "|xi(t)|^2", 3));
}

void cmd_sweep(Context& ctx) {
  require(ctx.cfg.preset.empty() || ctx.cfg.preset == "fig6",
          "sweep-codelength: preset must be fig6 (got '" + ctx.cfg.preset + "')");
  const auto list = ctx.cfg.n0_list.empty() ? kFigureCodeLengths : ctx.cfg.n0_list;
  if (ctx.cfg.trials < 30) ctx.log << "  warning: fewer than 30 trials; standard errors are unreliable\n";
  const auto atom = ctx.atom();
  const auto rows = codelength_sweep(ctx.bandwidth(), atom, list, ctx.cfg.trials, ctx.cfg.seed, ctx.cfg.workers);
  Table t;
  std::vector<double> n0s, means, errs;
  for (const auto& r : rows) {
    n0s.push_back(static_cast<double>(r.n0));
    means.push_back(r.mean_peak);
    errs.push_back(r.std_error);
    ctx.record.summary["n0_" + std::to_string(r.n0) + ".mean_peak_pe"] = r.mean_peak;
    ctx.log << "  N0 = " << r.n0 << ": mean peak P_e = " << r.mean_peak << " +/- " << r.std_error << "\n";
  }
  t.add_column("n0", n0s);
  t.add_column("mean_peak_pe", means);
  t.add_column("stderr", errs);
  ctx.write("codelength.csv", t);
  const double uncoded = excite(uncoded_mode(ctx.bandwidth(), ctx.grid(0)), atom).peak_value;
  ctx.record.summary["uncoded.peak_pe"] = uncoded;
  ctx.log << "  uncoded: peak P_e = " << uncoded << "\n";
  if (ctx.opt.gnuplot) {
    ctx.write_text("plot.gp", "set datafile separator ','\nset logscale x\nset xlabel 'N0'\nset ylabel 'peak P_e'\n"
                              "plot 'codelength.csv' using 1:2:3 with yerrorbars title 'mean peak P_e'\n");
  }
}

void cmd_opt_bandwidth(Context& ctx) {
  const double gamma = ctx.cfg.gamma;
  const double w_star = optimal_bandwidth(gamma);
  const double x = w_star / gamma;
  const double residual = optimal_bandwidth_residual(x);
  Table t;
  std::vector<double> xs, ms;
  for (int i = 0; i <= 60; ++i) {
    const double xi = 0.1 * std::pow(100.0, i / 60.0);
    xs.push_back(xi);
    ms.push_back(bandwidth_match(xi * gamma, gamma));
  }
  t.add_column("W_over_gamma", xs);
  t.add_column("m_abs2", ms);
  ctx.write("bandwidth_match.csv", t);
  ctx.record.summary["w_opt_over_gamma"] = x;
  ctx.record.summary["residual"] = residual;
  ctx.record.summary["m_abs2_at_opt"] = bandwidth_match(w_star, gamma);
  ctx.log << "  W*/gamma = " << x << "  (residual " << residual << ")\n";
  ctx.log << "  |M|^2 at W* = " << bandwidth_match(w_star, gamma) << "\n";
  if (ctx.opt.gnuplot) {
    ctx.write_text("plot.gp", "set datafile separator ','\nset logscale x\nset xlabel 'W/gamma'\nset ylabel '|M|^2'\n"
                              "plot 'bandwidth_match.csv' using 1:2 with lines title '|M(W)|^2'\n");
  }
}

void cmd_budget(Context& ctx) {
  BudgetInputs in;
  in.users = ctx.cfg.users;
  in.n0 = ctx.cfg.n0;
  in.sigma_phi = ctx.cfg.sigma_phi;
  in.p = ctx.cfg.flip_probability;
  in.w_over_gamma = ctx.cfg.w_over_gamma;
  in.beta = ctx.cfg.beta;
  const auto b = design_report(in);
  const auto text = format_report(b);
  ctx.write_text("report.txt", text);
  ctx.log << text;
  ctx.record.summary["bandwidth_factor"] = b.bandwidth_factor;
  ctx.record.summary["phase_noise_factor"] = b.phase_noise;
  ctx.record.summary["chip_flip_factor"] = b.chip_flip;
  ctx.record.summary["predicted_pe_factor"] = b.predicted_pe_factor;
  ctx.record.summary["sir"] = b.predicted_sir;
  for (const auto& r : b.rules) ctx.record.summary["pass." + r.name] = r.pass ? 1.0 : 0.0;
  ctx.record.summary["pass.all"] = b.all_pass() ? 1.0 : 0.0;
}

void cmd_crosstalk(Context& ctx) {
  const auto list = ctx.cfg.n0_list.empty() ? kCrosstalkCodeLengths : ctx.cfg.n0_list;
  const auto s = crosstalk_scaling(list, ctx.cfg.gamma, ctx.cfg.trials, ctx.cfg.seed, ctx.bandwidth(), ctx.cfg.workers);
  Table t;
  std::vector<double> n0s, means, errs;
  for (const auto& p : s.points) {
    n0s.push_back(static_cast<double>(p.n0));
    means.push_back(p.mean_power);
    errs.push_back(p.std_error);
    ctx.log << "  N0 = " << p.n0 << ": normalized cross-talk power " << p.mean_power << " +/- " << p.std_error << "\n";
  }
  t.add_column("N0", n0s);
  t.add_column("mean_abs2", means);
  t.add_column("stderr", errs);
  ctx.write("crosstalk.csv", t);
  ctx.record.summary["slope"] = s.slope;
  ctx.record.summary["slope_stderr"] = s.slope_stderr;
  ctx.log << "  log-log slope = " << s.slope << " +/- " << s.slope_stderr << "\n";
  if (ctx.opt.gnuplot) {
    ctx.write_text("plot.gp", "set datafile separator ','\nset logscale xy\nset xlabel 'N0'\n"
                              "set ylabel 'cross-talk power'\nplot 'crosstalk.csv' using 1:2:3 with yerrorbars\n");
  }
}

json config_json(const ScenarioConfig& c) {
  json j;
  j["preset"] = c.preset;
  j["gamma"] = c.gamma;
  j["w_over_gamma"] = c.w_over_gamma;
  j["n0"] = c.n0;
  j["code"] = c.code;
  j["seed"] = c.seed;
  j["beta"] = c.beta;
  j["delta_over_gamma"] = c.delta_over_gamma;
  j["trials"] = c.trials;
  j["n0_list"] = c.n0_list;
  j["users"] = c.users;
  j["sigma_phi"] = c.sigma_phi;
  j["flip_probability"] = c.flip_probability;
  j["dt"] = c.dt;
  j["t_min"] = c.t_min;
  j["t_max"] = c.t_max;
  return j;
}

void finish(Context& ctx) {
  ctx.write_text("config.txt", ctx.cfg.to_text());
  json j;
  j["command"] = ctx.record.command;
  j["version"] = ctx.record.version;
  j["seed"] = ctx.cfg.seed;
  j["config"] = config_json(ctx.cfg);
  j["outputs"] = ctx.record.outputs;
  json summary = json::object();
  for (const auto& [k, v] : ctx.record.summary) summary[k] = v;
  j["summary"] = summary;
  std::ofstream os(ctx.opt.out_dir / "summary.json", std::ios::binary);
  require(static_cast<bool>(os), "cannot write summary.json");
  os << j.dump(2) << "\n";
  ctx.record.outputs.push_back("summary.json");
}

const std::map<std::string, std::function<void(Context&)>>& commands() {
  static const std::map<std::string, std::function<void(Context&)>> table{
      {"excite", cmd_excite},       {"intensity", cmd_intensity}, {"sweep-codelength", cmd_sweep},
      {"opt-bandwidth", cmd_opt_bandwidth}, {"budget", cmd_budget}, {"crosstalk", cmd_crosstalk},
  };
  return table;
}

}  // namespace

void ScenarioConfig::validate() const {
  require(std::isfinite(gamma) && gamma > 0.0, "config: gamma must be > 0");
  require(std::isfinite(w_over_gamma) && w_over_gamma > 0.0, "config: w_over_gamma must be > 0");
  require(beta > 0.0 && beta <= 1.0, "config: beta must lie in (0, 1]");
  require(std::isfinite(delta_over_gamma), "config: delta_over_gamma must be finite");
  require(trials >= 1, "config: trials must be >= 1");
  require(sigma_phi >= 0.0, "config: sigma_phi must be >= 0");
  require(flip_probability >= 0.0 && flip_probability <= 1.0, "config: flip_probability must lie in [0, 1]");
  require(users >= 1, "config: users must be >= 1");
  require(dt >= 0.0, "config: dt must be >= 0");
  require(code == "random" || !code.empty(), "config: code must be 'random' or a phase list");
  for (std::size_t n : n0_list) require(n >= 1, "config: n0_list entries must be >= 1");
}

std::string ScenarioConfig::to_text() const {
  std::ostringstream os;
  os << "preset = \"" << preset << "\"\n";
  os << "gamma = " << format_double(gamma) << "\n";
  os << "w_over_gamma = " << format_double(w_over_gamma) << "\n";
  os << "n0 = " << n0 << "\n";
  os << "code = \"" << code << "\"\n";
  os << "seed = " << seed << "\n";
  os << "beta = " << format_double(beta) << "\n";
  os << "delta_over_gamma = " << format_double(delta_over_gamma) << "\n";
  os << "trials = " << trials << "\n";
  os << "n0_list = [" << join(n0_list) << "]\n";
  os << "users = " << users << "\n";
  os << "sigma_phi = " << format_double(sigma_phi) << "\n";
  os << "flip_probability = " << format_double(flip_probability) << "\n";
  os << "dt = " << format_double(dt) << "\n";
  os << "t_min = " << format_double(t_min) << "\n";
  os << "t_max = " << format_double(t_max) << "\n";
  return os.str();
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, "config line " + std::to_string(lineno) + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    require(!key.empty(), "config line " + std::to_string(lineno) + ": empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    out[key] = value;
  }
  return out;
}

void apply_key_values(ScenarioConfig& c, const std::map<std::string, std::string>& values) {
  for (const auto& [k, v] : values) {
    if (k == "preset") c.preset = v;
    else if (k == "gamma") c.gamma = to_double(k, v);
    else if (k == "w_over_gamma") c.w_over_gamma = to_double(k, v);
    else if (k == "n0") c.n0 = static_cast<std::size_t>(to_uint(k, v));
    else if (k == "code") c.code = v;
    else if (k == "seed") c.seed = to_uint(k, v);
    else if (k == "beta") c.beta = to_double(k, v);
    else if (k == "delta_over_gamma") c.delta_over_gamma = to_double(k, v);
    else if (k == "trials") c.trials = static_cast<std::size_t>(to_uint(k, v));
    else if (k == "n0_list") c.n0_list = to_uint_list(k, v);
    else if (k == "users") c.users = static_cast<std::size_t>(to_uint(k, v));
    else if (k == "sigma_phi") c.sigma_phi = to_double(k, v);
    else if (k == "flip_probability") c.flip_probability = to_double(k, v);
    else if (k == "dt") c.dt = to_double(k, v);
    else if (k == "t_min") c.t_min = to_double(k, v);
    else if (k == "t_max") c.t_max = to_double(k, v);
    else if (k == "workers") c.workers = static_cast<unsigned>(to_uint(k, v));
    else throw ValidationError("config: unknown key '" + k + "'");
  }
}

ScenarioConfig load_config(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), "cannot read config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  ScenarioConfig c;
  apply_key_values(c, parse_key_values(ss.str()));
  return c;
}

std::vector<std::string> command_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : commands()) names.push_back(k);
  names.emplace_back("figures");
  return names;
}

RunRecord run_command(const std::string& command, ScenarioConfig config, const RunOptions& options,
                      std::ostream& log) {
  config.validate();
  if (command == "figures") {
    prepare_out_dir(options);
    RunRecord all{command, config, {}, {}, CODEDPHOTON_VERSION};
    const std::vector<std::pair<std::string, std::string>> presets{
        {"fig2", "excite"}, {"fig3", "excite"},           {"fig4", "intensity"},    {"fig5", "excite"},
        {"fig6", "sweep-codelength"}, {"fig7", "intensity"}, {"figD", "opt-bandwidth"},
    };
    for (const auto& [preset, cmd] : presets) {
      auto c = config;
      c.preset = preset == "figD" ? "" : preset;
      RunOptions sub = options;
      sub.out_dir = options.out_dir / preset;
      log << preset << " (" << cmd << ")\n";
      auto r = run_command(cmd, c, sub, log);
      for (const auto& o : r.outputs) all.outputs.push_back(preset + "/" + o);
      for (const auto& [k, v] : r.summary) all.summary[preset + "." + k] = v;
    }
    return all;
  }

  const auto it = commands().find(command);
  require(it != commands().end(), "unknown command '" + command + "'");
  prepare_out_dir(options);
  Context ctx{config, options, log, RunRecord{command, config, {}, {}, CODEDPHOTON_VERSION}};
  it->second(ctx);
  finish(ctx);
  return ctx.record;
}

}  // namespace codedphoton
