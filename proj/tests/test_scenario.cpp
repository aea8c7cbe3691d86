#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "codedphoton/error.hpp"
#include "codedphoton/scenario.hpp"

using namespace codedphoton;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("codedphoton_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

RunRecord run(const std::string& cmd, const ScenarioConfig& c, const fs::path& out, bool force = false) {
  std::ostringstream log;
  return run_command(cmd, c, RunOptions{out, force, false}, log);
}

}  // namespace

TEST_CASE("config parsing") {
  const auto kv = parse_key_values(
      "# comment\n"
      "preset = \"fig3\"  # trailing\n"
      "w_over_gamma = 1.39\n"
      "\n"
      "n0_list = [3, 5, 7]\n"
      "seed = 42\n");
  ScenarioConfig c;
  apply_key_values(c, kv);
  CHECK(c.preset == "fig3");
  CHECK(c.w_over_gamma == 1.39);
  CHECK(c.n0_list == std::vector<std::size_t>{3, 5, 7});
  CHECK(c.seed == 42);

  CHECK_THROWS_AS(apply_key_values(c, {{"bogus", "1"}}), ValidationError);
  CHECK_THROWS_AS(apply_key_values(c, {{"gamma", "abc"}}), ValidationError);
  CHECK_THROWS_AS(apply_key_values(c, {{"trials", "-3"}}), ValidationError);
  CHECK_THROWS_AS(parse_key_values("just text\n"), ValidationError);

  SUBCASE("to_text round-trips") {
    ScenarioConfig d;
    apply_key_values(d, parse_key_values(c.to_text()));
    CHECK(d.to_text() == c.to_text());
  }
  SUBCASE("validation") {
    ScenarioConfig bad;
    bad.gamma = -1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = ScenarioConfig{};
    bad.beta = 1.5;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
  }
}

TEST_CASE("run directory policy") {
  const auto dir = fresh_dir("policy");
  ScenarioConfig c;
  run("opt-bandwidth", c, dir);
  CHECK(fs::exists(dir / "config.txt"));
  CHECK(fs::exists(dir / "summary.json"));
  CHECK(fs::exists(dir / "bandwidth_match.csv"));
  CHECK_THROWS_AS(run("opt-bandwidth", c, dir), ValidationError);
  CHECK_NOTHROW(run("opt-bandwidth", c, dir, true));
  CHECK_THROWS_AS(run("no-such-command", c, fresh_dir("policy2")), ValidationError);
  fs::remove_all(dir);
}

TEST_CASE("opt-bandwidth summary") {
  const auto dir = fresh_dir("opt");
  const auto r = run("opt-bandwidth", ScenarioConfig{}, dir);
  CHECK(r.summary.at("w_opt_over_gamma") == doctest::Approx(1.39).epsilon(0.01 / 1.39));
  CHECK(std::abs(r.summary.at("residual")) < 1e-10);
  const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(j["command"] == "opt-bandwidth");
  CHECK(j["summary"]["w_opt_over_gamma"].get<double>() == r.summary.at("w_opt_over_gamma"));
  CHECK(slurp(dir / "bandwidth_match.csv").rfind("W_over_gamma,m_abs2\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("excite presets") {
  ScenarioConfig c;
  SUBCASE("fig2") {
    c.preset = "fig2";
    const auto dir = fresh_dir("fig2");
    const auto r = run("excite", c, dir);
    CHECK(r.summary.count("uncoded.peak_pe") == 1);
    CHECK(r.summary.size() == 3);
    CHECK(slurp(dir / "trace_uncoded.csv").rfind("t,pe\n", 0) == 0);
    fs::remove_all(dir);
  }
  SUBCASE("fig5 gives distinct traces") {
    c.preset = "fig5";
    const auto dir = fresh_dir("fig5");
    const auto r = run("excite", c, dir);
    const auto a = slurp(dir / "trace_n0_63_seed_1.csv");
    const auto b = slurp(dir / "trace_n0_63_seed_2.csv");
    const auto d = slurp(dir / "trace_n0_63_seed_3.csv");
    CHECK(a != b);
    CHECK(b != d);
    CHECK(r.summary.at("uncoded.peak_pe") > r.summary.at("n0_63_seed_1.peak_pe"));
    fs::remove_all(dir);
  }
  SUBCASE("bad preset") {
    c.preset = "fig9";
    CHECK_THROWS_AS(run("excite", c, fresh_dir("fig9")), ValidationError);
  }
  SUBCASE("explicit code must match N0") {
    c.n0 = 3;
    c.code = "0, 3.141592653589793";
    CHECK_THROWS_AS(run("excite", c, fresh_dir("badcode")), ValidationError);
  }
}

TEST_CASE("intensity with the all-zero code") {
  ScenarioConfig c;
  c.n0 = 5;
  c.code = "0, 0, 0, 0, 0";
  const auto dir = fresh_dir("zero");
  const auto r = run("intensity", c, dir);
  CHECK(r.summary.at("n0_5.peak_intensity_encoded") ==
        doctest::Approx(r.summary.at("n0_5.peak_intensity_uncoded")).epsilon(1e-9));
  fs::remove_all(dir);
}

TEST_CASE("sweep-codelength") {
  ScenarioConfig c;
  c.n0_list = {3, 7, 31};
  c.trials = 40;
  const auto dir = fresh_dir("sweep");
  const auto r = run("sweep-codelength", c, dir);
  CHECK(r.summary.at("n0_3.mean_peak_pe") > r.summary.at("n0_7.mean_peak_pe"));
  CHECK(r.summary.at("n0_7.mean_peak_pe") > r.summary.at("n0_31.mean_peak_pe"));
  CHECK(slurp(dir / "codelength.csv").rfind("n0,mean_peak_pe,stderr\n", 0) == 0);
  c.n0_list = {3, 4};
  CHECK_THROWS_AS(run("sweep-codelength", c, fresh_dir("sweep_even")), ValidationError);
  fs::remove_all(dir);

  SUBCASE("trials = 1 is reproducible") {
    ScenarioConfig one;
    one.n0_list = {3, 5};
    one.trials = 1;
    const auto d1 = fresh_dir("one_a");
    const auto d2 = fresh_dir("one_b");
    run("sweep-codelength", one, d1);
    run("sweep-codelength", one, d2);
    CHECK(slurp(d1 / "codelength.csv") == slurp(d2 / "codelength.csv"));
    fs::remove_all(d1);
    fs::remove_all(d2);
  }
}

TEST_CASE("budget") {
  ScenarioConfig c;
  c.w_over_gamma = 1.3917452002707;
  const auto dir = fresh_dir("budget");
  const auto r = run("budget", c, dir);
  CHECK(r.summary.at("pass.all") == 1.0);
  CHECK(r.summary.at("predicted_pe_factor") == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fs::exists(dir / "report.txt"));
  fs::remove_all(dir);
  c.sigma_phi = 0.32;
  const auto r2 = run("budget", c, dir);
  CHECK(r2.summary.at("predicted_pe_factor") == doctest::Approx(0.90).epsilon(0.01));
  fs::remove_all(dir);
}

TEST_CASE("crosstalk is deterministic across worker counts") {
  ScenarioConfig c;
  c.trials = 300;
  c.workers = 1;
  const auto a = fresh_dir("xt_a");
  const auto b = fresh_dir("xt_b");
  run("crosstalk", c, a);
  c.workers = 3;
  run("crosstalk", c, b);
  CHECK(slurp(a / "crosstalk.csv") == slurp(b / "crosstalk.csv"));
  CHECK(slurp(a / "crosstalk.csv").rfind("N0,mean_abs2,stderr\n", 0) == 0);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("command list") {
  const auto names = command_names();
  for (const char* n : {"excite", "intensity", "sweep-codelength", "opt-bandwidth", "budget", "crosstalk", "figures"}) {
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  }
}
