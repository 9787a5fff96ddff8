#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace mpscap_cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_json(const nlohmann::json& j) {
  std::ostringstream out, err;
  int code = 0;
  try {
    code = run(config_from_json(j), out, err);
  } catch (const ConfigError& e) {
    return {kExitConfigError, "", e.what()};
  }
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(MPSCAP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST_CASE("grid parsing") {
  CHECK(parse_grid("0.25") == std::vector<double>{0.25});
  const auto g = parse_grid("0:0.9:0.1");
  REQUIRE(g.size() == 10);
  CHECK(g[3] == 0.3);
  CHECK(g.back() == 0.9);
  CHECK(parse_grid("1:1:0.5").size() == 1);
  CHECK_THROWS_AS(parse_grid("0:1"), ConfigError);
  CHECK_THROWS_AS(parse_grid("0:1:0"), ConfigError);
  CHECK_THROWS_AS(parse_grid("1:0:0.1"), ConfigError);
  CHECK_THROWS_AS(parse_grid("abc"), ConfigError);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(config_from_json({{"command", "nope"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"model", "aklt"}, {"g", 0.3}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"model", "custom"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"n", 0}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"workers", 0}}), ConfigError);
  const auto c = config_from_json({{"theta_ground", true}});
  CHECK(c.model == ModelChoice::aklt);
  CHECK(config_from_json({{"g", "0:0.2:0.1"}}).g.size() == 3);
}

TEST_CASE("capacity command") {
  const auto r = run_json({{"command", "capacity"}, {"model", "aklt"}, {"theta", 0.9553}, {"n", 16}});
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 2);
  CHECK(l[0] == "model,param,n,estimator,closed_form,numeric,gap");
  CHECK(l[1].rfind("aklt,0.9553,16,cond,0.6666", 0) == 0);

  const auto both = run_json({{"command", "capacity"}, {"model", "mg"}, {"g_ground", true}, {"estimator", "both"}});
  REQUIRE(both.code == 0);
  CHECK(lines(both.out).size() == 3);
  CHECK(lines(both.out)[1].rfind("mg,0.5,20,avg,0.5,", 0) == 0);
}

TEST_CASE("sweep command") {
  const nlohmann::json cfg{{"command", "sweep"}, {"model", "mg"}, {"g", "0:0.9:0.1"}, {"n", 14}};
  const auto r = run_json(cfg);
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 11);
  // Each row's closed form is the capacity formula; the numeric value is within the n = 14 gap.
  for (std::size_t i = 1; i < l.size(); ++i) {
    std::vector<std::string> f;
    std::stringstream ss(l[i]);
    for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
    REQUIRE(f.size() == 7);
    const double g = std::stod(f[1]);
    const double expected = g == 0.0 ? 1.0 : 1 + g / 2 * std::log2(g) + (1 - g) / 2 * std::log2(1 - g);
    CHECK(std::stod(f[4]) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::stod(f[6]) < 5e-3);
  }
  auto parallel = cfg;
  parallel["workers"] = 4;
  CHECK(run_json(parallel).out == r.out);
  CHECK(run_json(cfg).out == r.out);

  const auto json = run_json({{"command", "sweep"}, {"model", "aklt"}, {"theta", "0:1.5:0.5"}, {"format", "json"}});
  REQUIRE(json.code == 0);
  const auto j = nlohmann::json::parse(json.out);
  CHECK(j["rows"].size() == 4);
  CHECK(j["rows"][0]["n"] == 14);
}

TEST_CASE("spectrum command") {
  const auto r = run_json({{"command", "spectrum"}, {"model", "aklt"}, {"theta_ground", true}, {"n", 2}});
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  CHECK(l[0] == "family,value,multiplicity,source");
  std::size_t closed = 0, enumerated = 0;
  for (const auto& x : l) {
    closed += x.find(",closed_form") != std::string::npos;
    enumerated += x.find(",enumerated") != std::string::npos;
  }
  CHECK(closed == 3);
  CHECK(enumerated == 2);
  CHECK(r.err.find("distance") != std::string::npos);

  const auto j = run_json({{"command", "spectrum"}, {"model", "mg"}, {"g", 0.3}, {"n", 7}, {"format", "json"}});
  REQUIRE(j.code == 0);
  CHECK(nlohmann::json::parse(j.out)["distance"].get<double>() < 1e-12);
}

TEST_CASE("verify, oracle and channel commands") {
  const auto v = run_json({{"command", "verify"}, {"model", "mg"}, {"n_max", 6}});
  CHECK(v.code == 0);
  CHECK(lines(v.out)[0] == "module,check,status,detail");
  CHECK(v.out.find(",fail,") == std::string::npos);

  const auto o = run_json({{"command", "oracle"}, {"model", "aklt"}, {"theta", "0.3:0.9:0.3"}, {"n", 5}});
  CHECK(o.code == 0);
  CHECK(lines(o.out).size() == 4);
  CHECK(o.out.find("mismatch") == std::string::npos);

  const auto c = run_json({{"command", "channel"}, {"model", "mg"}, {"g_ground", true}, {"n", 2}, {"format", "json"}});
  CHECK(c.code == 0);
  const auto j = nlohmann::json::parse(c.out);
  CHECK(j["rows"][0]["kraus_count"] == 4);
  CHECK(j["rows"][0]["path_gap"].get<double>() < 1e-9);
  CHECK(j["symbol_map"] == "symbol i -> phase index i-1");
}

TEST_CASE("usage and domain failures exit with 2") {
  CHECK(run_json({{"command", "capacity"}, {"model", "mg"}, {"g", 1.5}}).code == 2);
  CHECK(run_json({{"command", "capacity"}}).code == 2);
  CHECK(run_json({{"command", "oracle"}, {"model", "aklt"}, {"format", "svg"}}).code == 2);
  CHECK(run_json({{"command", "spectrum"}, {"model", "mg"}, {"g", "0:0.2:0.1"}}).code == 2);
  CHECK(run_json({{"command", "capacity"}, {"model", "custom"}, {"model_file", "/nonexistent.json"}}).code == 2);
  CHECK(run_json({{"command", "capacity"}, {"model", "mg"}, {"output", "/nonexistent-dir/x.csv"}}).code == 2);
}

TEST_CASE("plots") {
  Plot p{"t", "x", "y", {{"a", {{0, 0}, {1, 1}}}, {"b", {{0, 1}, {1, 0}}}}};
  const auto svg = render_svg(p);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(render_svg(p) == svg);
  CHECK_THROWS_AS(render_svg(Plot{"t", "x", "y", {}}), ConfigError);
  CHECK_THROWS_AS(render_svg(Plot{"t", "x", "y", {{"a", {{0, 0}}}}}), ConfigError);

  const auto sweep = run_json({{"command", "sweep"}, {"model", "mg"}, {"g", "0:0.9:0.3"}, {"n", 8}, {"format", "svg"}});
  REQUIRE(sweep.code == 0);
  CHECK(sweep.out.find("</svg>") != std::string::npos);
  CHECK(run_json({{"command", "sweep"}, {"model", "mg"}, {"g", "0:0.9:0.3"}, {"n", 8}, {"format", "svg"}}).out ==
        sweep.out);
  CHECK(run_json({{"command", "sweep"}, {"model", "mg"}, {"g", 0.2}, {"format", "svg"}}).code == 2);
}

TEST_CASE("output directory override and file artifacts") {
  const auto dir = fs::temp_directory_path() / "mpscap_cli_test";
  fs::create_directories(dir);
  setenv("MPSCAP_OUTPUT_DIR", dir.string().c_str(), 1);
  const nlohmann::json cfg{{"command", "capacity"}, {"model", "aklt"}, {"theta", 0.5}, {"n", 6}, {"output", "cap.csv"}};
  REQUIRE(run_json(cfg).code == 0);
  unsetenv("MPSCAP_OUTPUT_DIR");
  const auto first = slurp(dir / "cap.csv");
  CHECK(first.rfind("model,param,n,estimator", 0) == 0);
  auto absolute = cfg;
  absolute["output"] = (dir / "cap2.csv").string();
  REQUIRE(run_json(absolute).code == 0);
  CHECK(slurp(dir / "cap2.csv") == first);
  fs::remove_all(dir);
}

TEST_CASE("binary exit codes") {
  CHECK(run_binary("capacity --model aklt --theta 0.9553 --n 16") == 0);
  CHECK(run_binary("verify --model mg --n-max 10") == 0);
  CHECK(run_binary("capacity --model mg --g 2") == 2);
  CHECK(run_binary("capacity --model nope") == 2);
  CHECK(run_binary("frobnicate") == 2);
  CHECK(run_binary("sweep --model mg --g 0:0.9") == 2);
  CHECK(run_binary("--version") == 0);
  CHECK(run_binary("oracle --model mg --g 0.3 --n 6") == 0);

  const auto cfg = fs::temp_directory_path() / "mpscap_cli_config.json";
  std::ofstream(cfg) << R"({"model": "mg", "g": 0.5, "n": 4})";
  CHECK(run_binary("capacity --config " + cfg.string()) == 0);
  CHECK(run_binary("capacity --config " + cfg.string() + " --g 7") == 2);
  std::ofstream(cfg) << "{broken";
  CHECK(run_binary("capacity --config " + cfg.string()) == 2);
  fs::remove(cfg);
}
