#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cli.hpp"
#include "mpscap/mpscap.h"

namespace {

struct Flags {
  std::optional<std::string> model, model_file, theta, g, estimator, output, format, config;
  std::optional<int> n, n_max, workers;
  std::optional<double> prune_tol;
  bool theta_ground = false, g_ground = false;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--model", f.model, "aklt, mg or custom")->check(CLI::IsMember({"aklt", "mg", "custom"}));
  sub->add_option("--model-file", f.model_file, "JSON model file (implies --model custom)");
  sub->add_option("--theta", f.theta, "AKLT angle in radians: value or start:stop:step");
  sub->add_option("--g", f.g, "MG parameter in [0,1): value or start:stop:step");
  sub->add_flag("--theta-ground", f.theta_ground, "use the AKLT ground-state angle");
  sub->add_flag("--g-ground", f.g_ground, "use the MG ground-state value 1/2");
  sub->add_option("--n", f.n, "string length");
  sub->add_option("--n-max", f.n_max, "largest string length (verify)");
  sub->add_option("--estimator", f.estimator, "avg, cond or both")->check(CLI::IsMember({"avg", "cond", "both"}));
  sub->add_option("--prune-tol", f.prune_tol, "probability below which subtrees are cut");
  sub->add_option("--output,-o", f.output, "output path (stdout when omitted)");
  sub->add_option("--format", f.format, "csv, json or svg")->check(CLI::IsMember({"csv", "json", "svg"}));
  sub->add_option("--config", f.config, "JSON run configuration; flags override its keys");
  sub->add_option("--workers", f.workers, "worker threads");
}

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mpscap_cli::ConfigError("cannot read config '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw mpscap_cli::ConfigError("config '" + path + "': " + e.what());
  }
}

mpscap_cli::RunConfig merge(const std::string& command, const Flags& f) {
  nlohmann::json j = f.config ? load_config(*f.config) : nlohmann::json::object();
  if (!j.is_object()) throw mpscap_cli::ConfigError("config must be a JSON object");
  j["command"] = command;
  if (f.model) j["model"] = *f.model;
  if (f.model_file) j["model_file"] = *f.model_file;
  if (f.theta) j["theta"] = *f.theta;
  if (f.g) j["g"] = *f.g;
  if (f.theta_ground) j["theta_ground"] = true;
  if (f.g_ground) j["g_ground"] = true;
  if (f.n) j["n"] = *f.n;
  if (f.n_max) j["n_max"] = *f.n_max;
  if (f.estimator) j["estimator"] = *f.estimator;
  if (f.prune_tol) j["prune_tol"] = *f.prune_tol;
  if (f.output) j["output"] = *f.output;
  if (f.format) j["format"] = *f.format;
  if (f.workers) j["workers"] = *f.workers;
  if (!j.contains("format") && j.contains("output") && j["output"].is_string()) {
    const auto ext = std::filesystem::path(j["output"].get<std::string>()).extension().string();
    if (ext == ".json" || ext == ".svg") j["format"] = ext.substr(1);
  }
  return mpscap_cli::config_from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacities of dephasing channels with matrix-product-state environments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("mpscap ") + mpscap_version());
  Flags flags;
  const std::pair<const char*, const char*> commands[] = {
      {"capacity", "closed-form and numeric capacity at one n"},
      {"sweep", "capacity over a parameter grid"},
      {"spectrum", "closed-form and enumerated spectra side by side"},
      {"verify", "run the invariant suites; exit 1 on any failure"},
      {"oracle", "pruned versus exhaustive enumeration"},
      {"channel", "explicit finite-n channel and the two-path entropy check"},
  };
  for (const auto& [name, help] : commands) add_flags(app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mpscap_cli::kExitConfigError;
  }

  try {
    const auto config = merge(app.get_subcommands().front()->get_name(), flags);
    return mpscap_cli::run(config, std::cout, std::cerr);
  } catch (const mpscap_cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return mpscap_cli::kExitConfigError;
  }
}
