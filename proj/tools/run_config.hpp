#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace mpscap_cli {

enum class Command { capacity, sweep, spectrum, verify, oracle, channel };
enum class ModelChoice { aklt, mg, custom };
enum class Estimator { avg, cond, both };
enum class Format { csv, json, svg };

// Bad flags, bad config file or unusable output target; exits with status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::capacity;
  std::optional<ModelChoice> model;  // unset: both built-in models where that makes sense
  std::string model_file;
  std::vector<double> theta;
  std::vector<double> g;
  std::optional<int> n;
  std::optional<int> n_max;
  Estimator estimator = Estimator::cond;
  double prune_tol = 1e-14;
  std::string output;  // empty: stdout
  Format format = Format::csv;
  int workers = 1;
};

// Parses "v" or "start:stop:step" (stop inclusive).
std::vector<double> parse_grid(const std::string& text);

// Keys mirror RunConfig; theta and g accept a number, a grid string or an
// array of numbers. "theta_ground"/"g_ground" set the ground-state values.
RunConfig config_from_json(const nlohmann::json& j);

Command parse_command(const std::string& s);
const char* to_string(Command c);
const char* to_string(ModelChoice m);
const char* to_string(Estimator e);

// Resolves a relative output path against MPSCAP_OUTPUT_DIR when set.
std::string resolve_output_path(const std::string& path);

}  // namespace mpscap_cli
