#include "run_config.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>

#include "mpscap/mpscap.h"

namespace mpscap_cli {

namespace {

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw ConfigError("cannot parse " + what + " '" + s + "'");
  return v;
}

std::vector<double> values_from_json(const nlohmann::json& j, const std::string& key) {
  if (j.is_number()) return {j.get<double>()};
  if (j.is_string()) return parse_grid(j.get<std::string>());
  if (j.is_array()) {
    std::vector<double> out;
    for (const auto& v : j) {
      if (!v.is_number()) throw ConfigError("'" + key + "' array must hold numbers");
      out.push_back(v.get<double>());
    }
    if (out.empty()) throw ConfigError("'" + key + "' is empty");
    return out;
  }
  throw ConfigError("'" + key + "' must be a number, a grid string or an array");
}

template <class T>
T get_as(const nlohmann::json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  const auto first = text.find(':');
  if (first == std::string::npos) return {parse_double(text, "value")};
  const auto second = text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos)
    throw ConfigError("grid must be start:stop:step, got '" + text + "'");
  const double start = parse_double(text.substr(0, first), "grid start");
  const double stop = parse_double(text.substr(first + 1, second - first - 1), "grid stop");
  const double step = parse_double(text.substr(second + 1), "grid step");
  if (step <= 0.0) throw ConfigError("grid step must be positive");
  if (stop < start) throw ConfigError("grid stop is below start");
  const double span = (stop - start) / step;
  if (span > 1e6) throw ConfigError("grid has too many points");
  const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  // Snap to 12 decimals so 0.1 steps print as written.
  for (long i = 0; i < count; ++i) out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
  return out;
}

Command parse_command(const std::string& s) {
  if (s == "capacity") return Command::capacity;
  if (s == "sweep") return Command::sweep;
  if (s == "spectrum") return Command::spectrum;
  if (s == "verify") return Command::verify;
  if (s == "oracle") return Command::oracle;
  if (s == "channel") return Command::channel;
  throw ConfigError("unknown command '" + s + "'");
}

const char* to_string(Command c) {
  switch (c) {
    case Command::capacity: return "capacity";
    case Command::sweep: return "sweep";
    case Command::spectrum: return "spectrum";
    case Command::verify: return "verify";
    case Command::oracle: return "oracle";
    case Command::channel: return "channel";
  }
  return "?";
}

const char* to_string(ModelChoice m) {
  switch (m) {
    case ModelChoice::aklt: return "aklt";
    case ModelChoice::mg: return "mg";
    case ModelChoice::custom: return "custom";
  }
  return "?";
}

const char* to_string(Estimator e) {
  switch (e) {
    case Estimator::avg: return "avg";
    case Estimator::cond: return "cond";
    case Estimator::both: return "both";
  }
  return "?";
}

RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  bool theta_ground = false, g_ground = false;
  for (const auto& [key, v] : j.items()) {
    if (key == "command") {
      c.command = parse_command(get_as<std::string>(v, key));
    } else if (key == "model") {
      const auto m = get_as<std::string>(v, key);
      if (m == "aklt") c.model = ModelChoice::aklt;
      else if (m == "mg") c.model = ModelChoice::mg;
      else if (m == "custom") c.model = ModelChoice::custom;
      else throw ConfigError("unknown model '" + m + "' (expected aklt, mg or custom)");
    } else if (key == "model_file") {
      c.model_file = get_as<std::string>(v, key);
    } else if (key == "theta") {
      c.theta = values_from_json(v, key);
    } else if (key == "g") {
      c.g = values_from_json(v, key);
    } else if (key == "theta_ground") {
      theta_ground = get_as<bool>(v, key);
    } else if (key == "g_ground") {
      g_ground = get_as<bool>(v, key);
    } else if (key == "n") {
      c.n = get_as<int>(v, key);
    } else if (key == "n_max") {
      c.n_max = get_as<int>(v, key);
    } else if (key == "estimator") {
      const auto e = get_as<std::string>(v, key);
      if (e == "avg") c.estimator = Estimator::avg;
      else if (e == "cond") c.estimator = Estimator::cond;
      else if (e == "both") c.estimator = Estimator::both;
      else throw ConfigError("unknown estimator '" + e + "' (expected avg, cond or both)");
    } else if (key == "prune_tol") {
      c.prune_tol = get_as<double>(v, key);
    } else if (key == "output") {
      c.output = get_as<std::string>(v, key);
    } else if (key == "format") {
      const auto f = get_as<std::string>(v, key);
      if (f == "csv") c.format = Format::csv;
      else if (f == "json") c.format = Format::json;
      else if (f == "svg") c.format = Format::svg;
      else throw ConfigError("unknown format '" + f + "' (expected csv, json or svg)");
    } else if (key == "workers") {
      c.workers = get_as<int>(v, key);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  if (theta_ground) c.theta.push_back(mpscap_aklt_ground_theta());
  if (g_ground) c.g.push_back(0.5);
  if (!c.model_file.empty() && !c.model) c.model = ModelChoice::custom;
  if (c.model == ModelChoice::custom && c.model_file.empty()) throw ConfigError("model custom needs --model-file");
  if (!c.model) {
    if (!c.theta.empty() && c.g.empty()) c.model = ModelChoice::aklt;
    else if (!c.g.empty() && c.theta.empty()) c.model = ModelChoice::mg;
  }
  if (c.model == ModelChoice::aklt && !c.g.empty()) throw ConfigError("--g does not apply to the aklt model");
  if (c.model == ModelChoice::mg && !c.theta.empty()) throw ConfigError("--theta does not apply to the mg model");
  if (c.model == ModelChoice::custom && (!c.theta.empty() || !c.g.empty()))
    throw ConfigError("custom models take no --theta/--g");
  if (c.n && *c.n < 1) throw ConfigError("n must be at least 1");
  if (c.n_max && *c.n_max < 1) throw ConfigError("n_max must be at least 1");
  if (!(c.prune_tol >= 0.0) || c.prune_tol >= 1e-3) throw ConfigError("prune_tol must be in [0, 1e-3)");
  if (c.workers < 1 || c.workers > 256) throw ConfigError("workers must be in [1, 256]");
  return c;
}

std::string resolve_output_path(const std::string& path) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  if (const char* dir = std::getenv("MPSCAP_OUTPUT_DIR"); dir && *dir) return (std::filesystem::path(dir) / p).string();
  return path;
}

}  // namespace mpscap_cli
