#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include "capi_handles.hpp"

namespace mpscap_cli {

namespace {

constexpr double kSpectrumTol = 1e-12;
constexpr double kTwoPathTol = 1e-9;
constexpr double kTraceTol = 1e-10;

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

nlohmann::ordered_json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

// One model instance to evaluate, with the parameter shown in outputs.
struct Point {
  ModelChoice kind;
  std::optional<double> param;
  Model model;
};

const char* param_name(ModelChoice k) { return k == ModelChoice::aklt ? "theta" : k == ModelChoice::mg ? "g" : ""; }

std::vector<double> default_grid(ModelChoice k) {
  std::vector<double> v;
  if (k == ModelChoice::aklt) {
    for (int i = 0; i <= 15; ++i) v.push_back(i / 10.0);
    v.push_back(mpscap_aklt_ground_theta());
    std::sort(v.begin(), v.end());
  } else {
    for (int i = 0; i <= 19; ++i) v.push_back(i / 20.0);
  }
  return v;
}

ModelChoice require_model(const RunConfig& c) {
  if (!c.model) throw ConfigError(std::string(to_string(c.command)) + " needs --model (aklt, mg or custom)");
  return *c.model;
}

Model build_model(ModelChoice k, double param) {
  return k == ModelChoice::aklt ? make<Model>(mpscap_model_aklt, param) : make<Model>(mpscap_model_mg, param);
}

std::vector<Point> points_for(const RunConfig& c, bool sweep) {
  const auto k = require_model(c);
  std::vector<Point> pts;
  if (k == ModelChoice::custom) {
    pts.push_back({k, std::nullopt, make<Model>(mpscap_model_load, c.model_file.c_str())});
    return pts;
  }
  auto values = k == ModelChoice::aklt ? c.theta : c.g;
  if (values.empty())
    values = sweep ? default_grid(k)
                   : std::vector<double>{k == ModelChoice::aklt ? mpscap_aklt_ground_theta() : 0.5};
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  for (double v : values) pts.push_back({k, v, build_model(k, v)});
  return pts;
}

int default_n(const RunConfig& c, ModelChoice k) {
  if (c.n) return *c.n;
  switch (c.command) {
    case Command::capacity:
    case Command::sweep: return k == ModelChoice::aklt ? 14 : k == ModelChoice::mg ? 20 : 10;
    case Command::spectrum:
    case Command::oracle: return 8;
    case Command::channel: return 2;
    case Command::verify: break;
  }
  return 10;
}

// Opens the artifact target; stdout when no path is configured.
class Sink {
 public:
  Sink(const RunConfig& c, std::ostream& fallback) : os_(&fallback) {
    if (c.output.empty()) return;
    path_ = resolve_output_path(c.output);
    file_.open(path_, std::ios::binary);
    if (!file_) throw ConfigError("cannot open '" + path_ + "' for writing");
    os_ = &file_;
  }
  std::ostream& stream() { return *os_; }
  void finish() {
    os_->flush();
    if (!*os_) throw ConfigError("failed writing output" + (path_.empty() ? std::string() : " '" + path_ + "'"));
  }

 private:
  std::ostream* os_;
  std::ofstream file_;
  std::string path_;
};

void require_not_svg(const RunConfig& c) {
  if (c.format == Format::svg)
    throw ConfigError(std::string("format svg is not available for ") + to_string(c.command));
}

// ---- capacity / sweep

struct CapacityRow {
  std::string model;
  std::optional<double> param;
  int n = 0;
  std::string estimator;
  double closed_form = std::numeric_limits<double>::quiet_NaN();
  double numeric = 0.0;
};

std::vector<CapacityRow> rows_for(const Point& p, const mpscap_capacity_estimate& e, Estimator est) {
  std::vector<CapacityRow> rows;
  const double cf = e.has_closed_form ? e.closed_form : std::numeric_limits<double>::quiet_NaN();
  if (est != Estimator::cond) rows.push_back({to_string(p.kind), p.param, e.n, "avg", cf, e.estimate_avg});
  if (est != Estimator::avg) rows.push_back({to_string(p.kind), p.param, e.n, "cond", cf, e.estimate_cond});
  return rows;
}

void write_capacity(const RunConfig& c, std::ostream& os, const std::vector<CapacityRow>& rows) {
  if (c.format == Format::csv) {
    os << "model,param,n,estimator,closed_form,numeric,gap\n";
    for (const auto& r : rows)
      os << r.model << ',' << (r.param ? num(*r.param) : "") << ',' << r.n << ',' << r.estimator << ','
         << num(r.closed_form) << ',' << num(r.numeric) << ',' << num(std::abs(r.numeric - r.closed_form)) << '\n';
    return;
  }
  nlohmann::ordered_json j;
  j["command"] = to_string(c.command);
  j["estimator"] = to_string(c.estimator);
  j["prune_tol"] = c.prune_tol;
  auto& arr = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["model"] = r.model;
    row["param"] = r.param ? nlohmann::ordered_json(*r.param) : nlohmann::ordered_json(nullptr);
    row["n"] = r.n;
    row["estimator"] = r.estimator;
    row["closed_form"] = json_number(r.closed_form);
    row["numeric"] = r.numeric;
    row["gap"] = json_number(std::abs(r.numeric - r.closed_form));
    arr.push_back(std::move(row));
  }
  os << j.dump(2) << '\n';
}

mpscap_capacity_estimate estimate(const RunConfig& c, const Point& p, int n, int workers) {
  mpscap_capacity_estimate e{};
  check(mpscap_capacity_estimate_run(p.model.get(), n, c.prune_tol, 4, workers, &e));
  return e;
}

int cmd_capacity(const RunConfig& c, std::ostream& out) {
  const auto pts = points_for(c, false);
  const int n = default_n(c, pts.front().kind);
  Sink sink(c, out);
  if (c.format == Format::svg) {
    if (pts.size() != 1) throw ConfigError("capacity --format svg plots one parameter value");
    const auto& p = pts.front();
    std::vector<mpscap_entropy_row> trace(static_cast<std::size_t>(n));
    check(mpscap_entropy_trace(p.model.get(), n, c.prune_tol, c.workers, trace.data()));
    const double log_d = std::log2(static_cast<double>(mpscap_model_local_dim(p.model.get())));
    Plot plot{std::string(to_string(p.kind)) + " capacity estimate vs n", "n", "capacity (bits)", {}};
    if (c.estimator != Estimator::cond) {
      Series s{"avg", {}};
      for (const auto& r : trace) s.points.emplace_back(r.n, log_d - r.rate_avg);
      plot.series.push_back(std::move(s));
    }
    if (c.estimator != Estimator::avg) {
      Series s{"cond", {}};
      for (const auto& r : trace) s.points.emplace_back(r.n, log_d - r.rate_cond);
      plot.series.push_back(std::move(s));
    }
    double cf = 0.0;
    if (mpscap_closed_form_capacity(p.model.get(), &cf) == MPSCAP_OK)
      plot.series.push_back({"closed form", {{1.0, cf}, {static_cast<double>(n), cf}}});
    sink.stream() << render_svg(plot);
    sink.finish();
    return kExitOk;
  }
  std::vector<CapacityRow> rows;
  for (const auto& p : pts) {
    const auto r = rows_for(p, estimate(c, p, n, c.workers), c.estimator);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  write_capacity(c, sink.stream(), rows);
  sink.finish();
  return kExitOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  const auto pts = points_for(c, true);
  if (pts.front().kind == ModelChoice::custom) throw ConfigError("sweep needs a parametrised model (aklt or mg)");
  const int n = default_n(c, pts.front().kind);

  // Points are independent; each slot is written by exactly one worker.
  std::vector<mpscap_capacity_estimate> results(pts.size());
  std::vector<std::string> errors(pts.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < pts.size(); i = next++) {
      try {
        results[i] = estimate(c, pts[i], n, 1);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(c.workers), pts.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!errors[i].empty()) throw std::runtime_error("sweep point " + num(*pts[i].param) + ": " + errors[i]);

  Sink sink(c, out);
  if (c.format == Format::svg) {
    Plot plot{std::string(to_string(pts.front().kind)) + " capacity, n = " + std::to_string(n),
              param_name(pts.front().kind), "capacity (bits)", {}};
    Series cf{"closed form", {}}, avg{"avg", {}}, cond{"cond", {}};
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double x = *pts[i].param;
      cf.points.emplace_back(x, results[i].closed_form);
      avg.points.emplace_back(x, results[i].estimate_avg);
      cond.points.emplace_back(x, results[i].estimate_cond);
    }
    plot.series.push_back(std::move(cf));
    if (c.estimator != Estimator::cond) plot.series.push_back(std::move(avg));
    if (c.estimator != Estimator::avg) plot.series.push_back(std::move(cond));
    sink.stream() << render_svg(plot);
  } else {
    std::vector<CapacityRow> rows;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto r = rows_for(pts[i], results[i], c.estimator);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    write_capacity(c, sink.stream(), rows);
  }
  sink.finish();
  return kExitOk;
}

// ---- spectrum

std::vector<double> expanded(const mpscap_spectrum* s) {
  std::vector<double> v;
  for (std::size_t i = 0; i < mpscap_spectrum_size(s); ++i) {
    double value = 0.0;
    std::uint64_t mult = 0;
    check(mpscap_spectrum_entry(s, i, nullptr, &value, &mult));
    v.insert(v.end(), mult, value);
  }
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

int cmd_spectrum(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto pts = points_for(c, false);
  if (pts.size() != 1) throw ConfigError("spectrum takes a single parameter value");
  const auto& p = pts.front();
  const int n = default_n(c, p.kind);

  Spectrum closed;
  if (p.kind != ModelChoice::custom) closed = make<Spectrum>(mpscap_spectrum_closed_form, p.model.get(), n);
  const auto dist = make<Distribution>(mpscap_enumerate, p.model.get(), n, c.prune_tol, c.workers);
  const auto enumerated = make<Spectrum>(mpscap_spectrum_enumerated, dist.get(), 1e-9);
  const double distance =
      closed ? mpscap_spectrum_distance(closed.get(), enumerated.get(), c.prune_tol) : std::numeric_limits<double>::quiet_NaN();
  if (closed)
    err << "spectrum " << to_string(p.kind) << ' ' << param_name(p.kind) << '=' << num(*p.param) << " n=" << n
        << ": max element-wise distance " << num(distance) << '\n';

  Sink sink(c, out);
  auto& os = sink.stream();
  if (c.format == Format::csv) {
    if (closed) os << text_of(mpscap_spectrum_write_csv, closed.get(), "closed_form", 1);
    os << text_of(mpscap_spectrum_write_csv, enumerated.get(), "enumerated", closed ? 0 : 1);
  } else if (c.format == Format::json) {
    nlohmann::ordered_json j;
    j["model"] = to_string(p.kind);
    j["param"] = p.param ? nlohmann::ordered_json(*p.param) : nlohmann::ordered_json(nullptr);
    j["n"] = n;
    j["closed_form"] = closed ? nlohmann::ordered_json::parse(text_of(mpscap_spectrum_write_json, closed.get()))
                              : nlohmann::ordered_json(nullptr);
    j["enumerated"] = nlohmann::ordered_json::parse(text_of(mpscap_spectrum_write_json, enumerated.get()));
    j["distance"] = json_number(distance);
    os << j.dump(2) << '\n';
  } else {
    Plot plot{"sorted spectrum, n = " + std::to_string(n), "rank", "probability", {}};
    auto add = [&](const std::string& name, const mpscap_spectrum* s) {
      Series series{name, {}};
      const auto v = expanded(s);
      for (std::size_t i = 0; i < v.size(); ++i) series.points.emplace_back(static_cast<double>(i + 1), v[i]);
      plot.series.push_back(std::move(series));
    };
    if (closed) add("closed form", closed.get());
    add("enumerated", enumerated.get());
    os << render_svg(plot);
  }
  sink.finish();
  return kExitOk;
}

// ---- oracle

int cmd_oracle(const RunConfig& c, std::ostream& out) {
  require_not_svg(c);
  const auto pts = points_for(c, false);
  const int n = default_n(c, pts.front().kind);
  struct Row {
    const Point* p;
    std::size_t pruned, support;
    double diff, pruned_mass;
  };
  std::vector<Row> rows;
  bool all_match = true;
  for (const auto& p : pts) {
    const auto pruned = make<Distribution>(mpscap_enumerate, p.model.get(), n, c.prune_tol, c.workers);
    const auto full = make<Distribution>(mpscap_enumerate_exhaustive, p.model.get(), n);
    double diff = 0.0;
    check(mpscap_distribution_distance(pruned.get(), full.get(), &diff));
    std::size_t support = 0;
    for (std::size_t i = 0; i < mpscap_distribution_size(full.get()); ++i) {
      double prob = 0.0;
      check(mpscap_distribution_item(full.get(), i, nullptr, 0, &prob));
      support += prob > 0.0 ? 1 : 0;
    }
    all_match = all_match && diff <= kSpectrumTol;
    rows.push_back({&p, mpscap_distribution_size(pruned.get()), support, diff,
                    mpscap_distribution_pruned_mass(pruned.get())});
  }
  Sink sink(c, out);
  auto& os = sink.stream();
  if (c.format == Format::csv) {
    os << "model,param,n,pruned_strings,exhaustive_support,max_abs_diff,pruned_mass,status\n";
    for (const auto& r : rows)
      os << to_string(r.p->kind) << ',' << (r.p->param ? num(*r.p->param) : "") << ',' << n << ',' << r.pruned << ','
         << r.support << ',' << num(r.diff) << ',' << num(r.pruned_mass) << ','
         << (r.diff <= kSpectrumTol ? "match" : "mismatch") << '\n';
  } else {
    nlohmann::ordered_json j;
    j["command"] = "oracle";
    j["n"] = n;
    j["tolerance"] = kSpectrumTol;
    auto& arr = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows)
      arr.push_back({{"model", to_string(r.p->kind)},
                     {"param", r.p->param ? nlohmann::ordered_json(*r.p->param) : nlohmann::ordered_json(nullptr)},
                     {"pruned_strings", r.pruned},
                     {"exhaustive_support", r.support},
                     {"max_abs_diff", r.diff},
                     {"pruned_mass", r.pruned_mass},
                     {"match", r.diff <= kSpectrumTol}});
    j["passed"] = all_match;
    os << j.dump(2) << '\n';
  }
  sink.finish();
  return all_match ? kExitOk : kExitVerificationFailed;
}

// ---- channel

int cmd_channel(const RunConfig& c, std::ostream& out) {
  require_not_svg(c);
  const auto pts = points_for(c, false);
  const int n = default_n(c, pts.front().kind);
  std::vector<std::pair<const Point*, mpscap_capacity_estimate>> rows;
  bool ok = true;
  for (const auto& p : pts) {
    mpscap_capacity_estimate e{};
    check(mpscap_capacity_estimate_run(p.model.get(), n, c.prune_tol, n, c.workers, &e));
    ok = ok && e.tp_residual <= kTraceTol && e.path_gap <= kTwoPathTol;
    rows.emplace_back(&p, e);
  }
  auto status = [](const mpscap_capacity_estimate& e) {
    return e.tp_residual <= kTraceTol && e.path_gap <= kTwoPathTol ? "ok" : "mismatch";
  };
  Sink sink(c, out);
  auto& os = sink.stream();
  if (c.format == Format::csv) {
    os << "model,param,n,kraus_count,tp_residual,env_entropy,complementary_entropy,channel_estimate,"
          "entropy_estimate,path_gap,status\n";
    for (const auto& [p, e] : rows)
      os << to_string(p->kind) << ',' << (p->param ? num(*p->param) : "") << ',' << n << ',' << e.kraus_count << ','
         << num(e.tp_residual) << ',' << num(e.entropy) << ',' << num(e.complementary_entropy) << ','
         << num(e.channel_estimate) << ',' << num(e.estimate_avg) << ',' << num(e.path_gap) << ',' << status(e)
         << '\n';
  } else {
    nlohmann::ordered_json j;
    j["command"] = "channel";
    j["n"] = n;
    j["symbol_map"] = "symbol i -> phase index i-1";
    j["input"] = "maximally mixed";
    auto& arr = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& [p, e] : rows)
      arr.push_back({{"model", to_string(p->kind)},
                     {"param", p->param ? nlohmann::ordered_json(*p->param) : nlohmann::ordered_json(nullptr)},
                     {"kraus_count", e.kraus_count},
                     {"tp_residual", e.tp_residual},
                     {"env_entropy", e.entropy},
                     {"complementary_entropy", e.complementary_entropy},
                     {"output_entropy", e.output_entropy},
                     {"channel_estimate", e.channel_estimate},
                     {"entropy_estimate", e.estimate_avg},
                     {"path_gap", e.path_gap},
                     {"status", status(e)}});
    j["passed"] = ok;
    os << j.dump(2) << '\n';
  }
  sink.finish();
  return ok ? kExitOk : kExitVerificationFailed;
}

// ---- verify

struct CheckLine {
  std::string module, name, detail;
  bool passed;
};

void collect_check(const char* module, const char* name, int passed, const char* detail, void* user) {
  static_cast<std::vector<CheckLine>*>(user)->push_back({module, name, detail, passed != 0});
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require_not_svg(c);
  mpscap_verify_options o;
  mpscap_verify_options_init(&o);
  Model custom;
  if (c.model) {
    o.aklt = *c.model == ModelChoice::aklt;
    o.mg = *c.model == ModelChoice::mg;
    if (*c.model == ModelChoice::custom) {
      custom = make<Model>(mpscap_model_load, c.model_file.c_str());
      o.custom = custom.get();
    }
  }
  if (c.n_max) o.n_max = *c.n_max;
  else if (c.n) o.n_max = *c.n;
  o.prune_tol = c.prune_tol;
  o.workers = c.workers;

  std::vector<CheckLine> lines;
  std::size_t run = 0, failed = 0;
  const auto st = mpscap_verify(&o, collect_check, &lines, &run, &failed);
  if (st != MPSCAP_OK && st != MPSCAP_VERIFICATION) check(st);

  Sink sink(c, out);
  auto& os = sink.stream();
  if (c.format == Format::csv) {
    os << "module,check,status,detail\n";
    for (const auto& l : lines)
      os << l.module << ',' << csv_field(l.name) << ',' << (l.passed ? "pass" : "fail") << ',' << csv_field(l.detail)
         << '\n';
  } else {
    nlohmann::ordered_json j;
    j["command"] = "verify";
    j["n_max"] = o.n_max;
    auto& arr = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& l : lines)
      arr.push_back({{"module", l.module}, {"check", l.name}, {"passed", l.passed}, {"detail", l.detail}});
    j["passed"] = failed == 0;
    os << j.dump(2) << '\n';
  }
  sink.finish();
  for (const auto& l : lines)
    if (!l.passed) err << "FAIL " << l.module << ": " << l.name << " (" << l.detail << ")\n";
  err << "verify: " << run - failed << '/' << run << " checks passed\n";
  return failed == 0 ? kExitOk : kExitVerificationFailed;
}

int exit_code_for(mpscap_status st) {
  switch (st) {
    case MPSCAP_VERIFICATION:
    case MPSCAP_CONVERGENCE:
    case MPSCAP_INTERNAL: return kExitVerificationFailed;
    default: return kExitConfigError;
  }
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::capacity: return cmd_capacity(config, out);
      case Command::sweep: return cmd_sweep(config, out);
      case Command::spectrum: return cmd_spectrum(config, out, err);
      case Command::verify: return cmd_verify(config, out, err);
      case Command::oracle: return cmd_oracle(config, out);
      case Command::channel: return cmd_channel(config, out);
    }
    throw ConfigError("unknown command");
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const LibraryError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.status());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerificationFailed;
  }
}

}  // namespace mpscap_cli
