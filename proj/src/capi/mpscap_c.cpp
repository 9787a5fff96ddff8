#include "mpscap/mpscap.h"

#include <cmath>
#include <limits>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "mpscap/channel_sim.hpp"
#include "mpscap/closed_form.hpp"
#include "mpscap/diag_process.hpp"
#include "mpscap/errors.hpp"
#include "mpscap/mps_model.hpp"
#include "mpscap/verify.hpp"

struct mpscap_model {
  mpscap::MpsModel value;
};
struct mpscap_distribution {
  mpscap::DiagDistribution value;
};
struct mpscap_spectrum {
  mpscap::Spectrum value;
};
struct mpscap_table {
  mpscap::MultiplicityTable value;
  std::vector<mpscap::TableEntry> entries;
};
struct mpscap_channel {
  mpscap::KrausChannel value;
};
struct mpscap_density {
  mpscap::DensityMatrix value;
};
struct mpscap_text {
  std::string value;
};

namespace {

thread_local std::string g_last_error;

void set_error(std::string msg) { g_last_error = std::move(msg); }

// Maps the C++ exception hierarchy onto status codes; no exception crosses the C boundary.
template <class Fn>
mpscap_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return MPSCAP_OK;
  } catch (const mpscap::DomainError& e) {
    set_error(e.what());
    return MPSCAP_DOMAIN;
  } catch (const mpscap::StructuralError& e) {
    set_error(e.what());
    return MPSCAP_STRUCTURE;
  } catch (const mpscap::ValidationError& e) {
    set_error(e.what());
    return MPSCAP_VALIDATION;
  } catch (const mpscap::ConvergenceError& e) {
    set_error(e.what());
    return MPSCAP_CONVERGENCE;
  } catch (const mpscap::ResourceError& e) {
    set_error(e.what());
    return MPSCAP_RESOURCE;
  } catch (const mpscap::IoError& e) {
    set_error(e.what());
    return MPSCAP_IO;
  } catch (const mpscap::ParseError& e) {
    set_error(e.what());
    return MPSCAP_PARSE;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return MPSCAP_RESOURCE;
  } catch (const std::exception& e) {
    set_error(e.what());
    return MPSCAP_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return MPSCAP_INTERNAL;
  }
}

mpscap_status invalid(const char* what) {
  set_error(std::string("invalid argument: ") + what);
  return MPSCAP_INVALID_ARGUMENT;
}

#define MPSCAP_REQUIRE(cond, what) \
  do {                             \
    if (!(cond)) return invalid(what); \
  } while (0)

mpscap_status make_text(std::string s, mpscap_text** out) {
  return guarded([&] { *out = new mpscap_text{std::move(s)}; });
}

}  // namespace

extern "C" {

const char* mpscap_version(void) { return "0.1.0"; }
const char* mpscap_last_error(void) { return g_last_error.c_str(); }

const char* mpscap_status_name(mpscap_status status) {
  switch (status) {
    case MPSCAP_OK: return "ok";
    case MPSCAP_INVALID_ARGUMENT: return "invalid argument";
    case MPSCAP_DOMAIN: return "domain error";
    case MPSCAP_STRUCTURE: return "structural error";
    case MPSCAP_VALIDATION: return "validation error";
    case MPSCAP_CONVERGENCE: return "convergence error";
    case MPSCAP_RESOURCE: return "resource error";
    case MPSCAP_IO: return "io error";
    case MPSCAP_PARSE: return "parse error";
    case MPSCAP_VERIFICATION: return "verification failure";
    case MPSCAP_INTERNAL: return "internal error";
  }
  return "unknown status";
}

double mpscap_aklt_ground_theta(void) { return mpscap::aklt_ground_theta(); }

const char* mpscap_text_data(const mpscap_text* text) { return text ? text->value.c_str() : ""; }
size_t mpscap_text_size(const mpscap_text* text) { return text ? text->value.size() : 0; }
void mpscap_text_free(mpscap_text* text) { delete text; }

// ---- models

mpscap_status mpscap_model_aklt(double theta, mpscap_model** out) {
  MPSCAP_REQUIRE(out, "out");
  return guarded([&] { *out = new mpscap_model{mpscap::aklt_model(theta)}; });
}

mpscap_status mpscap_model_mg(double g, mpscap_model** out) {
  MPSCAP_REQUIRE(out, "out");
  return guarded([&] { *out = new mpscap_model{mpscap::mg_model(g)}; });
}

mpscap_status mpscap_model_from_json(const char* json, mpscap_model** out) {
  MPSCAP_REQUIRE(json && out, "json/out");
  return guarded([&] { *out = new mpscap_model{mpscap::model_from_json(json)}; });
}

mpscap_status mpscap_model_load(const char* path, mpscap_model** out) {
  MPSCAP_REQUIRE(path && out, "path/out");
  return guarded([&] { *out = new mpscap_model{mpscap::load_model(path)}; });
}

void mpscap_model_free(mpscap_model* model) { delete model; }

mpscap_model_kind mpscap_model_get_kind(const mpscap_model* model) {
  if (!model) return MPSCAP_MODEL_CUSTOM;
  switch (model->value.kind()) {
    case mpscap::ModelKind::aklt: return MPSCAP_MODEL_AKLT;
    case mpscap::ModelKind::mg: return MPSCAP_MODEL_MG;
    default: return MPSCAP_MODEL_CUSTOM;
  }
}

const char* mpscap_model_label(const mpscap_model* model) { return model ? model->value.label().c_str() : ""; }

int mpscap_model_param(const mpscap_model* model, const char* name, double* value) {
  if (!model || !name) return 0;
  const auto p = model->value.param(name);
  if (!p) return 0;
  if (value) *value = *p;
  return 1;
}

int mpscap_model_local_dim(const mpscap_model* model) { return model ? model->value.local_dim() : 0; }
int mpscap_model_bond_dim(const mpscap_model* model) { return model ? model->value.bond_dim() : 0; }

mpscap_status mpscap_model_validate(const mpscap_model* model, mpscap_residuals* out) {
  MPSCAP_REQUIRE(model && out, "model/out");
  return guarded([&] {
    const auto rep = mpscap::validate_model(model->value);
    out->completeness = rep.value("completeness");
    out->invariance = rep.value("invariance");
    out->hermiticity = rep.value("hermiticity");
    out->trace = rep.value("trace");
    out->positivity = rep.value("positivity");
    out->passed = rep.passed() ? 1 : 0;
  });
}

mpscap_status mpscap_string_probability(const mpscap_model* model, const int* symbols, size_t n, double* out) {
  MPSCAP_REQUIRE(model && out && (symbols || n == 0), "model/symbols/out");
  return guarded([&] { *out = mpscap::string_probability(model->value, std::span<const int>(symbols, n)); });
}

// ---- distributions

mpscap_status mpscap_enumerate(const mpscap_model* model, int n, double prune_tol, int workers,
                               mpscap_distribution** out) {
  MPSCAP_REQUIRE(model && out, "model/out");
  return guarded([&] {
    *out = new mpscap_distribution{mpscap::enumerate_distribution(model->value, n, prune_tol, workers)};
  });
}

mpscap_status mpscap_enumerate_exhaustive(const mpscap_model* model, int n, mpscap_distribution** out) {
  MPSCAP_REQUIRE(model && out, "model/out");
  return guarded([&] { *out = new mpscap_distribution{mpscap::enumerate_exhaustive(model->value, n)}; });
}

void mpscap_distribution_free(mpscap_distribution* dist) { delete dist; }
size_t mpscap_distribution_size(const mpscap_distribution* dist) { return dist ? dist->value.items.size() : 0; }
int mpscap_distribution_length(const mpscap_distribution* dist) { return dist ? dist->value.n : 0; }

mpscap_status mpscap_distribution_item(const mpscap_distribution* dist, size_t i, int* symbols, size_t cap,
                                       double* probability) {
  MPSCAP_REQUIRE(dist, "dist");
  MPSCAP_REQUIRE(i < dist->value.items.size(), "item index out of range");
  const auto& item = dist->value.items[i];
  MPSCAP_REQUIRE(!symbols || cap >= item.word.size(), "symbol buffer too small");
  if (symbols)
    for (std::size_t k = 0; k < item.word.size(); ++k) symbols[k] = static_cast<unsigned char>(item.word[k]);
  if (probability) *probability = item.probability;
  g_last_error.clear();
  return MPSCAP_OK;
}

double mpscap_distribution_total(const mpscap_distribution* dist) {
  return dist ? dist->value.total_probability() : 0.0;
}
double mpscap_distribution_pruned_mass(const mpscap_distribution* dist) {
  return dist ? dist->value.pruned_mass : 0.0;
}
double mpscap_distribution_entropy(const mpscap_distribution* dist) {
  return dist ? mpscap::shannon_entropy(dist->value) : 0.0;
}

mpscap_status mpscap_distribution_write_csv(const mpscap_distribution* dist, mpscap_text** out) {
  MPSCAP_REQUIRE(dist && out, "dist/out");
  std::ostringstream os;
  const auto st = guarded([&] { mpscap::write_distribution_csv(os, dist->value); });
  return st == MPSCAP_OK ? make_text(os.str(), out) : st;
}

mpscap_status mpscap_distribution_write_json(const mpscap_distribution* dist, mpscap_text** out) {
  MPSCAP_REQUIRE(dist && out, "dist/out");
  return guarded([&] { *out = new mpscap_text{mpscap::distribution_to_json(dist->value).dump(2)}; });
}

mpscap_status mpscap_distribution_distance(const mpscap_distribution* a, const mpscap_distribution* b,
                                           double* out) {
  MPSCAP_REQUIRE(a && b && out, "a/b/out");
  return guarded([&] { *out = mpscap::max_abs_difference(mpscap::as_map(a->value), mpscap::as_map(b->value)); });
}

mpscap_status mpscap_entropy_trace(const mpscap_model* model, int n_max, double prune_tol, int workers,
                                   mpscap_entropy_row* rows) {
  MPSCAP_REQUIRE(model && rows, "model/rows");
  return guarded([&] {
    const auto trace = mpscap::entropy_trace(model->value, n_max, prune_tol, workers);
    for (std::size_t i = 0; i < trace.rows.size(); ++i) {
      const auto& r = trace.rows[i];
      rows[i] = {r.n, r.entropy, r.rate_avg, r.rate_cond, r.pruned_mass};
    }
  });
}

// ---- closed forms

double mpscap_h2(double theta) { return mpscap::h2(theta); }

mpscap_status mpscap_aklt_capacity(double theta, double* out) {
  MPSCAP_REQUIRE(out, "out");
  return guarded([&] { *out = mpscap::aklt_capacity(theta); });
}

mpscap_status mpscap_mg_capacity(double g, double* out) {
  MPSCAP_REQUIRE(out, "out");
  return guarded([&] { *out = mpscap::mg_capacity(g); });
}

mpscap_status mpscap_closed_form_capacity(const mpscap_model* model, double* out) {
  MPSCAP_REQUIRE(model && out, "model/out");
  return guarded([&] {
    const auto c = mpscap::closed_form_capacity(model->value);
    if (!c) throw mpscap::DomainError("no closed-form capacity for model '" + model->value.label() + "'");
    *out = *c;
  });
}

mpscap_status mpscap_spectrum_aklt(int n, double theta, mpscap_spectrum** out) {
  MPSCAP_REQUIRE(out, "out");
  return guarded([&] { *out = new mpscap_spectrum{mpscap::aklt_spectrum(n, theta)}; });
}

mpscap_status mpscap_spectrum_mg(int n, double g, mpscap_spectrum** out) {
  MPSCAP_REQUIRE(out, "out");
  return guarded([&] { *out = new mpscap_spectrum{mpscap::mg_spectrum(n, g)}; });
}

mpscap_status mpscap_spectrum_closed_form(const mpscap_model* model, int n, mpscap_spectrum** out) {
  MPSCAP_REQUIRE(model && out, "model/out");
  return guarded([&] {
    auto s = mpscap::closed_form_spectrum(model->value, n);
    if (!s) throw mpscap::DomainError("no closed-form spectrum for model '" + model->value.label() + "'");
    *out = new mpscap_spectrum{std::move(*s)};
  });
}

mpscap_status mpscap_spectrum_enumerated(const mpscap_distribution* dist, double group_tol, mpscap_spectrum** out) {
  MPSCAP_REQUIRE(dist && out, "dist/out");
  return guarded([&] { *out = new mpscap_spectrum{mpscap::spectrum_of(dist->value, group_tol)}; });
}

void mpscap_spectrum_free(mpscap_spectrum* spectrum) { delete spectrum; }
size_t mpscap_spectrum_size(const mpscap_spectrum* spectrum) { return spectrum ? spectrum->value.entries.size() : 0; }

mpscap_status mpscap_spectrum_entry(const mpscap_spectrum* spectrum, size_t i, const char** family, double* value,
                                    uint64_t* multiplicity) {
  MPSCAP_REQUIRE(spectrum, "spectrum");
  MPSCAP_REQUIRE(i < spectrum->value.entries.size(), "entry index out of range");
  const auto& e = spectrum->value.entries[i];
  if (family) *family = e.family.c_str();
  if (value) *value = e.value;
  if (multiplicity) *multiplicity = e.multiplicity;
  g_last_error.clear();
  return MPSCAP_OK;
}

uint64_t mpscap_spectrum_total_multiplicity(const mpscap_spectrum* spectrum) {
  return spectrum ? spectrum->value.total_multiplicity() : 0;
}
double mpscap_spectrum_total_mass(const mpscap_spectrum* spectrum) {
  return spectrum ? spectrum->value.total_mass() : 0.0;
}

double mpscap_spectrum_distance(const mpscap_spectrum* a, const mpscap_spectrum* b, double floor) {
  if (!a || !b) return std::numeric_limits<double>::quiet_NaN();
  try {
    return mpscap::multiset_distance(a->value.expanded(), b->value.expanded(), floor);
  } catch (const std::exception& e) {
    set_error(e.what());
    return std::numeric_limits<double>::quiet_NaN();
  }
}

mpscap_status mpscap_spectrum_write_csv(const mpscap_spectrum* spectrum, const char* source, int header,
                                        mpscap_text** out) {
  MPSCAP_REQUIRE(spectrum && out, "spectrum/out");
  std::ostringstream os;
  const auto st =
      guarded([&] { mpscap::write_spectrum_csv(os, spectrum->value, source ? source : "", header != 0); });
  return st == MPSCAP_OK ? make_text(os.str(), out) : st;
}

mpscap_status mpscap_spectrum_write_json(const mpscap_spectrum* spectrum, mpscap_text** out) {
  MPSCAP_REQUIRE(spectrum && out, "spectrum/out");
  return guarded([&] { *out = new mpscap_text{mpscap::spectrum_to_json(spectrum->value).dump(2)}; });
}

// ---- multiplicity tables

namespace {
mpscap_table* wrap_table(mpscap::MultiplicityTable t) {
  auto entries = mpscap::table_entries(t);
  return new mpscap_table{std::move(t), std::move(entries)};
}
}  // namespace

mpscap_status mpscap_table_closed_form(int n, mpscap_table** out) {
  MPSCAP_REQUIRE(out, "out");
  return guarded([&] { *out = wrap_table(mpscap::mg_multiplicity_closed_form(n)); });
}

mpscap_status mpscap_table_reference_initial(mpscap_table** out) {
  MPSCAP_REQUIRE(out, "out");
  return guarded([&] { *out = wrap_table(mpscap::reference_initial_table()); });
}

mpscap_status mpscap_table_classified(int n, mpscap_table** out, uint64_t* unclassified) {
  MPSCAP_REQUIRE(out, "out");
  return guarded([&] {
    auto cl = mpscap::classify_mg_products(n);
    if (unclassified) *unclassified = cl.unclassified;
    *out = wrap_table(std::move(cl.table));
  });
}

mpscap_status mpscap_table_recurrence(const mpscap_table* initial, int n_max, mpscap_table** out) {
  MPSCAP_REQUIRE(initial && out, "initial/out");
  return guarded([&] {
    auto tables = mpscap::mg_multiplicity_recurrence(n_max, initial->value);
    *out = wrap_table(std::move(tables.back()));
  });
}

void mpscap_table_free(mpscap_table* table) { delete table; }
int mpscap_table_n(const mpscap_table* table) { return table ? table->value.n : 0; }
uint64_t mpscap_table_total(const mpscap_table* table) { return table ? table->value.total() : 0; }
uint64_t mpscap_table_zero_count(const mpscap_table* table) { return table ? table->value.z : 0; }
size_t mpscap_table_size(const mpscap_table* table) { return table ? table->entries.size() : 0; }

mpscap_status mpscap_table_entry(const mpscap_table* table, size_t i, const char** family, int* index,
                                 uint64_t* count) {
  MPSCAP_REQUIRE(table, "table");
  MPSCAP_REQUIRE(i < table->entries.size(), "entry index out of range");
  const auto& e = table->entries[i];
  if (family) *family = e.family.c_str();
  if (index) *index = e.index;
  if (count) *count = e.count;
  g_last_error.clear();
  return MPSCAP_OK;
}

int mpscap_table_equal(const mpscap_table* a, const mpscap_table* b) {
  return a && b && a->value == b->value ? 1 : 0;
}

mpscap_status mpscap_table_differences(const mpscap_table* a, const mpscap_table* b, mpscap_text** out) {
  MPSCAP_REQUIRE(a && b && out, "a/b/out");
  return guarded([&] {
    std::string s;
    for (const auto& d : mpscap::table_differences(a->value, b->value)) s += d + "\n";
    *out = new mpscap_text{std::move(s)};
  });
}

mpscap_status mpscap_table_write_csv(const mpscap_table* table, int header, mpscap_text** out) {
  MPSCAP_REQUIRE(table && out, "table/out");
  std::ostringstream os;
  const auto st = guarded([&] { mpscap::write_table_csv(os, table->value, header != 0); });
  return st == MPSCAP_OK ? make_text(os.str(), out) : st;
}

// ---- channels

mpscap_status mpscap_capacity_estimate_run(const mpscap_model* model, int n, double prune_tol,
                                           int channel_check_max_n, int workers, mpscap_capacity_estimate* out) {
  MPSCAP_REQUIRE(model && out, "model/out");
  return guarded([&] {
    const auto e = mpscap::capacity_estimate(model->value, n, prune_tol, channel_check_max_n, workers);
    out->n = e.n;
    out->local_dim = e.local_dim;
    out->entropy = e.entropy;
    out->estimate_avg = e.estimate_avg;
    out->estimate_cond = e.estimate_cond;
    out->has_closed_form = e.closed_form ? 1 : 0;
    out->closed_form = e.closed_form.value_or(std::numeric_limits<double>::quiet_NaN());
    out->channel_checked = e.channel_checked ? 1 : 0;
    out->kraus_count = e.kraus_count;
    out->tp_residual = e.tp_residual;
    out->output_entropy = e.output_entropy;
    out->complementary_entropy = e.complementary_entropy;
    out->channel_estimate = e.channel_estimate;
    out->path_gap = e.path_gap;
  });
}

mpscap_status mpscap_channel_dephasing(const mpscap_distribution* env, mpscap_channel** out) {
  MPSCAP_REQUIRE(env && out, "env/out");
  return guarded([&] { *out = new mpscap_channel{mpscap::dephasing_channel(env->value)}; });
}

void mpscap_channel_free(mpscap_channel* channel) { delete channel; }
size_t mpscap_channel_dim(const mpscap_channel* channel) { return channel ? channel->value.in_dim : 0; }
size_t mpscap_channel_kraus_count(const mpscap_channel* channel) {
  return channel ? channel->value.kraus.size() : 0;
}
double mpscap_channel_tp_residual(const mpscap_channel* channel) {
  return channel ? channel->value.trace_preservation_residual() : std::numeric_limits<double>::quiet_NaN();
}

mpscap_status mpscap_channel_apply(const mpscap_channel* channel, const mpscap_density* in, mpscap_density** out) {
  MPSCAP_REQUIRE(channel && in && out, "channel/in/out");
  return guarded([&] { *out = new mpscap_density{mpscap::apply_channel(channel->value, in->value)}; });
}

mpscap_status mpscap_channel_complementary(const mpscap_channel* channel, const mpscap_density* in,
                                           mpscap_density** out) {
  MPSCAP_REQUIRE(channel && in && out, "channel/in/out");
  return guarded([&] { *out = new mpscap_density{mpscap::complementary_output(channel->value, in->value)}; });
}

mpscap_status mpscap_stinespring_output(const mpscap_model* model, int n, const mpscap_density* sigma,
                                        mpscap_density** out) {
  MPSCAP_REQUIRE(model && sigma && out, "model/sigma/out");
  return guarded([&] { *out = new mpscap_density{mpscap::stinespring_output(model->value, n, sigma->value)}; });
}

mpscap_status mpscap_density_maximally_mixed(size_t dim, mpscap_density** out) {
  MPSCAP_REQUIRE(out && dim > 0, "dim/out");
  return guarded([&] { *out = new mpscap_density{mpscap::DensityMatrix::maximally_mixed(dim)}; });
}

mpscap_status mpscap_density_pure(const double* psi, size_t dim, mpscap_density** out) {
  MPSCAP_REQUIRE(psi && out && dim > 0, "psi/dim/out");
  return guarded([&] {
    std::vector<mpscap::Complex> v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = {psi[2 * i], psi[2 * i + 1]};
    *out = new mpscap_density{mpscap::DensityMatrix::pure(v)};
  });
}

mpscap_status mpscap_density_from_json(const char* json, mpscap_density** out) {
  MPSCAP_REQUIRE(json && out, "json/out");
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
      throw mpscap::ParseError(e.what());
    }
    *out = new mpscap_density{mpscap::density_from_json(j)};
  });
}

mpscap_status mpscap_density_to_json(const mpscap_density* rho, mpscap_text** out) {
  MPSCAP_REQUIRE(rho && out, "rho/out");
  return guarded([&] { *out = new mpscap_text{mpscap::density_to_json(rho->value).dump()}; });
}

void mpscap_density_free(mpscap_density* rho) { delete rho; }
size_t mpscap_density_dim(const mpscap_density* rho) { return rho ? rho->value.dim() : 0; }

mpscap_status mpscap_density_entry(const mpscap_density* rho, size_t r, size_t c, double* re, double* im) {
  MPSCAP_REQUIRE(rho, "rho");
  MPSCAP_REQUIRE(r < rho->value.dim() && c < rho->value.dim(), "entry index out of range");
  const auto v = rho->value.matrix()(r, c);
  if (re) *re = v.real();
  if (im) *im = v.imag();
  g_last_error.clear();
  return MPSCAP_OK;
}

double mpscap_density_entropy(const mpscap_density* rho) {
  if (!rho) return std::numeric_limits<double>::quiet_NaN();
  try {
    return mpscap::von_neumann_entropy(rho->value);
  } catch (const std::exception& e) {
    set_error(e.what());
    return std::numeric_limits<double>::quiet_NaN();
  }
}

double mpscap_density_max_abs_diff(const mpscap_density* a, const mpscap_density* b) {
  if (!a || !b || a->value.dim() != b->value.dim()) return std::numeric_limits<double>::quiet_NaN();
  return mpscap::max_abs_diff(a->value.matrix(), b->value.matrix());
}

// ---- verification

void mpscap_verify_options_init(mpscap_verify_options* opts) {
  if (!opts) return;
  const mpscap::VerifyOptions d;
  opts->aklt = d.aklt ? 1 : 0;
  opts->mg = d.mg ? 1 : 0;
  opts->custom = nullptr;
  opts->n_max = d.n_max;
  opts->prune_tol = d.prune_tol;
  opts->workers = d.workers;
}

mpscap_status mpscap_verify(const mpscap_verify_options* opts, mpscap_check_callback cb, void* user,
                            size_t* checks_run, size_t* checks_failed) {
  MPSCAP_REQUIRE(opts, "opts");
  bool all_passed = false;
  const auto st = guarded([&] {
    mpscap::VerifyOptions o;
    o.aklt = opts->aklt != 0;
    o.mg = opts->mg != 0;
    if (opts->custom) o.custom = opts->custom->value;
    o.n_max = opts->n_max;
    o.prune_tol = opts->prune_tol;
    o.workers = opts->workers;
    std::function<void(const mpscap::CheckResult&)> forward;
    if (cb)
      forward = [&](const mpscap::CheckResult& r) {
        cb(r.module.c_str(), r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str(), user);
      };
    const auto report = mpscap::run_verification(o, forward);
    std::size_t failed = 0;
    for (const auto& c : report.checks) failed += c.passed ? 0 : 1;
    if (checks_run) *checks_run = report.checks.size();
    if (checks_failed) *checks_failed = failed;
    all_passed = failed == 0;
  });
  if (st != MPSCAP_OK) return st;
  if (!all_passed) {
    set_error("one or more verification checks failed");
    return MPSCAP_VERIFICATION;
  }
  return MPSCAP_OK;
}

}  // extern "C"
