/* C interface to the mpscap library. All handles are opaque and owned by the
 * caller once returned; release them with the matching *_free function.
 * Every fallible call returns an mpscap_status and leaves a message for
 * mpscap_last_error() on the calling thread. */
#ifndef MPSCAP_H
#define MPSCAP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MPSCAP_BUILDING_LIBRARY)
#    define MPSCAP_API __declspec(dllexport)
#  else
#    define MPSCAP_API __declspec(dllimport)
#  endif
#else
#  define MPSCAP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mpscap_status {
  MPSCAP_OK = 0,
  MPSCAP_INVALID_ARGUMENT = 1,
  MPSCAP_DOMAIN = 2,
  MPSCAP_STRUCTURE = 3,
  MPSCAP_VALIDATION = 4,
  MPSCAP_CONVERGENCE = 5,
  MPSCAP_RESOURCE = 6,
  MPSCAP_IO = 7,
  MPSCAP_PARSE = 8,
  MPSCAP_VERIFICATION = 9,
  MPSCAP_INTERNAL = 10
} mpscap_status;

typedef enum mpscap_model_kind {
  MPSCAP_MODEL_AKLT = 0,
  MPSCAP_MODEL_MG = 1,
  MPSCAP_MODEL_CUSTOM = 2
} mpscap_model_kind;

typedef struct mpscap_model mpscap_model;
typedef struct mpscap_distribution mpscap_distribution;
typedef struct mpscap_spectrum mpscap_spectrum;
typedef struct mpscap_table mpscap_table;
typedef struct mpscap_channel mpscap_channel;
typedef struct mpscap_density mpscap_density;
typedef struct mpscap_text mpscap_text;

MPSCAP_API const char* mpscap_version(void);
MPSCAP_API const char* mpscap_last_error(void);
MPSCAP_API const char* mpscap_status_name(mpscap_status status);
MPSCAP_API double mpscap_aklt_ground_theta(void);

/* Owned text buffers returned by the writers. */
MPSCAP_API const char* mpscap_text_data(const mpscap_text* text);
MPSCAP_API size_t mpscap_text_size(const mpscap_text* text);
MPSCAP_API void mpscap_text_free(mpscap_text* text);

/* ---- models ---- */
MPSCAP_API mpscap_status mpscap_model_aklt(double theta, mpscap_model** out);
MPSCAP_API mpscap_status mpscap_model_mg(double g, mpscap_model** out);
MPSCAP_API mpscap_status mpscap_model_from_json(const char* json, mpscap_model** out);
MPSCAP_API mpscap_status mpscap_model_load(const char* path, mpscap_model** out);
MPSCAP_API void mpscap_model_free(mpscap_model* model);

MPSCAP_API mpscap_model_kind mpscap_model_get_kind(const mpscap_model* model);
MPSCAP_API const char* mpscap_model_label(const mpscap_model* model);
/* Returns 1 and writes the value when the model carries the named parameter. */
MPSCAP_API int mpscap_model_param(const mpscap_model* model, const char* name, double* value);
MPSCAP_API int mpscap_model_local_dim(const mpscap_model* model);
MPSCAP_API int mpscap_model_bond_dim(const mpscap_model* model);

typedef struct mpscap_residuals {
  double completeness;
  double invariance;
  double hermiticity;
  double trace;
  double positivity;
  int passed;
} mpscap_residuals;

MPSCAP_API mpscap_status mpscap_model_validate(const mpscap_model* model, mpscap_residuals* out);

/* symbols are 1-based, length n. */
MPSCAP_API mpscap_status mpscap_string_probability(const mpscap_model* model, const int* symbols, size_t n,
                                                   double* out);

/* ---- diagonal distribution ---- */
MPSCAP_API mpscap_status mpscap_enumerate(const mpscap_model* model, int n, double prune_tol, int workers,
                                          mpscap_distribution** out);
MPSCAP_API mpscap_status mpscap_enumerate_exhaustive(const mpscap_model* model, int n,
                                                     mpscap_distribution** out);
MPSCAP_API void mpscap_distribution_free(mpscap_distribution* dist);
MPSCAP_API size_t mpscap_distribution_size(const mpscap_distribution* dist);
MPSCAP_API int mpscap_distribution_length(const mpscap_distribution* dist);
/* Copies up to `cap` symbols of item i into `symbols`; returns the string length. */
MPSCAP_API mpscap_status mpscap_distribution_item(const mpscap_distribution* dist, size_t i, int* symbols,
                                                  size_t cap, double* probability);
MPSCAP_API double mpscap_distribution_total(const mpscap_distribution* dist);
MPSCAP_API double mpscap_distribution_pruned_mass(const mpscap_distribution* dist);
MPSCAP_API double mpscap_distribution_entropy(const mpscap_distribution* dist);
MPSCAP_API mpscap_status mpscap_distribution_write_csv(const mpscap_distribution* dist, mpscap_text** out);
MPSCAP_API mpscap_status mpscap_distribution_write_json(const mpscap_distribution* dist, mpscap_text** out);
/* Max absolute difference between two distributions over the union of strings. */
MPSCAP_API mpscap_status mpscap_distribution_distance(const mpscap_distribution* a, const mpscap_distribution* b,
                                                      double* out);

typedef struct mpscap_entropy_row {
  int n;
  double entropy;
  double rate_avg;
  double rate_cond;
  double pruned_mass;
} mpscap_entropy_row;

/* Fills rows[0..n_max-1]. */
MPSCAP_API mpscap_status mpscap_entropy_trace(const mpscap_model* model, int n_max, double prune_tol, int workers,
                                              mpscap_entropy_row* rows);

/* ---- closed forms ---- */
MPSCAP_API double mpscap_h2(double theta);
MPSCAP_API mpscap_status mpscap_aklt_capacity(double theta, double* out);
MPSCAP_API mpscap_status mpscap_mg_capacity(double g, double* out);
/* Returns MPSCAP_DOMAIN when the model has no closed form. */
MPSCAP_API mpscap_status mpscap_closed_form_capacity(const mpscap_model* model, double* out);

MPSCAP_API mpscap_status mpscap_spectrum_aklt(int n, double theta, mpscap_spectrum** out);
MPSCAP_API mpscap_status mpscap_spectrum_mg(int n, double g, mpscap_spectrum** out);
MPSCAP_API mpscap_status mpscap_spectrum_closed_form(const mpscap_model* model, int n, mpscap_spectrum** out);
MPSCAP_API mpscap_status mpscap_spectrum_enumerated(const mpscap_distribution* dist, double group_tol,
                                                    mpscap_spectrum** out);
MPSCAP_API void mpscap_spectrum_free(mpscap_spectrum* spectrum);
MPSCAP_API size_t mpscap_spectrum_size(const mpscap_spectrum* spectrum);
MPSCAP_API mpscap_status mpscap_spectrum_entry(const mpscap_spectrum* spectrum, size_t i, const char** family,
                                               double* value, uint64_t* multiplicity);
MPSCAP_API uint64_t mpscap_spectrum_total_multiplicity(const mpscap_spectrum* spectrum);
MPSCAP_API double mpscap_spectrum_total_mass(const mpscap_spectrum* spectrum);
/* Element-wise distance of the expanded multisets after dropping values <= floor;
 * +inf when the counts differ. */
MPSCAP_API double mpscap_spectrum_distance(const mpscap_spectrum* a, const mpscap_spectrum* b, double floor);
MPSCAP_API mpscap_status mpscap_spectrum_write_csv(const mpscap_spectrum* spectrum, const char* source, int header,
                                                   mpscap_text** out);
MPSCAP_API mpscap_status mpscap_spectrum_write_json(const mpscap_spectrum* spectrum, mpscap_text** out);

/* Multiplicity tables of the MG product classes. */
MPSCAP_API mpscap_status mpscap_table_closed_form(int n, mpscap_table** out);
MPSCAP_API mpscap_status mpscap_table_reference_initial(mpscap_table** out);
/* Classifies the 2^n products at n in [4, 24]; `unclassified` may be NULL. */
MPSCAP_API mpscap_status mpscap_table_classified(int n, mpscap_table** out, uint64_t* unclassified);
/* Iterates from `initial` up to n_max and returns the final table. */
MPSCAP_API mpscap_status mpscap_table_recurrence(const mpscap_table* initial, int n_max, mpscap_table** out);
MPSCAP_API void mpscap_table_free(mpscap_table* table);
MPSCAP_API int mpscap_table_n(const mpscap_table* table);
MPSCAP_API uint64_t mpscap_table_total(const mpscap_table* table);
MPSCAP_API uint64_t mpscap_table_zero_count(const mpscap_table* table);
MPSCAP_API size_t mpscap_table_size(const mpscap_table* table);
MPSCAP_API mpscap_status mpscap_table_entry(const mpscap_table* table, size_t i, const char** family, int* index,
                                            uint64_t* count);
MPSCAP_API int mpscap_table_equal(const mpscap_table* a, const mpscap_table* b);
/* Newline-separated description of the entries that differ; empty when equal. */
MPSCAP_API mpscap_status mpscap_table_differences(const mpscap_table* a, const mpscap_table* b, mpscap_text** out);
MPSCAP_API mpscap_status mpscap_table_write_csv(const mpscap_table* table, int header, mpscap_text** out);

/* ---- channels ---- */
typedef struct mpscap_capacity_estimate {
  int n;
  int local_dim;
  double entropy;
  double estimate_avg;
  double estimate_cond;
  int has_closed_form;
  double closed_form;
  int channel_checked;
  size_t kraus_count;
  double tp_residual;
  double output_entropy;
  double complementary_entropy;
  double channel_estimate;
  double path_gap;
} mpscap_capacity_estimate;

MPSCAP_API mpscap_status mpscap_capacity_estimate_run(const mpscap_model* model, int n, double prune_tol,
                                                      int channel_check_max_n, int workers,
                                                      mpscap_capacity_estimate* out);

MPSCAP_API mpscap_status mpscap_channel_dephasing(const mpscap_distribution* env, mpscap_channel** out);
MPSCAP_API void mpscap_channel_free(mpscap_channel* channel);
MPSCAP_API size_t mpscap_channel_dim(const mpscap_channel* channel);
MPSCAP_API size_t mpscap_channel_kraus_count(const mpscap_channel* channel);
MPSCAP_API double mpscap_channel_tp_residual(const mpscap_channel* channel);
MPSCAP_API mpscap_status mpscap_channel_apply(const mpscap_channel* channel, const mpscap_density* in,
                                              mpscap_density** out);
MPSCAP_API mpscap_status mpscap_channel_complementary(const mpscap_channel* channel, const mpscap_density* in,
                                                      mpscap_density** out);
/* Output of the controlled-phase dilation for n sites on input sigma. */
MPSCAP_API mpscap_status mpscap_stinespring_output(const mpscap_model* model, int n, const mpscap_density* sigma,
                                                   mpscap_density** out);

MPSCAP_API mpscap_status mpscap_density_maximally_mixed(size_t dim, mpscap_density** out);
/* psi holds 2*dim doubles as interleaved (re, im) pairs; normalised internally. */
MPSCAP_API mpscap_status mpscap_density_pure(const double* psi, size_t dim, mpscap_density** out);
MPSCAP_API mpscap_status mpscap_density_from_json(const char* json, mpscap_density** out);
MPSCAP_API mpscap_status mpscap_density_to_json(const mpscap_density* rho, mpscap_text** out);
MPSCAP_API void mpscap_density_free(mpscap_density* rho);
MPSCAP_API size_t mpscap_density_dim(const mpscap_density* rho);
MPSCAP_API mpscap_status mpscap_density_entry(const mpscap_density* rho, size_t r, size_t c, double* re, double* im);
MPSCAP_API double mpscap_density_entropy(const mpscap_density* rho);
MPSCAP_API double mpscap_density_max_abs_diff(const mpscap_density* a, const mpscap_density* b);

/* ---- verification ---- */
typedef struct mpscap_verify_options {
  int aklt;
  int mg;
  const mpscap_model* custom; /* may be NULL */
  int n_max;
  double prune_tol;
  int workers;
} mpscap_verify_options;

MPSCAP_API void mpscap_verify_options_init(mpscap_verify_options* opts);

typedef void (*mpscap_check_callback)(const char* module, const char* name, int passed, const char* detail,
                                      void* user);

/* Returns MPSCAP_OK when every check passes and MPSCAP_VERIFICATION otherwise. */
MPSCAP_API mpscap_status mpscap_verify(const mpscap_verify_options* opts, mpscap_check_callback cb, void* user,
                                       size_t* checks_run, size_t* checks_failed);

#ifdef __cplusplus
}
#endif

#endif
