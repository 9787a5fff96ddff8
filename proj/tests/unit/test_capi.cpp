#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "mpscap/mpscap.h"

TEST_CASE("version and status names") {
  CHECK(std::string(mpscap_version()) == "0.1.0");
  CHECK(std::string(mpscap_status_name(MPSCAP_DOMAIN)) == "domain error");
}

TEST_CASE("model lifecycle and errors") {
  mpscap_model* m = nullptr;
  REQUIRE(mpscap_model_aklt(mpscap_aklt_ground_theta(), &m) == MPSCAP_OK);
  CHECK(mpscap_model_local_dim(m) == 3);
  CHECK(mpscap_model_bond_dim(m) == 2);
  CHECK(mpscap_model_get_kind(m) == MPSCAP_MODEL_AKLT);
  double theta = 0.0;
  CHECK(mpscap_model_param(m, "theta", &theta) == 1);
  CHECK(theta == mpscap_aklt_ground_theta());
  CHECK(mpscap_model_param(m, "g", nullptr) == 0);

  mpscap_residuals r{};
  REQUIRE(mpscap_model_validate(m, &r) == MPSCAP_OK);
  CHECK(r.passed == 1);
  CHECK(r.completeness < 1e-12);

  const int s[] = {1, 1};
  double p = 0.0;
  REQUIRE(mpscap_string_probability(m, s, 2, &p) == MPSCAP_OK);
  CHECK(p == doctest::Approx(1.0 / 9.0));
  const int bad[] = {5};
  CHECK(mpscap_string_probability(m, bad, 1, &p) == MPSCAP_DOMAIN);
  CHECK(std::strlen(mpscap_last_error()) > 0);
  mpscap_model_free(m);

  mpscap_model* g = nullptr;
  CHECK(mpscap_model_mg(1.2, &g) == MPSCAP_DOMAIN);
  CHECK(g == nullptr);
  CHECK(mpscap_model_mg(0.5, nullptr) == MPSCAP_INVALID_ARGUMENT);
  CHECK(mpscap_model_from_json("{oops", &g) == MPSCAP_PARSE);
  CHECK(mpscap_model_load("/nonexistent/model.json", &g) == MPSCAP_IO);
  mpscap_model_free(nullptr);
}

TEST_CASE("distribution, spectrum and capacity through the C API") {
  mpscap_model* m = nullptr;
  REQUIRE(mpscap_model_mg(0.5, &m) == MPSCAP_OK);

  mpscap_distribution* d = nullptr;
  REQUIRE(mpscap_enumerate(m, 2, 1e-14, 1, &d) == MPSCAP_OK);
  CHECK(mpscap_distribution_size(d) == 4);
  CHECK(mpscap_distribution_length(d) == 2);
  int sym[2];
  double prob = 0.0;
  REQUIRE(mpscap_distribution_item(d, 1, sym, 2, &prob) == MPSCAP_OK);
  CHECK(sym[0] == 1);
  CHECK(sym[1] == 2);
  CHECK(prob == doctest::Approx(0.375));
  CHECK(mpscap_distribution_item(d, 1, sym, 1, &prob) == MPSCAP_INVALID_ARGUMENT);
  CHECK(mpscap_distribution_item(d, 9, nullptr, 0, &prob) == MPSCAP_INVALID_ARGUMENT);
  CHECK(mpscap_distribution_entropy(d) == doctest::Approx(1.8112781244591327));

  mpscap_text* csv = nullptr;
  REQUIRE(mpscap_distribution_write_csv(d, &csv) == MPSCAP_OK);
  CHECK(std::string(mpscap_text_data(csv)).rfind("string,probability\n", 0) == 0);
  mpscap_text_free(csv);

  mpscap_spectrum* closed = nullptr;
  mpscap_spectrum* enumerated = nullptr;
  REQUIRE(mpscap_spectrum_mg(2, 0.5, &closed) == MPSCAP_OK);
  REQUIRE(mpscap_spectrum_enumerated(d, 1e-9, &enumerated) == MPSCAP_OK);
  CHECK(mpscap_spectrum_distance(closed, enumerated, 1e-14) < 1e-12);
  CHECK(mpscap_spectrum_total_multiplicity(closed) == 4);
  const char* family = nullptr;
  double value = 0.0;
  uint64_t mult = 0;
  REQUIRE(mpscap_spectrum_entry(closed, 0, &family, &value, &mult) == MPSCAP_OK);
  CHECK(family != nullptr);
  mpscap_spectrum_free(closed);
  mpscap_spectrum_free(enumerated);
  CHECK(mpscap_spectrum_mg(1, 0.5, &closed) == MPSCAP_DOMAIN);

  double cap = 0.0;
  REQUIRE(mpscap_closed_form_capacity(m, &cap) == MPSCAP_OK);
  CHECK(std::abs(cap - 0.5) < 1e-12);

  std::vector<mpscap_entropy_row> rows(6);
  REQUIRE(mpscap_entropy_trace(m, 6, 1e-14, 1, rows.data()) == MPSCAP_OK);
  CHECK(rows[1].n == 2);
  CHECK(rows[1].entropy == doctest::Approx(1.8112781244591327));

  mpscap_capacity_estimate e{};
  REQUIRE(mpscap_capacity_estimate_run(m, 3, 1e-14, 4, 1, &e) == MPSCAP_OK);
  CHECK(e.channel_checked == 1);
  CHECK(e.path_gap < 1e-9);
  CHECK(e.has_closed_form == 1);

  mpscap_channel* ch = nullptr;
  REQUIRE(mpscap_channel_dephasing(d, &ch) == MPSCAP_OK);
  CHECK(mpscap_channel_dim(ch) == 4);
  CHECK(mpscap_channel_tp_residual(ch) < 1e-10);
  mpscap_density* mixed = nullptr;
  mpscap_density* comp = nullptr;
  REQUIRE(mpscap_density_maximally_mixed(4, &mixed) == MPSCAP_OK);
  REQUIRE(mpscap_channel_complementary(ch, mixed, &comp) == MPSCAP_OK);
  CHECK(mpscap_density_entropy(comp) == doctest::Approx(mpscap_distribution_entropy(d)).epsilon(1e-12));

  mpscap_text* js = nullptr;
  REQUIRE(mpscap_density_to_json(comp, &js) == MPSCAP_OK);
  mpscap_density* back = nullptr;
  REQUIRE(mpscap_density_from_json(mpscap_text_data(js), &back) == MPSCAP_OK);
  CHECK(mpscap_density_max_abs_diff(back, comp) == 0.0);
  mpscap_text_free(js);

  mpscap_density* wrong = nullptr;
  REQUIRE(mpscap_density_maximally_mixed(3, &wrong) == MPSCAP_OK);
  mpscap_density* out = nullptr;
  CHECK(mpscap_channel_apply(ch, wrong, &out) == MPSCAP_STRUCTURE);

  for (auto* p : {mixed, comp, back, wrong}) mpscap_density_free(p);
  mpscap_channel_free(ch);
  mpscap_distribution_free(d);
  mpscap_model_free(m);
}

TEST_CASE("multiplicity tables through the C API") {
  mpscap_table* reference = nullptr;
  mpscap_table* classified = nullptr;
  REQUIRE(mpscap_table_reference_initial(&reference) == MPSCAP_OK);
  uint64_t unclassified = 99;
  REQUIRE(mpscap_table_classified(4, &classified, &unclassified) == MPSCAP_OK);
  CHECK(unclassified == 0);
  CHECK(mpscap_table_total(reference) == 15);
  CHECK(mpscap_table_total(classified) == 16);
  CHECK(mpscap_table_equal(reference, classified) == 0);

  mpscap_text* diff = nullptr;
  REQUIRE(mpscap_table_differences(reference, classified, &diff) == MPSCAP_OK);
  CHECK(std::string(mpscap_text_data(diff)).find("e_4(1)") != std::string::npos);
  mpscap_text_free(diff);

  mpscap_table* t20 = nullptr;
  mpscap_table* cf20 = nullptr;
  REQUIRE(mpscap_table_recurrence(classified, 20, &t20) == MPSCAP_OK);
  REQUIRE(mpscap_table_closed_form(20, &cf20) == MPSCAP_OK);
  CHECK(mpscap_table_n(t20) == 20);
  CHECK(mpscap_table_equal(t20, cf20) == 1);
  CHECK(mpscap_table_zero_count(cf20) == (1u << 20) - 2048 - 1024 + 2);
  for (auto* t : {reference, classified, t20, cf20}) mpscap_table_free(t);
}

namespace {
void count_checks(const char*, const char*, int passed, const char*, void* user) {
  auto* counts = static_cast<int*>(user);
  ++counts[passed ? 0 : 1];
}
}  // namespace

TEST_CASE("verify through the C API") {
  mpscap_verify_options o;
  mpscap_verify_options_init(&o);
  o.aklt = 0;
  o.n_max = 6;
  int counts[2] = {0, 0};
  size_t run = 0, failed = 0;
  CHECK(mpscap_verify(&o, count_checks, counts, &run, &failed) == MPSCAP_OK);
  CHECK(failed == 0);
  CHECK(static_cast<size_t>(counts[0]) == run);
  o.n_max = 1;
  CHECK(mpscap_verify(&o, nullptr, nullptr, nullptr, nullptr) == MPSCAP_DOMAIN);
}
