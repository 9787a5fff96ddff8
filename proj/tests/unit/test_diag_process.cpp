#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "mpscap/closed_form.hpp"
#include "mpscap/diag_process.hpp"
#include "mpscap/errors.hpp"
#include "oracle.hpp"

using namespace mpscap;

namespace {

double prob(const MpsModel& m, std::initializer_list<int> s) {
  return string_probability(m, std::vector<int>(s));
}

}  // namespace

TEST_CASE("single-string probabilities") {
  const auto mg = mg_model(0.5);
  CHECK(prob(mg, {1, 2}) == doctest::Approx(3.0 / 8.0).epsilon(1e-14));
  CHECK(prob(mg, {2, 1}) == doctest::Approx(3.0 / 8.0).epsilon(1e-14));
  CHECK(prob(mg, {1, 1}) == doctest::Approx(1.0 / 8.0).epsilon(1e-14));
  CHECK(prob(mg, {1, 1, 1}) == 0.0);

  const auto aklt = aklt_model(aklt_ground_theta());
  CHECK(prob(aklt, {1, 1}) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK(prob(aklt, {2, 2}) == 0.0);
  CHECK(prob(aklt, {2, 1, 3}) > 0.0);
  CHECK_THROWS_AS(prob(aklt, {0}), DomainError);
  CHECK_THROWS_AS(prob(aklt, {4}), DomainError);
}

TEST_CASE("AKLT n = 2 support") {
  const auto dist = enumerate_distribution(aklt_model(aklt_ground_theta()), 2);
  CHECK(dist.items.size() == 7);
  auto p = dist.probabilities();
  std::sort(p.begin(), p.end());
  for (std::size_t i = 0; i < 5; ++i) CHECK(p[i] == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK(p[5] == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
  CHECK(p[6] == doctest::Approx(2.0 / 9.0).epsilon(1e-14));

  const auto spec = spectrum_of(dist);
  REQUIRE(spec.entries.size() == 2);
  CHECK(spec.entries[0].multiplicity == 2);
  CHECK(spec.entries[1].multiplicity == 5);
}

TEST_CASE("enumeration agrees with the Eigen brute force") {
  for (const auto& m : {aklt_model(0.4), aklt_model(aklt_ground_theta()), mg_model(0.3), mg_model(0.5)}) {
    for (int n = 1; n <= 6; ++n) {
      const auto full = enumerate_exhaustive(m, n);
      const auto ref = oracle::brute_force(m, n);
      REQUIRE(full.items.size() == ref.size());
      double worst = 0.0;
      for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(full.items[i].probability - ref[i]));
      CHECK(worst < 1e-14);
      const auto pruned = enumerate_distribution(m, n);
      CHECK(max_abs_difference(as_map(pruned), as_map(full)) < 1e-14);
      CHECK(shannon_entropy(pruned) == doctest::Approx(oracle::shannon(ref)).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero tolerance keeps every positive string") {
  for (const auto& m : {aklt_model(0.7), mg_model(0.45)}) {
    for (int n = 1; n <= 8; ++n) {
      const auto all = enumerate_distribution(m, n, 0.0);
      CHECK(max_abs_difference(as_map(all), as_map(enumerate_distribution(m, n))) <= 1e-12);
      CHECK(max_abs_difference(as_map(all), as_map(enumerate_exhaustive(m, n))) <= 1e-12);
    }
  }
}

TEST_CASE("normalisation and pruning bookkeeping") {
  const auto m = mg_model(0.2);
  for (int n = 1; n <= 12; ++n) {
    const auto d = enumerate_distribution(m, n);
    CHECK(std::abs(d.total_probability() - 1.0) < 1e-10);
    CHECK(d.pruned_mass >= 0.0);
  }
  const auto fine = enumerate_distribution(mg_model(0.1), 10);
  const auto coarse = enumerate_distribution(mg_model(0.1), 10, 1e-4);
  CHECK(coarse.items.size() < fine.items.size());
  CHECK(coarse.pruned_mass > 0.0);
  CHECK(coarse.total_probability() + coarse.pruned_mass == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("stationarity of marginals") {
  for (const auto& m : {aklt_model(0.9), mg_model(0.35)}) {
    for (int n = 1; n <= 7; ++n) {
      const auto base = as_map(enumerate_distribution(m, n));
      const auto next = enumerate_distribution(m, n + 1);
      CHECK(max_abs_difference(marginal_drop_first(next), base) < 1e-10);
      CHECK(max_abs_difference(marginal_drop_last(next), base) < 1e-10);
    }
  }
}

TEST_CASE("output is independent of the worker count") {
  const auto m = aklt_model(0.8);
  const auto one = enumerate_distribution(m, 9, kDefaultPruneTol, 1);
  for (int w : {2, 3, 8}) {
    const auto many = enumerate_distribution(m, 9, kDefaultPruneTol, w);
    REQUIRE(many.items.size() == one.items.size());
    bool identical = true;
    for (std::size_t i = 0; i < one.items.size(); ++i)
      identical = identical && one.items[i].word == many.items[i].word &&
                  one.items[i].probability == many.items[i].probability;
    CHECK(identical);
    CHECK(many.pruned_mass == one.pruned_mass);
  }
  CHECK(std::is_sorted(one.items.begin(), one.items.end(),
                       [](const DiagItem& a, const DiagItem& b) { return a.word < b.word; }));
}

TEST_CASE("entropy trace") {
  const auto m = aklt_model(aklt_ground_theta());
  const auto trace = entropy_trace(m, 10);
  REQUIRE(trace.rows.size() == 10);
  for (const auto& r : trace.rows) {
    CHECK(r.entropy == doctest::Approx(shannon_entropy(enumerate_distribution(m, r.n))).epsilon(1e-12));
    CHECK(r.rate_avg == doctest::Approx(r.entropy / r.n).epsilon(1e-14));
  }
  // Conditional entropy decreases toward the rate.
  for (std::size_t i = 1; i < trace.rows.size(); ++i)
    CHECK(trace.rows[i].rate_cond <= trace.rows[i - 1].rate_cond + 1e-12);
  CHECK(trace.at(10).n == 10);
  CHECK_THROWS(trace.at(11));
  // AKLT: rate_cond(n) - h2 = p^(n-1) (1 - p) with p = sin^2.
  const double p = 1.0 / 3.0;
  CHECK(trace.at(8).rate_cond - h2(aklt_ground_theta()) == doctest::Approx(std::pow(p, 7) * (1 - p)).epsilon(1e-8));
}

TEST_CASE("multiset distance and grouping") {
  CHECK(multiset_distance({0.5, 0.25, 0.25}, {0.25, 0.5, 0.25}) == 0.0);
  CHECK(std::isinf(multiset_distance({0.5, 0.5}, {1.0})));
  CHECK(multiset_distance({0.5, 0.5, 1e-20}, {0.5, 0.5}, 1e-14) == 0.0);
  const auto s = group_values({0.1, 0.2, 0.1 + 1e-15, 0.2, 0.2});
  REQUIRE(s.entries.size() == 2);
  CHECK(s.entries[0].value == doctest::Approx(0.2));
  CHECK(s.entries[0].multiplicity == 3);
  CHECK(s.total_multiplicity() == 5);
}

TEST_CASE("writers") {
  const auto dist = enumerate_distribution(mg_model(0.5), 2);
  std::ostringstream csv;
  write_distribution_csv(csv, dist);
  CHECK(csv.str().rfind("string,probability\n", 0) == 0);
  const auto at = csv.str().find("\n12,");
  REQUIRE(at != std::string::npos);
  CHECK(std::stod(csv.str().substr(at + 4)) == doctest::Approx(0.375).epsilon(1e-14));

  std::ostringstream trace;
  write_entropy_trace_csv(trace, entropy_trace(mg_model(0.5), 3));
  CHECK(trace.str().rfind("n,H_n,rate_avg,rate_cond\n", 0) == 0);

  std::ostringstream spec;
  write_spectrum_csv(spec, spectrum_of(dist), "enumerated");
  CHECK(spec.str().rfind("family,value,multiplicity,source\n", 0) == 0);

  const auto j = distribution_to_json(dist);
  CHECK(j.dump().find("0.375") != std::string::npos);
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_word(make_word(std::vector<int>{1, 2, 3}), 3) == "123");
}

TEST_CASE("exhaustive scan refuses huge spaces") {
  CHECK_THROWS_AS(enumerate_exhaustive(aklt_model(0.3), 20), ResourceError);
}
