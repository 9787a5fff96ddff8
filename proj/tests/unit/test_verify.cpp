#include "doctest.h"
#include "mpscap/verify.hpp"

using namespace mpscap;

TEST_CASE("verification suite passes on the built-in models") {
  VerifyOptions o;
  o.n_max = 8;
  std::size_t streamed = 0;
  const auto rep = run_verification(o, [&](const CheckResult&) { ++streamed; });
  CHECK(streamed == rep.checks.size());
  for (const auto& c : rep.checks) {
    INFO(c.module << ": " << c.name << " | " << c.detail);
    CHECK(c.passed);
  }
  CHECK(rep.passed());
  CHECK(rep.first_failure() == nullptr);
}

TEST_CASE("verification reports the reference n = 4 discrepancy") {
  VerifyOptions o;
  o.aklt = false;
  o.n_max = 6;
  const auto rep = run_verification(o);
  bool reported = false;
  for (const auto& c : rep.checks)
    if (c.detail.find("e_4(1): 1 vs 2") != std::string::npos) reported = true;
  CHECK(reported);
}

TEST_CASE("custom models go through the generic checks") {
  VerifyOptions o;
  o.aklt = o.mg = false;
  o.custom = mg_model(0.25);
  o.n_max = 6;
  const auto rep = run_verification(o);
  CHECK(rep.passed());
  CHECK(rep.checks.size() >= 5);
}

TEST_CASE("n_max below 2 is rejected") {
  VerifyOptions o;
  o.n_max = 1;
  CHECK_THROWS(run_verification(o));
}
