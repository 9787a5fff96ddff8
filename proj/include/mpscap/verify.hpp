#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mpscap/diag_process.hpp"
#include "mpscap/mps_model.hpp"

namespace mpscap {

struct CheckResult {
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  bool aklt = true;
  bool mg = true;
  /// Model-independent checks (normalisation, stationarity, channel) are
  /// also run on this model when set.
  std::optional<MpsModel> custom;
  int n_max = 10;
  double prune_tol = kDefaultPruneTol;
  int workers = 1;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* first_failure() const;
};

/// Runs the invariant suites of every module at desk-scale parameters.
/// `on_check` sees each result as soon as it is known.
VerificationReport run_verification(const VerifyOptions& options,
                                    const std::function<void(const CheckResult&)>& on_check = {});

/// Parameter grids used by the verification suite.
std::vector<double> verify_theta_grid();
std::vector<double> verify_g_grid();

}  // namespace mpscap
