#pragma once

#include <iosfwd>

#include "plot.hpp"
#include "run_config.hpp"

namespace mpscap_cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitConfigError = 2;

// Executes one command. Artifacts go to config.output (or `out` when unset);
// diagnostics go to `err`. Returns the process exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace mpscap_cli
