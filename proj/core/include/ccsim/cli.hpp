#pragma once

#include <string>
#include <vector>

#include "ccsim/config.hpp"

namespace ccsim {

/// One row of the `verify` invariant table.
struct CheckRow {
    std::string name;
    double value = 0.0;
    std::string requirement;
    bool pass = false;
};

/// Runs the full invariant suite on the configured parameters.
std::vector<CheckRow> verify_all(const RunConfig& cfg);

/// Runs one subcommand (steady | eigen | transient | limit | sweep | verify),
/// writes artifacts plus a `manifest` into cfg.out_dir, and prints a summary.
/// Exit status: 0 success, 1 usage/config error, 2 solver failure,
/// 3 verification failure.
int dispatch(const std::string& subcommand, const RunConfig& cfg);

} // namespace ccsim
