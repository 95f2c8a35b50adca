#pragma once

#include <string>

namespace bilayer {

/// Runs a simulation and writes series.csv, snapshot_final.json and
/// fields_final.csv into the configured output directory.
/// Exit codes: 0 horizon reached, 1 config error, 2 collision,
/// 3 energy blow-up, 4 NaN.
int cmd_run(const std::string& config_path);

/// Runs the oracle suite and writes verify_report.json.
/// Exit codes: 0 all checks pass, 1 config error, 5 any check failed
/// (the report is still written).
int cmd_verify(const std::string& config_path);

/// Writes dispersion.csv with rows k, lambda_plus, lambda_minus.
int cmd_dispersion(const std::string& config_path, int kmax);

}  // namespace bilayer
