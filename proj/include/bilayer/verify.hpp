#pragma once

#include "bilayer/config.hpp"

#include <string>
#include <vector>

namespace bilayer {

struct VerifyRecord {
    std::string name;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Runs the full oracle suite: Poisson residuals and manufactured solutions,
/// Lemma A.1/A.2 agreement, order-0 profile ODEs, pressure closed form vs the
/// general solver, order-0/order-1 boundary certifications with term-group
/// isolations (the J1 bracket variants are reported side by side), the
/// exhaustive commutator check, and dispersion spot values.
std::vector<VerifyRecord> run_verify_suite(const VerifyConfig& vc, ModelParams base);

bool all_pass(const std::vector<VerifyRecord>& records);

void write_verify_report(const std::string& path,
                         const std::vector<VerifyRecord>& records);

}  // namespace bilayer
