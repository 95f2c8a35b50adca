#pragma once

#include "bilayer/stepper.hpp"

#include <optional>
#include <string>

namespace bilayer {

struct OutputConfig {
    std::string directory = "out";
};

struct VerifyConfig {
    int trunc = 32;   ///< truncation for the oracle suite, clamped to <= 32
    int panels = 16;  ///< quadrature panels (129-point x2 resolution equivalent)
    int strip_p = 129;
    std::optional<double> tolerance_override;
};

struct FullConfig {
    RunConfig run;
    OutputConfig output;
    VerifyConfig verify;
};

/// Parses a JSON config (// comments allowed). Unknown keys are rejected;
/// missing keys fall back to defaults with a notice on stderr.
/// Throws config_error with a located message on any problem.
FullConfig load_config(const std::string& path);

/// Example config with explanatory comments, for --seed-preset.
std::string seed_preset_text();

}  // namespace bilayer
