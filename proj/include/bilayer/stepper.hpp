#pragma once

#include "bilayer/diagnostics.hpp"
#include "bilayer/model.hpp"

namespace bilayer {

enum class Termination { horizon_reached, collision, energy_blowup, nan };

const char* to_string(Termination t);

struct RunConfig {
    ModelParams params;
    SpectralField u0{1};
    SpectralField v0{1};
    double dt = 1e-3;
    double t_end = 1.0;
    int output_every = 10;
    ForcingMode forcing = ForcingMode::simplified;
    ForcingOptions forcing_options;
    bool project_zero_mean = false;
    double collision_threshold = 0.0;
    double energy_blowup_threshold = 1e6;

    void validate() const;  // throws config_error
};

struct Trajectory {
    std::vector<DiagnosticsRecord> records;  // strictly increasing times
    SimState final_state{SpectralField(1), SpectralField(1), 0.0};
    Termination termination = Termination::horizon_reached;
    double termination_time = 0.0;
};

/// Minimum over the physical grid of the layer thickness 1 + eps (U - V).
double min_thickness(const SimState& state, const ModelParams& p);

/// One integrating-factor (Lawson) RK4 step of size dt. The stiff linear block
/// is applied exactly per mode in the diagonal variables W+- = U +- V; the four
/// RK4 stages evaluate rhs_order_eps. Reproduces e^{lambda t} decay exactly
/// when the explicit part vanishes.
SimState step(const SimState& state, double dt, const ForcingCache& cache,
              const ModelParams& p);

/// Advances from t = 0 to t_end, recording diagnostics every output_every steps
/// and terminating early on collision, energy blow-up, or NaN. The final state
/// is always recorded.
Trajectory run(const RunConfig& config);

}  // namespace bilayer
