#pragma once

#include "bilayer/model.hpp"

#include <vector>

namespace bilayer {

/// One output row of a trajectory.
struct DiagnosticsRecord {
    double t = 0.0;
    double e0 = 0.0;  ///< ||U||_{A0} + ||V||_{A0}
    double e1 = 0.0;  ///< ||U||_{A1} + ||V||_{A1}
    double min_thickness = 1.0;
    double max_abs_u = 0.0;
    double max_abs_v = 0.0;
    double mean_u = 0.0;
    double mean_v = 0.0;
};

/// Wiener energies, thickness and physical-space extrema of a state.
DiagnosticsRecord energies(const SimState& state, const ModelParams& p);

struct DispersionRow {
    int k = 0;
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
};

/// lambda_+-(k) = -eta|k|^3 (coth|k| +- csch|k|) for k = 0..kmax.
std::vector<DispersionRow> dispersion_table(const ModelParams& p, int kmax);

/// |k||k-m|^3 - k(k-m)^3; vanishes unless sgn(k) != sgn(k-m), and then |k| <= |m|.
double commutator_multiplier(int k, int m);

}  // namespace bilayer
