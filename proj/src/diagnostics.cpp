#include "bilayer/diagnostics.hpp"

#include "bilayer/stepper.hpp"

#include <algorithm>
#include <cmath>

namespace bilayer {

DiagnosticsRecord energies(const SimState& state, const ModelParams& p) {
    DiagnosticsRecord rec;
    rec.t = state.t;
    rec.e0 = wiener_norm(state.u, 0) + wiener_norm(state.v, 0);
    rec.e1 = wiener_norm(state.u, 1) + wiener_norm(state.v, 1);
    rec.min_thickness = min_thickness(state, p);
    auto us = synthesize(state.u, p.grid);
    auto vs = synthesize(state.v, p.grid);
    for (double x : us) rec.max_abs_u = std::max(rec.max_abs_u, std::abs(x));
    for (double x : vs) rec.max_abs_v = std::max(rec.max_abs_v, std::abs(x));
    rec.mean_u = state.u.coeff(0).real();
    rec.mean_v = state.v.coeff(0).real();
    return rec;
}

std::vector<DispersionRow> dispersion_table(const ModelParams& p, int kmax) {
    if (kmax < 0) throw config_error("dispersion_table: kmax must be >= 0");
    std::vector<DispersionRow> rows;
    rows.reserve(static_cast<size_t>(kmax) + 1);
    for (int k = 0; k <= kmax; ++k) {
        LinearBlock blk = linear_block(k, p);
        rows.push_back({k, blk.lambda_plus, blk.lambda_minus});
    }
    return rows;
}

double commutator_multiplier(int k, int m) {
    double km = static_cast<double>(k - m);
    double cube = km * km * km;
    return std::abs(static_cast<double>(k)) * std::abs(cube) - k * cube;
}

}  // namespace bilayer
