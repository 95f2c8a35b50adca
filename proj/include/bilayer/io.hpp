#pragma once

#include "bilayer/stepper.hpp"

#include <string>

namespace bilayer {

/// %.17g formatting used for every number in the output artifacts.
std::string format_g17(double v);

void write_series_csv(const std::string& path, const Trajectory& traj);
void write_fields_csv(const std::string& path, const SimState& state,
                      const ModelParams& p);
void write_snapshot_json(const std::string& path, const SimState& state,
                         Termination term);
/// Reads U, V spectra (and time) back from a snapshot written above.
struct Snapshot {
    SpectralField u{1};
    SpectralField v{1};
    double t = 0.0;
    std::string termination;
};
Snapshot load_snapshot(const std::string& path);

void write_dispersion_csv(const std::string& path,
                          const std::vector<DispersionRow>& rows);

}  // namespace bilayer
