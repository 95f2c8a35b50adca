#include "bilayer/commands.hpp"

#include "bilayer/config.hpp"
#include "bilayer/io.hpp"
#include "bilayer/verify.hpp"

#include <filesystem>
#include <iostream>

namespace bilayer {

namespace {

namespace fs = std::filesystem;

fs::path prepare_output_dir(const OutputConfig& out) {
    fs::path dir(out.directory);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw config_error("output: cannot create directory '" + out.directory + "'");
    return dir;
}

}  // namespace

int cmd_run(const std::string& config_path) {
    FullConfig cfg;
    try {
        cfg = load_config(config_path);
        cfg.run.validate();
    } catch (const config_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }

    Trajectory traj = run(cfg.run);

    fs::path dir = prepare_output_dir(cfg.output);
    write_series_csv((dir / "series.csv").string(), traj);
    write_snapshot_json((dir / "snapshot_final.json").string(), traj.final_state,
                        traj.termination);
    if (traj.termination != Termination::nan)
        write_fields_csv((dir / "fields_final.csv").string(), traj.final_state,
                         cfg.run.params);

    std::cout << "run: " << to_string(traj.termination) << " at t = "
              << format_g17(traj.termination_time) << "\n";
    switch (traj.termination) {
        case Termination::horizon_reached: return 0;
        case Termination::collision: return 2;
        case Termination::energy_blowup: return 3;
        case Termination::nan: return 4;
    }
    return 0;
}

int cmd_verify(const std::string& config_path) {
    FullConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const config_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }

    std::vector<VerifyRecord> records = run_verify_suite(cfg.verify, cfg.run.params);
    fs::path dir = prepare_output_dir(cfg.output);
    write_verify_report((dir / "verify_report.json").string(), records);

    for (const VerifyRecord& r : records) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name
                  << "  deviation=" << format_g17(r.max_deviation)
                  << "  tolerance=" << format_g17(r.tolerance) << "\n";
    }
    return all_pass(records) ? 0 : 5;
}

int cmd_dispersion(const std::string& config_path, int kmax) {
    FullConfig cfg;
    try {
        cfg = load_config(config_path);
        if (kmax < 0) throw config_error("dispersion: kmax must be >= 0");
    } catch (const config_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    fs::path dir = prepare_output_dir(cfg.output);
    write_dispersion_csv((dir / "dispersion.csv").string(),
                         dispersion_table(cfg.run.params, kmax));
    return 0;
}

}  // namespace bilayer
