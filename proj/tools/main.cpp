#include "bilayer/commands.hpp"
#include "bilayer/config.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Pseudospectral simulator and verification harness for the coupled "
                 "two-interface thin-layer growth model"};
    app.require_subcommand(0, 1);

    std::string seed_path;
    auto* seed = app.add_flag("--seed-preset{-}", seed_path,
                              "write a commented example config (default: stdout)");
    seed->expected(0, 1);

    std::string run_config, verify_config, disp_config;
    int kmax = 10;

    CLI::App* run_cmd = app.add_subcommand("run", "integrate the system and write outputs");
    run_cmd->add_option("config", run_config, "JSON config file")->required();

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "run the oracle suite and write verify_report.json");
    verify_cmd->add_option("config", verify_config, "JSON config file")->required();

    CLI::App* disp_cmd = app.add_subcommand("dispersion", "write the dispersion table");
    disp_cmd->add_option("config", disp_config, "JSON config file")->required();
    disp_cmd->add_option("--kmax", kmax, "largest wavenumber (default 10)");

    CLI11_PARSE(app, argc, argv);

    if (seed->count() > 0) {
        if (seed_path.empty() || seed_path == "-") {
            std::cout << bilayer::seed_preset_text();
        } else {
            std::ofstream out(seed_path);
            if (!out) {
                std::cerr << "error: cannot write '" << seed_path << "'\n";
                return 1;
            }
            out << bilayer::seed_preset_text();
        }
        return 0;
    }

    if (run_cmd->parsed()) return bilayer::cmd_run(run_config);
    if (verify_cmd->parsed()) return bilayer::cmd_verify(verify_config);
    if (disp_cmd->parsed()) return bilayer::cmd_dispersion(disp_config, kmax);

    std::cout << app.help();
    return 0;
}
