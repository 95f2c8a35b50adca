#include "bilayer/config.hpp"

#include "bilayer/io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <set>

namespace bilayer {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& section,
                    const std::set<std::string>& known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.contains(it.key()))
            throw config_error("config: unknown key '" + section + it.key() + "'");
    }
}

template <typename T>
T get_or(const json& obj, const std::string& section, const std::string& key, T fallback,
         std::vector<std::string>& notices) {
    if (!obj.contains(key)) {
        notices.push_back("notice: '" + section + key + "' missing, using default");
        return fallback;
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& ex) {
        throw config_error("config: bad value for '" + section + key + "': " + ex.what());
    }
}

SpectralField parse_mode_list(const json& arr, int trunc, const std::string& where) {
    SpectralField f(trunc);
    for (const auto& entry : arr) {
        if (!entry.is_array() || entry.size() != 3)
            throw config_error("config: '" + where + "' entries must be [k, re, im]");
        int k = entry[0].get<int>();
        if (std::abs(k) > trunc)
            throw config_error("config: '" + where + "' mode " + std::to_string(k) +
                               " exceeds truncation K=" + std::to_string(trunc));
        f(k) = cdouble(entry[1].get<double>(), entry[2].get<double>());
    }
    // entries listed for one sign only get mirrored
    for (int k = 1; k <= trunc; ++k) {
        cdouble a = f.coeff(k), b = f.coeff(-k);
        if (a != cdouble{} && b == cdouble{}) {
            f(-k) = std::conj(a);
        } else if (b != cdouble{} && a == cdouble{}) {
            f(k) = std::conj(b);
        }
    }
    f.require_hermitian(1e-9);
    return f;
}

}  // namespace

FullConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& ex) {
        throw config_error("config: " + std::string(ex.what()));
    }
    if (!doc.is_object()) throw config_error("config: top level must be an object");

    std::vector<std::string> notices;
    reject_unknown(doc, "", {"params", "initial", "run", "output", "verify"});

    FullConfig cfg;
    ModelParams& p = cfg.run.params;

    json params = doc.value("params", json::object());
    reject_unknown(params, "params.",
                   {"epsilon", "eta", "theta", "rho", "tau", "N", "c_B", "c_S", "K", "M"});
    p.epsilon = get_or(params, "params.", "epsilon", p.epsilon, notices);
    p.eta = get_or(params, "params.", "eta", p.eta, notices);
    p.theta = get_or(params, "params.", "theta", p.theta, notices);
    p.rho = get_or(params, "params.", "rho", p.rho, notices);
    p.tau = get_or(params, "params.", "tau", p.tau, notices);
    p.big_n = get_or(params, "params.", "N", p.big_n, notices);
    p.c_b = get_or(params, "params.", "c_B", p.c_b, notices);
    p.c_s = get_or(params, "params.", "c_S", p.c_s, notices);
    p.trunc = get_or(params, "params.", "K", p.trunc, notices);
    p.grid = get_or(params, "params.", "M", p.grid, notices);
    p.validate();

    json run = doc.value("run", json::object());
    reject_unknown(run, "run.",
                   {"dt", "t_end", "output_every", "forcing", "project_zero_mean",
                    "collision_threshold", "energy_blowup_threshold", "j1_cosh_variant",
                    "j1_paren_variant"});
    cfg.run.dt = get_or(run, "run.", "dt", cfg.run.dt, notices);
    cfg.run.t_end = get_or(run, "run.", "t_end", cfg.run.t_end, notices);
    cfg.run.output_every = get_or(run, "run.", "output_every", cfg.run.output_every, notices);
    std::string forcing = get_or<std::string>(run, "run.", "forcing", "simplified", notices);
    if (forcing == "simplified") {
        cfg.run.forcing = ForcingMode::simplified;
    } else if (forcing == "full") {
        cfg.run.forcing = ForcingMode::full;
    } else {
        throw config_error("config: run.forcing must be 'simplified' or 'full'");
    }
    cfg.run.project_zero_mean =
        get_or(run, "run.", "project_zero_mean", cfg.run.project_zero_mean, notices);
    cfg.run.collision_threshold =
        get_or(run, "run.", "collision_threshold", cfg.run.collision_threshold, notices);
    cfg.run.energy_blowup_threshold = get_or(run, "run.", "energy_blowup_threshold",
                                             cfg.run.energy_blowup_threshold, notices);
    cfg.run.forcing_options.j1_cosh_variant =
        get_or(run, "run.", "j1_cosh_variant", false, notices);
    cfg.run.forcing_options.j1_paren_variant =
        get_or(run, "run.", "j1_paren_variant", false, notices);

    json initial = doc.value("initial", json::object());
    if (!initial.is_object()) throw config_error("config: 'initial' must be an object");
    cfg.run.u0 = SpectralField(p.trunc);
    cfg.run.v0 = SpectralField(p.trunc);
    if (initial.contains("preset")) {
        reject_unknown(initial, "initial.", {"preset", "k", "amp_U", "amp_V", "phase"});
        std::string preset = initial.at("preset").get<std::string>();
        if (preset == "zero") {
            // fields stay zero
        } else if (preset == "single_mode") {
            int k = get_or(initial, "initial.", "k", 1, notices);
            double amp_u = get_or(initial, "initial.", "amp_U", 0.0, notices);
            double amp_v = get_or(initial, "initial.", "amp_V", 0.0, notices);
            double phase = get_or(initial, "initial.", "phase", 0.0, notices);
            if (k < 1 || k > p.trunc)
                throw config_error("config: initial.k must lie in [1, K]");
            cdouble factor = 0.5 * std::exp(cdouble(0.0, phase));
            cfg.run.u0.set_mode(k, amp_u * factor);
            cfg.run.v0.set_mode(k, amp_v * factor);
        } else {
            throw config_error("config: unknown initial.preset '" + preset + "'");
        }
    } else if (initial.contains("snapshot")) {
        reject_unknown(initial, "initial.", {"snapshot"});
        Snapshot snap = load_snapshot(initial.at("snapshot").get<std::string>());
        if (snap.u.trunc() != p.trunc)
            throw config_error("config: snapshot truncation does not match params.K");
        cfg.run.u0 = snap.u;
        cfg.run.v0 = snap.v;
    } else {
        reject_unknown(initial, "initial.", {"U", "V"});
        if (initial.contains("U"))
            cfg.run.u0 = parse_mode_list(initial.at("U"), p.trunc, "initial.U");
        if (initial.contains("V"))
            cfg.run.v0 = parse_mode_list(initial.at("V"), p.trunc, "initial.V");
    }

    json output = doc.value("output", json::object());
    reject_unknown(output, "output.", {"directory"});
    cfg.output.directory =
        get_or<std::string>(output, "output.", "directory", cfg.output.directory, notices);

    json verify = doc.value("verify", json::object());
    reject_unknown(verify, "verify.", {"K", "panels", "P", "tolerance_override"});
    cfg.verify.trunc = get_or(verify, "verify.", "K", cfg.verify.trunc, notices);
    if (cfg.verify.trunc > 32) {
        std::cerr << "notice: verify.K clamped to 32\n";
        cfg.verify.trunc = 32;
    }
    if (cfg.verify.trunc < 1) throw config_error("config: verify.K must be >= 1");
    cfg.verify.panels = get_or(verify, "verify.", "panels", cfg.verify.panels, notices);
    cfg.verify.strip_p = get_or(verify, "verify.", "P", cfg.verify.strip_p, notices);
    if (verify.contains("tolerance_override"))
        cfg.verify.tolerance_override = verify.at("tolerance_override").get<double>();

    for (const std::string& n : notices) std::cerr << n << "\n";
    return cfg;
}

std::string seed_preset_text() {
    return R"(// Example configuration for the bilayer interface simulator.
// JSON with // comments; unknown keys are rejected.
{
  "params": {
    "epsilon": 0.1,      // aspect ratio (width/length); 0 freezes the nonlinearity
    "eta": 1.0,          // surface tension group
    "theta": 1.0,        // chemotaxis group
    "rho": 1.0,          // proliferation group
    "tau": 1.0,          // inhibitor weight
    "N": 1.0,            // chemical decay rate
    "c_B": 0.5,          // inhibitor data amplitude
    "c_S": 1.0,          // nutrient data amplitude
    "K": 128,            // spectral truncation
    "M": 512             // physical grid (>= 3K+3)
  },
  "initial": {
    // either a preset ...
    "preset": "single_mode", "k": 1, "amp_U": 0.1, "amp_V": -0.1, "phase": 0.0
    // ... or explicit coefficient lists:
    //   "U": [[1, 0.05, 0.0], [2, 0.0, -0.01]], "V": []
    // ... or a previous snapshot:
    //   "snapshot": "out/snapshot_final.json"
  },
  "run": {
    "dt": 1e-3,
    "t_end": 1.0,
    "output_every": 10,
    "forcing": "simplified",          // or "full" (K0, K1, J1 active)
    "project_zero_mean": false,       // re-zero the means after each step
    "collision_threshold": 0.0,
    "energy_blowup_threshold": 1e6,
    "j1_cosh_variant": false,         // corrected cosh form of the first J1 bracket
    "j1_paren_variant": false         // corrected 4(1-cosh) form of the second J1 bracket
  },
  "output": { "directory": "out" },
  "verify": { "K": 32, "panels": 16, "P": 129 }
}
)";
}

}  // namespace bilayer
