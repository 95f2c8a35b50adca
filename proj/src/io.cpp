#include "bilayer/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

namespace bilayer {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("io: cannot write '" + path + "'");
    return out;
}

}  // namespace

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_series_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out = open_out(path);
    out << "t,E0,E1,min_thickness,max_abs_U,max_abs_V,mean_U,mean_V\n";
    for (const DiagnosticsRecord& r : traj.records) {
        out << format_g17(r.t) << ',' << format_g17(r.e0) << ',' << format_g17(r.e1) << ','
            << format_g17(r.min_thickness) << ',' << format_g17(r.max_abs_u) << ','
            << format_g17(r.max_abs_v) << ',' << format_g17(r.mean_u) << ','
            << format_g17(r.mean_v) << '\n';
    }
}

void write_fields_csv(const std::string& path, const SimState& state,
                      const ModelParams& p) {
    std::ofstream out = open_out(path);
    out << "x1,U,V,thickness\n";
    std::vector<double> us = synthesize(state.u, p.grid);
    std::vector<double> vs = synthesize(state.v, p.grid);
    for (int j = 0; j < p.grid; ++j) {
        size_t i = static_cast<size_t>(j);
        double x1 = -M_PI + 2.0 * M_PI * j / p.grid;
        out << format_g17(x1) << ',' << format_g17(us[i]) << ',' << format_g17(vs[i])
            << ',' << format_g17(1.0 + p.epsilon * (us[i] - vs[i])) << '\n';
    }
}

namespace {

json spectrum_to_json(const SpectralField& f) {
    json arr = json::array();
    for (int k = -f.trunc(); k <= f.trunc(); ++k) {
        cdouble c = f.coeff(k);
        arr.push_back({k, c.real(), c.imag()});
    }
    return arr;
}

SpectralField spectrum_from_json(const json& arr) {
    int max_k = 0;
    for (const auto& e : arr) max_k = std::max(max_k, std::abs(e[0].get<int>()));
    SpectralField f(max_k);
    for (const auto& e : arr)
        f(e[0].get<int>()) = cdouble(e[1].get<double>(), e[2].get<double>());
    f.require_hermitian(1e-9);
    return f;
}

}  // namespace

void write_snapshot_json(const std::string& path, const SimState& state,
                         Termination term) {
    json doc;
    doc["t"] = state.t;
    doc["termination"] = to_string(term);
    doc["U"] = spectrum_to_json(state.u);
    doc["V"] = spectrum_to_json(state.v);
    std::ofstream out = open_out(path);
    out << doc.dump(1) << "\n";
}

Snapshot load_snapshot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("snapshot: cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& ex) {
        throw config_error("snapshot: " + std::string(ex.what()));
    }
    Snapshot snap;
    snap.t = doc.at("t").get<double>();
    snap.termination = doc.at("termination").get<std::string>();
    snap.u = spectrum_from_json(doc.at("U"));
    snap.v = spectrum_from_json(doc.at("V"));
    return snap;
}

void write_dispersion_csv(const std::string& path,
                          const std::vector<DispersionRow>& rows) {
    std::ofstream out = open_out(path);
    out << "k,lambda_plus,lambda_minus\n";
    for (const DispersionRow& r : rows)
        out << r.k << ',' << format_g17(r.lambda_plus) << ',' << format_g17(r.lambda_minus)
            << '\n';
}

}  // namespace bilayer
