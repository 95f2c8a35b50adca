#include "bilayer/verify.hpp"

#include "bilayer/diagnostics.hpp"
#include "bilayer/io.hpp"
#include "bilayer/oracle.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <random>

namespace bilayer {

namespace {

using namespace oracle;

SpectralField random_low_mode(int trunc, unsigned seed, double amp, int kmax) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-amp, amp);
    SpectralField f(trunc);
    for (int k = 1; k <= std::min(kmax, trunc); ++k)
        f.set_mode(k, cdouble(dist(rng), dist(rng)));
    return f;
}

SpectralField single_mode(int trunc, int k, cdouble half_amp) {
    SpectralField f(trunc);
    f.set_mode(k, half_amp);
    return f;
}

// Tolerance used by records whose role is to document a measured gap rather
// than to gate the suite (as-printed J1 brackets, t > 0 profile-term gap).
constexpr double kReportOnly = 10.0;

}  // namespace

std::vector<VerifyRecord> run_verify_suite(const VerifyConfig& vc, ModelParams base) {
    std::vector<VerifyRecord> records;
    auto add = [&](const std::string& name, double dev, double tol) {
        records.push_back({name, dev, tol, dev <= tol});
    };

    QuadratureRule quad{vc.panels};
    const int kv = vc.trunc;

    ModelParams p = base;
    p.trunc = kv;
    p.grid = std::max(base.grid, 4 * kv + 4);

    // --- appendix Poisson certification ---
    {
        StripGrid grid{64, vc.strip_p};
        ModalRhs w = modal_rhs_from_function(
            [](double x1, double y) { return std::sin(x1) * (2.0 - y * (y + 1.0)); }, 64,
            16);
        BoundaryPair g(16);
        GeneralSolution sol = solve_poisson_general(w, g, grid, quad);
        double worst = 0.0;
        for (int j2 = 0; j2 < grid.p; ++j2)
            for (int j1 = 0; j1 < grid.m; ++j1)
                worst = std::max(worst, std::abs(sol.u.at(j1, j2) -
                                                 std::sin(grid.x1(j1)) * grid.x2(j2) *
                                                     (grid.x2(j2) + 1.0)));
        add("poisson_mms_general", worst, 1e-8);

        StripField wsamp(grid);
        for (int j2 = 0; j2 < grid.p; ++j2)
            for (int j1 = 0; j1 < grid.m; ++j1)
                wsamp.at(j1, j2) =
                    std::sin(grid.x1(j1)) * (2.0 - grid.x2(j2) * (grid.x2(j2) + 1.0));
        ResidualReport rep = residual_check(sol.u, wsamp, g);
        add("poisson_residual_boundary", rep.boundary, 1e-10);
    }
    {
        StripGrid grid{32, 65};
        auto w_fn = [](double y) { return std::exp(y) * (1.0 - 2.0 * y); };
        BoundaryPair g(6);
        g.top.set_mode(0, cdouble(0.3, 0.0));
        g.top.set_mode(2, cdouble(0.1, -0.05));
        g.bot.set_mode(1, cdouble(-0.2, 0.08));
        StripField u1 = solve_poisson_stratified(w_fn, g, grid, quad);
        ModalRhs w2{6, [&](double y) {
                        std::vector<cdouble> row(7, cdouble{});
                        row[0] = w_fn(y);
                        return row;
                    }};
        StripField u2 = solve_poisson_general(w2, g, grid, quad).u;
        double worst = 0.0;
        for (size_t i = 0; i < u1.values.size(); ++i)
            worst = std::max(worst, std::abs(u1.values[i] - u2.values[i]));
        add("poisson_lemma_a1_a2_agreement", worst, 1e-10);
    }
    {
        // interior residual of the checker itself converges at 4th order
        auto u_fn = [](double x1, double y) { return std::cos(x1) * std::sin(2.0 * y); };
        auto w_fn = [](double x1, double y) {
            return -5.0 * std::cos(x1) * std::sin(2.0 * y);
        };
        std::vector<double> errs;
        for (int pj : {17, 33, 65}) {
            StripGrid g2{32, pj};
            StripField u(g2), w(g2);
            for (int j2 = 0; j2 < g2.p; ++j2)
                for (int j1 = 0; j1 < g2.m; ++j1) {
                    u.at(j1, j2) = u_fn(g2.x1(j1), g2.x2(j2));
                    w.at(j1, j2) = w_fn(g2.x1(j1), g2.x2(j2));
                }
            BoundaryPair bc(8);
            bc.bot.set_mode(1, cdouble(0.5 * std::sin(-2.0), 0.0));
            errs.push_back(residual_check(u, w, bc).interior);
        }
        double ratio = std::min(errs[0] / errs[1], errs[1] / errs[2]);
        add("poisson_residual_order4_ratio_defect", 16.0 / ratio, 1.4);
    }

    // --- order-0 chemistry and pressure ---
    add("zeroth_profiles_ode",
        std::max(zeroth_profiles_ode_residual(0.5, p), zeroth_profiles_ode_residual(1.7, p)),
        1e-10);
    {
        StripGrid grid{std::max(64, 2 * kv + 2), 65};
        SpectralField h0 = random_low_mode(kv, 901, 0.4, 5);
        SpectralField b0 = random_low_mode(kv, 902, 0.4, 5);
        double t = 0.3;
        PressureP0 closed = pressure_p0(h0, b0, t, p, grid);
        double e = std::exp(-p.big_n * t);
        double tb1 = p.theta * beta1(t, p);
        double rb2 = p.rho * beta2(t, p);
        ModalRhs w0{kv, [e, tb1, rb2, kv](double y) {
                        std::vector<cdouble> row(static_cast<size_t>(kv) + 1, cdouble{});
                        row[0] = -e * (2.0 * tb1 - rb2 * y * (y + 1.0));
                        return row;
                    }};
        BoundaryPair g(kv);
        for (int k = -kv; k <= kv; ++k) {
            double k2 = static_cast<double>(k) * k;
            g.top(k) = p.eta * k2 * h0.coeff(k);
            g.bot(k) = -p.eta * k2 * b0.coeff(k);
        }
        GeneralSolution sol = solve_poisson_general(w0, g, grid, quad);
        double worst = 0.0;
        for (size_t i = 0; i < closed.field.values.size(); ++i)
            worst = std::max(worst, std::abs(closed.field.values[i] - sol.u.values[i]));
        for (int k = -kv; k <= kv; ++k) {
            worst = std::max(worst, std::abs(closed.d2_top.coeff(k) - sol.du_top.coeff(k)));
            worst = std::max(worst, std::abs(closed.d2_bot.coeff(k) - sol.du_bot.coeff(k)));
        }
        add("pressure_p0_vs_general", worst, 1e-8);
    }

    // --- order-0 boundary formulas (eq:ht0 / eq:bt0) ---
    {
        StripGrid grid{std::max(64, 2 * kv + 2), 33};
        double worst = 0.0;
        for (unsigned seed = 0; seed < 10; ++seed) {
            SpectralField h0 = random_low_mode(kv, 1000 + seed, 0.5, 8);
            SpectralField b0 = random_low_mode(kv, 2000 + seed, 0.5, 8);
            BoundaryDeviation dev = verify_order0_boundary(h0, b0, 0.7, p, grid, quad);
            worst = std::max(worst, dev.max());
        }
        add("order0_boundary_random", worst, 1e-8);

        ModelParams q = p;
        q.eta = 0.0;
        SpectralField h0 = random_low_mode(kv, 3001, 0.5, 6);
        SpectralField b0 = random_low_mode(kv, 3002, 0.5, 6);
        add("order0_boundary_eta0", verify_order0_boundary(h0, b0, 1.1, q, grid, quad).max(),
            1e-10);
    }

    // --- order-1 boundary formulas (eq:h1 / eq:b1), term-group isolations ---
    {
        Order1Options printed{{false, false}, quad};
        Order1Options fixed{{true, true}, quad};
        SpectralField z(kv);
        SpectralField h_one = single_mode(kv, 1, cdouble(0.5, 0.0));
        SpectralField b_one = single_mode(kv, 2, cdouble(0.25, -0.15));

        auto group = [&](const std::string& name, const ModelParams& q, double t,
                         const SpectralField& h00, const SpectralField& b00,
                         const SpectralField& h0t, const SpectralField& b0t) {
            BoundaryDeviation fix = verify_order1_boundary(h00, b00, h0t, b0t, z, z, t, q, fixed);
            BoundaryDeviation raw =
                verify_order1_boundary(h00, b00, h0t, b0t, z, z, t, q, printed);
            add("order1_h_" + name, fix.h_dev, 1e-6);
            add("order1_b_" + name + "_corrected_j1", fix.b_dev, 1e-6);
            add("order1_b_" + name + "_as_printed_j1", raw.b_dev, kReportOnly);
        };

        ModelParams theta0 = p;
        theta0.theta = 0.0;
        group("theta0", theta0, 0.0, h_one, b_one, h_one, b_one);

        ModelParams rho0 = p;
        rho0.rho = 0.0;
        SpectralField h0t = single_mode(kv, 2, cdouble(0.1, 0.05));
        SpectralField b0t = single_mode(kv, 1, cdouble(-0.3, 0.0));
        group("rho0", rho0, 0.8, h_one, b_one, h0t, b0t);

        ModelParams eta0 = p;
        eta0.eta = 0.0;
        group("eta0", eta0, 0.0, h_one, b_one, h_one, b_one);

        ModelParams eta_only = p;
        eta_only.theta = 0.0;
        eta_only.rho = 0.0;
        group("eta_only", eta_only, 0.4, h_one, b_one, h0t, b0t);

        // the printed all-mode profile series vs its k = 0-only oracle footprint
        ModelParams prof = p;
        prof.theta = 0.0;
        BoundaryDeviation gap = verify_order1_boundary(z, z, z, z, z, z, 0.5, prof, fixed);
        add("order1_profile_term_t_gap_as_printed", gap.max(), kReportOnly);

        // first-order traces couple through the stiff linear terms
        ModelParams lin = p;
        lin.theta = 0.0;
        lin.rho = 0.0;
        SpectralField h1 = single_mode(kv, 2, cdouble(0.3, -0.2));
        SpectralField b1 = single_mode(kv, 1, cdouble(0.15, 0.1));
        BoundaryDeviation tr = verify_order1_boundary(z, z, z, z, h1, b1, 0.4, lin, fixed);
        add("order1_first_order_traces", tr.max(), 1e-10);
    }

    // --- commutator multiplier (section-6 proof) ---
    {
        int failures = 0;
        for (int k = -64; k <= 64; ++k) {
            for (int m = -64; m <= 64; ++m) {
                double val = commutator_multiplier(k, m);
                int km = k - m;
                bool same_sign = (k >= 0 && km >= 0) || (k <= 0 && km <= 0);
                if (same_sign && val != 0.0) ++failures;
                if (val != 0.0 && std::abs(k) > std::abs(m)) ++failures;
            }
        }
        add("commutator_exhaustive_failures", static_cast<double>(failures), 0.5);
    }

    // --- dispersion spot values ---
    {
        ModelParams q = p;
        q.eta = 1.0;
        auto rows = dispersion_table(q, 50);
        double dev = std::max(std::abs(rows[1].lambda_plus + 2.1639534137),
                              std::abs(rows[1].lambda_minus + 0.4621171573));
        dev = std::max(dev, std::abs(rows[0].lambda_plus));
        dev = std::max(dev, std::abs(rows[0].lambda_minus));
        dev = std::max(dev, std::abs(rows[50].lambda_plus / (-125000.0) - 1.0));
        add("dispersion_spot_values", dev, 1e-9);
    }

    if (vc.tolerance_override) {
        for (VerifyRecord& r : records) {
            r.tolerance = *vc.tolerance_override;
            r.pass = r.max_deviation <= r.tolerance;
        }
    }
    return records;
}

bool all_pass(const std::vector<VerifyRecord>& records) {
    for (const VerifyRecord& r : records)
        if (!r.pass) return false;
    return true;
}

void write_verify_report(const std::string& path,
                         const std::vector<VerifyRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const VerifyRecord& r : records) {
        arr.push_back({{"name", r.name},
                       {"max_deviation", r.max_deviation},
                       {"tolerance", r.tolerance},
                       {"pass", r.pass}});
    }
    std::ofstream out(path);
    if (!out) throw config_error("io: cannot write '" + path + "'");
    out << arr.dump(1) << "\n";
}

}  // namespace bilayer
