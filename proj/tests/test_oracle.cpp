#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bilayer/oracle.hpp"

#include <cmath>
#include <random>

using namespace bilayer;
using namespace bilayer::oracle;

namespace {

SpectralField single_mode(int trunc, int k, cdouble half_amp) {
    SpectralField f(trunc);
    f.set_mode(k, half_amp);
    return f;
}

SpectralField random_low_mode(int trunc, unsigned seed, double amp, int kmax) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-amp, amp);
    SpectralField f(trunc);
    for (int k = 1; k <= std::min(kmax, trunc); ++k)
        f.set_mode(k, cdouble(dist(rng), dist(rng)));
    return f;
}

ModelParams oracle_params() {
    ModelParams p;
    p.trunc = 16;
    p.grid = 64;
    p.epsilon = 0.1;
    p.eta = 1.0;
    p.theta = 0.7;
    p.rho = 1.3;
    p.tau = 0.8;
    p.big_n = 0.9;
    p.c_b = 0.6;
    p.c_s = 1.1;
    return p;
}

}  // namespace

TEST_CASE("quadrature: composite GL8 handles degree-6 polynomials to 1e-14") {
    auto f = [](double y) {
        return ((((((2.0 * y - 1.0) * y + 3.0) * y - 0.5) * y + 1.0) * y - 2.0) * y + 0.25);
    };
    // exact integral of 2y^6 - y^5 + 3y^4 - 0.5y^3 + y^2 - 2y + 0.25 over [-1,0]
    double exact = 2.0 / 7.0 + 1.0 / 6.0 + 3.0 / 5.0 + 0.5 / 4.0 + 1.0 / 3.0 + 1.0 + 0.25;
    CHECK(std::abs(integrate(f, -1.0, 0.0) - exact) < 1e-14);

    double val = integrate([](double y) { return std::exp(3.0 * y); }, -1.0, 0.0);
    CHECK(val == doctest::Approx((1.0 - std::exp(-3.0)) / 3.0).epsilon(1e-14));
}

TEST_CASE("stratified solver: zero input gives zero") {
    StripGrid grid{64, 33};
    BoundaryPair g(4);
    StripField u = solve_poisson_stratified([](double) { return 0.0; }, g, grid);
    CHECK(u.max_abs() == 0.0);
}

TEST_CASE("stratified solver: w = 1, zero traces gives x2(x2+1)/2") {
    StripGrid grid{16, 65};
    BoundaryPair g(2);
    StripField u = solve_poisson_stratified([](double) { return 1.0; }, g, grid);
    for (int j2 = 0; j2 < grid.p; ++j2) {
        double y = grid.x2(j2);
        CHECK(std::abs(u.at(0, j2) - 0.5 * y * (y + 1.0)) < 1e-12);
    }
}

TEST_CASE("stratified solver: harmonic lifting of cos(x1)") {
    StripGrid grid{64, 33};
    BoundaryPair g(4);
    g.top.set_mode(1, cdouble(0.5, 0.0));  // g1 = cos(x1), g2 = 0
    StripField u = solve_poisson_stratified([](double) { return 0.0; }, g, grid);
    for (int j2 = 0; j2 < grid.p; ++j2) {
        double y = grid.x2(j2);
        for (int j1 = 0; j1 < grid.m; ++j1) {
            double expect = std::cos(grid.x1(j1)) * std::sinh(y + 1.0) / std::sinh(1.0);
            CHECK(std::abs(u.at(j1, j2) - expect) < 1e-10);
        }
    }
}

TEST_CASE("general solver: zero input gives zero") {
    StripGrid grid{16, 17};
    BoundaryPair g(3);
    ModalRhs w{3, [](double) { return std::vector<cdouble>(4, cdouble{}); }};
    GeneralSolution sol = solve_poisson_general(w, g, grid);
    CHECK(sol.u.max_abs() == 0.0);
    CHECK(sol.du_top.max_abs() == 0.0);
    CHECK(sol.du_bot.max_abs() == 0.0);
}

TEST_CASE("general solver: manufactured solution sin(x1) x2(x2+1)") {
    StripGrid grid{64, 129};
    int trunc = 16;
    ModalRhs w = modal_rhs_from_function(
        [](double x1, double y) { return std::sin(x1) * (2.0 - y * (y + 1.0)); }, 64, trunc);
    BoundaryPair g(trunc);
    GeneralSolution sol = solve_poisson_general(w, g, grid);
    double worst = 0.0;
    for (int j2 = 0; j2 < grid.p; ++j2) {
        double y = grid.x2(j2);
        for (int j1 = 0; j1 < grid.m; ++j1) {
            double expect = std::sin(grid.x1(j1)) * y * (y + 1.0);
            worst = std::max(worst, std::abs(sol.u.at(j1, j2) - expect));
        }
    }
    CHECK(worst < 1e-8);

    // boundary derivatives: d/dy [sin(x1) y(y+1)] = sin(x1)(2y+1)
    std::vector<double> dtop = synthesize(sol.du_top, grid.m);
    std::vector<double> dbot = synthesize(sol.du_bot, grid.m);
    for (int j1 = 0; j1 < grid.m; ++j1) {
        CHECK(std::abs(dtop[static_cast<size_t>(j1)] - std::sin(grid.x1(j1))) < 1e-10);
        CHECK(std::abs(dbot[static_cast<size_t>(j1)] + std::sin(grid.x1(j1))) < 1e-10);
    }
}

TEST_CASE("general solver boundary derivative: pure trace lifting at k = 1") {
    StripGrid grid{32, 17};
    int trunc = 4;
    ModalRhs w{trunc, [trunc](double) {
                   return std::vector<cdouble>(static_cast<size_t>(trunc) + 1, cdouble{});
               }};
    BoundaryPair g(trunc);
    g.top.set_mode(1, cdouble(0.5, 0.0));
    GeneralSolution sol = solve_poisson_general(w, g, grid);
    double coth1 = std::cosh(1.0) / std::sinh(1.0);
    double csch1 = 1.0 / std::sinh(1.0);
    CHECK(std::abs(sol.du_top.coeff(1) - cdouble(0.5 * coth1, 0.0)) < 1e-12);
    CHECK(std::abs(sol.du_bot.coeff(1) - cdouble(0.5 * csch1, 0.0)) < 1e-12);
}

TEST_CASE("general solver boundary derivatives match one-sided 4th-order differences") {
    StripGrid grid{32, 257};
    int trunc = 8;
    ModalRhs w = modal_rhs_from_function(
        [](double x1, double y) { return std::cos(2.0 * x1) * std::exp(y) + y; }, 32, trunc);
    BoundaryPair g(trunc);
    g.top.set_mode(1, cdouble(0.2, 0.0));
    g.bot.set_mode(2, cdouble(0.0, -0.3));
    GeneralSolution sol = solve_poisson_general(w, g, grid);

    double h = 1.0 / (grid.p - 1);
    int top = grid.p - 1;
    std::vector<double> dtop = synthesize(sol.du_top, grid.m);
    std::vector<double> dbot = synthesize(sol.du_bot, grid.m);
    for (int j1 = 0; j1 < grid.m; j1 += 3) {
        double fd_top = (25.0 * sol.u.at(j1, top) - 48.0 * sol.u.at(j1, top - 1) +
                         36.0 * sol.u.at(j1, top - 2) - 16.0 * sol.u.at(j1, top - 3) +
                         3.0 * sol.u.at(j1, top - 4)) /
                        (12.0 * h);
        double fd_bot = (-25.0 * sol.u.at(j1, 0) + 48.0 * sol.u.at(j1, 1) -
                         36.0 * sol.u.at(j1, 2) + 16.0 * sol.u.at(j1, 3) -
                         3.0 * sol.u.at(j1, 4)) /
                        (12.0 * h);
        CHECK(std::abs(fd_top - dtop[static_cast<size_t>(j1)]) < 1e-8);
        CHECK(std::abs(fd_bot - dbot[static_cast<size_t>(j1)]) < 1e-8);
    }
}

TEST_CASE("Lemma A.1 and A.2 agree on x1-independent right-hand sides") {
    StripGrid grid{32, 65};
    int trunc = 6;
    auto w_fn = [](double y) { return std::exp(y) * (1.0 - 2.0 * y); };
    BoundaryPair g(trunc);
    g.top.set_mode(0, cdouble(0.3, 0.0));
    g.top.set_mode(2, cdouble(0.1, -0.05));
    g.bot.set_mode(1, cdouble(-0.2, 0.08));

    StripField u1 = solve_poisson_stratified(w_fn, g, grid);
    ModalRhs w2{trunc, [&](double y) {
                    std::vector<cdouble> row(static_cast<size_t>(trunc) + 1, cdouble{});
                    row[0] = w_fn(y);
                    return row;
                }};
    StripField u2 = solve_poisson_general(w2, g, grid).u;

    double worst = 0.0;
    for (size_t i = 0; i < u1.values.size(); ++i)
        worst = std::max(worst, std::abs(u1.values[i] - u2.values[i]));
    CHECK(worst < 1e-10);
}

TEST_CASE("residual_check") {
    StripGrid grid{32, 65};
    int trunc = 8;

    SUBCASE("zero everywhere") {
        StripField u(grid), w(grid);
        BoundaryPair g(trunc);
        ResidualReport rep = residual_check(u, w, g);
        CHECK(rep.interior == 0.0);
        CHECK(rep.boundary == 0.0);
    }

    SUBCASE("manufactured solve has small residuals; perturbation is detected") {
        ModalRhs w = modal_rhs_from_function(
            [](double x1, double y) { return std::sin(x1) * (2.0 - y * (y + 1.0)); }, 32,
            trunc);
        BoundaryPair g(trunc);
        GeneralSolution sol = solve_poisson_general(w, g, grid);

        StripField wsamp(grid);
        for (int j2 = 0; j2 < grid.p; ++j2)
            for (int j1 = 0; j1 < grid.m; ++j1)
                wsamp.at(j1, j2) =
                    std::sin(grid.x1(j1)) * (2.0 - grid.x2(j2) * (grid.x2(j2) + 1.0));

        ResidualReport rep = residual_check(sol.u, wsamp, g);
        CHECK(rep.boundary < 1e-10);
        // the solution is quadratic in x2, so the 4th-order stencil is exact up
        // to h^-2-amplified round-off
        CHECK(rep.interior < 1e-7);

        StripField bad = sol.u;
        for (int j2 = 0; j2 < grid.p; ++j2)
            for (int j1 = 0; j1 < grid.m; ++j1)
                bad.at(j1, j2) += 1e-3 * grid.x2(j2) * (grid.x2(j2) + 1.0);
        ResidualReport rep2 = residual_check(bad, wsamp, g);
        CHECK(rep2.interior == doctest::Approx(2e-3).epsilon(1e-3));
    }

    SUBCASE("interior residual converges at 4th order in the x2 spacing") {
        auto u_fn = [](double x1, double y) { return std::cos(x1) * std::sin(2.0 * y); };
        auto w_fn = [](double x1, double y) {
            return -5.0 * std::cos(x1) * std::sin(2.0 * y);
        };
        std::vector<int> ps = {17, 33, 65};
        std::vector<double> errs;
        for (int pj : ps) {
            StripGrid g2{32, pj};
            StripField u(g2), w(g2);
            for (int j2 = 0; j2 < g2.p; ++j2)
                for (int j1 = 0; j1 < g2.m; ++j1) {
                    u.at(j1, j2) = u_fn(g2.x1(j1), g2.x2(j2));
                    w.at(j1, j2) = w_fn(g2.x1(j1), g2.x2(j2));
                }
            BoundaryPair bc(8);
            bc.bot.set_mode(1, cdouble(0.5 * std::sin(-2.0), 0.0));
            ResidualReport rep = residual_check(u, w, bc);
            errs.push_back(rep.interior);
        }
        CHECK(errs[0] / errs[1] > 12.0);  // ~16 for 4th order
        CHECK(errs[1] / errs[2] > 12.0);
    }
}

TEST_CASE("zeroth_profiles") {
    ModelParams p = oracle_params();

    SUBCASE("t = 0 reproduces the initial data") {
        ZerothProfiles zp = zeroth_profiles(0.0, p);
        for (double y : {-1.0, -0.7, -0.25, 0.0}) {
            CHECK(zp.b0(y) == doctest::Approx(-p.c_b * y * (y + 1.0)).epsilon(1e-15));
            CHECK(zp.s0(y) == doctest::Approx(-p.c_s * y * (y + 1.0)).epsilon(1e-15));
        }
    }

    SUBCASE("profiles vanish on both boundaries") {
        ZerothProfiles zp = zeroth_profiles(0.37, p);
        CHECK(zp.b0(0.0) == 0.0);
        CHECK(zp.b0(-1.0) == 0.0);
        CHECK(zp.s0(0.0) == 0.0);
        CHECK(zp.s0(-1.0) == 0.0);
    }

    SUBCASE("S0 vanishes when beta1(t) = 0") {
        ModelParams q = oracle_params();
        q.big_n = 1.0;
        q.c_s = 1.0;
        q.c_b = 1.0;
        ZerothProfiles zp = zeroth_profiles(1.0, q);  // beta1(1) = 0
        CHECK(std::abs(zp.s0(-0.5)) < 1e-16);
    }

    SUBCASE("profiles satisfy their ODEs") {
        CHECK(zeroth_profiles_ode_residual(0.5, p) < 1e-10);
        CHECK(zeroth_profiles_ode_residual(1.7, p) < 1e-10);
    }

    SUBCASE("boundary derivative values") {
        double t = 0.45;
        ZerothProfiles zp = zeroth_profiles(t, p);
        double ref = std::exp(-p.big_n * t) * beta1(t, p);
        CHECK(zp.s0_d2_top == doctest::Approx(-ref).epsilon(1e-15));
        CHECK(zp.s0_d2_bot == doctest::Approx(ref).epsilon(1e-15));
    }
}

TEST_CASE("pressure_p0: flat interfaces give the quartic polynomial") {
    ModelParams p = oracle_params();
    p.theta = 0.0;
    p.rho = 12.0;
    p.c_s = 1.0;
    p.tau = 0.0;  // beta2(0) = 1
    StripGrid grid{64, 33};
    SpectralField flat(p.trunc);
    PressureP0 res = pressure_p0(flat, flat, 0.0, p, grid);
    for (int j2 = 0; j2 < grid.p; ++j2) {
        double y = grid.x2(j2);
        double expect = y * (y + 1.0) * (y * y + y - 1.0);
        CHECK(std::abs(res.field.at(3, j2) - expect) < 1e-12);
    }
    CHECK(res.d2_top.coeff(0).real() == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(res.d2_bot.coeff(0).real() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("pressure_p0: rho = 0, flat interfaces give -theta beta1 e x2(x2+1)") {
    ModelParams p = oracle_params();
    p.rho = 0.0;
    StripGrid grid{64, 33};
    SpectralField flat(p.trunc);
    double t = 0.6;
    PressureP0 res = pressure_p0(flat, flat, t, p, grid);
    double scale = p.theta * beta1(t, p) * std::exp(-p.big_n * t);
    for (int j2 = 0; j2 < grid.p; ++j2) {
        double y = grid.x2(j2);
        CHECK(std::abs(res.field.at(5, j2) + scale * y * (y + 1.0)) < 1e-13);
    }
    CHECK(std::abs(res.field.at(2, 0)) < 1e-13);
    CHECK(std::abs(res.field.at(2, grid.p - 1)) < 1e-13);
}

TEST_CASE("pressure_p0 matches the general Poisson solver on random low-mode data") {
    ModelParams p = oracle_params();
    StripGrid grid{64, 65};
    SpectralField h0 = random_low_mode(p.trunc, 101, 0.4, 5);
    SpectralField b0 = random_low_mode(p.trunc, 102, 0.4, 5);
    double t = 0.3;
    PressureP0 closed = pressure_p0(h0, b0, t, p, grid);

    double e = std::exp(-p.big_n * t);
    double tb1 = p.theta * beta1(t, p);
    double rb2 = p.rho * beta2(t, p);
    ModalRhs w0{p.trunc, [e, tb1, rb2, trunc = p.trunc](double y) {
                    std::vector<cdouble> row(static_cast<size_t>(trunc) + 1, cdouble{});
                    row[0] = -e * (2.0 * tb1 - rb2 * y * (y + 1.0));
                    return row;
                }};
    BoundaryPair g(p.trunc);
    for (int k = -p.trunc; k <= p.trunc; ++k) {
        double k2 = static_cast<double>(k) * k;
        g.top(k) = p.eta * k2 * h0.coeff(k);
        g.bot(k) = -p.eta * k2 * b0.coeff(k);
    }
    GeneralSolution sol = solve_poisson_general(w0, g, grid);

    double worst_field = 0.0;
    for (size_t i = 0; i < closed.field.values.size(); ++i)
        worst_field =
            std::max(worst_field, std::abs(closed.field.values[i] - sol.u.values[i]));
    CHECK(worst_field < 1e-8);

    for (int k = -p.trunc; k <= p.trunc; ++k) {
        CHECK(std::abs(closed.d2_top.coeff(k) - sol.du_top.coeff(k)) < 1e-8);
        CHECK(std::abs(closed.d2_bot.coeff(k) - sol.du_bot.coeff(k)) < 1e-8);
    }
}

TEST_CASE("first_order_chem") {
    ModelParams p = oracle_params();
    StripGrid grid{64, 33};
    SpectralField h0 = random_low_mode(p.trunc, 201, 0.3, 4);
    SpectralField b0 = random_low_mode(p.trunc, 202, 0.3, 4);

    SUBCASE("vanishes at t = 0 with frozen data") {
        FirstOrderChem foc = first_order_chem(h0, b0, h0, b0, 0.0, p, grid);
        CHECK(foc.b1.max_abs() == 0.0);
        CHECK(foc.s1.max_abs() == 0.0);
        CHECK(foc.s1_d2_top.max_abs() == 0.0);
    }

    SUBCASE("wall rows of B1 carry -cB e (2t + delta-data)") {
        double t = 0.8;
        auto [ht, bt] = linear_flow(h0, b0, t, p, true);
        FirstOrderChem foc = first_order_chem(h0, b0, ht, bt, t, p, grid);
        double e = std::exp(-p.big_n * t);
        SpectralField dh(p.trunc), db(p.trunc);
        for (int k = -p.trunc; k <= p.trunc; ++k) {
            dh(k) = ht.coeff(k) - h0.coeff(k);
            db(k) = bt.coeff(k) - b0.coeff(k);
        }
        std::vector<double> dh_row = synthesize(dh, grid.m);
        std::vector<double> db_row = synthesize(db, grid.m);
        for (int j1 = 0; j1 < grid.m; j1 += 5) {
            size_t i = static_cast<size_t>(j1);
            double top_expect = -p.c_b * e * (2.0 * t + dh_row[i]);
            double bot_expect = -p.c_b * e * (2.0 * t - db_row[i]);
            CHECK(std::abs(foc.b1.at(j1, grid.p - 1) - top_expect) < 1e-12);
            CHECK(std::abs(foc.b1.at(j1, 0) - bot_expect) < 1e-12);
        }
    }

    SUBCASE("S1,2 trace formulas with delta-b = 0") {
        double t = 0.5;
        SpectralField ht = h0;
        ht.set_mode(2, h0.coeff(2) + cdouble(0.25, -0.1));
        FirstOrderChem foc = first_order_chem(h0, b0, ht, b0, t, p, grid);
        double e = std::exp(-p.big_n * t);
        cdouble delta = ht.coeff(2) - h0.coeff(2);
        CHECK(std::abs(foc.s1_d2_top.coeff(2) + 3.0 * e * beta1(t, p) * delta) < 1e-14);
        CHECK(std::abs(foc.s1_d2_bot.coeff(2) - e * beta1(t, p) * delta) < 1e-14);
    }

    SUBCASE("B1 satisfies its ODE along the exact order-0 flow") {
        double t = 0.6;
        const double dt = 1e-3;
        auto chem_at = [&](double s) {
            auto [hs, bs] = linear_flow(h0, b0, s, p, true);
            return first_order_chem(h0, b0, hs, bs, s, p, grid);
        };
        FirstOrderChem cm2 = chem_at(t - 2 * dt), cm1 = chem_at(t - dt),
                       cp1 = chem_at(t + dt), cp2 = chem_at(t + 2 * dt), c0 = chem_at(t);

        // d/dt h0, b0 from the stiff linear block plus the +-K0 drift
        auto [ht, bt] = linear_flow(h0, b0, t, p, true);
        SpectralField dth(p.trunc), dtb(p.trunc);
        for (int k = -p.trunc; k <= p.trunc; ++k) {
            LinearBlock blk = linear_block(k, p);
            dth(k) = blk.diag * ht.coeff(k) + blk.offdiag * bt.coeff(k);
            dtb(k) = blk.offdiag * ht.coeff(k) + blk.diag * bt.coeff(k);
        }
        dth(0) += forcing_k0(t, p);
        dtb(0) -= forcing_k0(t, p);
        std::vector<double> dth_row = synthesize(dth, grid.m);
        std::vector<double> dtb_row = synthesize(dtb, grid.m);

        double e = std::exp(-p.big_n * t);
        double worst = 0.0;
        for (int j2 = 0; j2 < grid.p; j2 += 4) {
            double y = grid.x2(j2);
            double b0_d2 = -p.c_b * e * (2.0 * y + 1.0);
            double b0_d22 = -2.0 * p.c_b * e;
            for (int j1 = 0; j1 < grid.m; j1 += 4) {
                size_t i = static_cast<size_t>(j1);
                double ddt_b1 = (cm2.b1.at(j1, j2) - 8.0 * cm1.b1.at(j1, j2) +
                                 8.0 * cp1.b1.at(j1, j2) - cp2.b1.at(j1, j2)) /
                                (12.0 * dt);
                double rhs = b0_d22 + ((y + 1.0) * dth_row[i] - y * dtb_row[i]) * b0_d2;
                worst = std::max(worst,
                                 std::abs(ddt_b1 + p.big_n * c0.b1.at(j1, j2) - rhs));
            }
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("q0_z0") {
    ModelParams p = oracle_params();
    StripGrid grid{64, 17};

    SUBCASE("flat interfaces give zero sources") {
        SpectralField flat(p.trunc);
        SourceQ0Z0 src = q0_z0(flat, flat, 0.4, p, grid);
        CHECK(src.q0.max_abs() == 0.0);
        CHECK(src.z0.max_abs() == 0.0);
    }

    SUBCASE("single-mode h0: Z0 closed form by substitution") {
        SpectralField h0 = single_mode(p.trunc, 1, cdouble(0.5, 0.0));  // cos(x1)
        SpectralField b0(p.trunc);
        double t = 0.25;
        SourceQ0Z0 src = q0_z0(h0, b0, t, p, grid);
        double e = std::exp(-p.big_n * t);
        double b1v = beta1(t, p);
        for (int j2 = 0; j2 < grid.p; j2 += 3) {
            double y = grid.x2(j2);
            double s0d2 = -e * b1v * (2.0 * y + 1.0);
            double s0d22 = -2.0 * e * b1v;
            for (int j1 = 0; j1 < grid.m; j1 += 3) {
                double c = std::cos(grid.x1(j1));
                double expect = (y + 1.0) * (-c) * s0d2 + 2.0 * c * s0d22;
                CHECK(std::abs(src.z0.at(j1, j2) - expect) < 1e-12);
            }
        }
    }
}

TEST_CASE("verify_order0_boundary") {
    ModelParams p = oracle_params();
    StripGrid grid{128, 33};

    SUBCASE("flat data: both routes give exactly K0") {
        SpectralField flat(p.trunc);
        BoundaryDeviation dev = verify_order0_boundary(flat, flat, 0.3, p, grid);
        CHECK(dev.h_dev < 1e-14);
        CHECK(dev.b_dev < 1e-14);
    }

    SUBCASE("random low-mode data at K = 32") {
        ModelParams q = oracle_params();
        q.trunc = 32;
        q.grid = 128;
        for (unsigned seed = 0; seed < 3; ++seed) {
            SpectralField h0 = random_low_mode(q.trunc, 300 + seed, 0.5, 8);
            SpectralField b0 = random_low_mode(q.trunc, 400 + seed, 0.5, 8);
            BoundaryDeviation dev = verify_order0_boundary(h0, b0, 0.7, q, grid);
            CHECK(dev.h_dev < 1e-8);
            CHECK(dev.b_dev < 1e-8);
        }
    }

    SUBCASE("eta = 0 leaves only chemistry, still consistent") {
        ModelParams q = oracle_params();
        q.eta = 0.0;
        SpectralField h0 = random_low_mode(q.trunc, 55, 0.5, 6);
        SpectralField b0 = random_low_mode(q.trunc, 56, 0.5, 6);
        BoundaryDeviation dev = verify_order0_boundary(h0, b0, 1.1, q, grid);
        CHECK(dev.h_dev < 1e-10);
        CHECK(dev.b_dev < 1e-10);
    }
}

TEST_CASE("verify_order1_boundary") {
    ModelParams p = oracle_params();
    p.trunc = 8;  // keep the unit test quick; acceptance runs K = 32
    p.grid = 32;

    SUBCASE("all zero fields: both routes vanish") {
        SpectralField z(p.trunc);
        BoundaryDeviation dev = verify_order1_boundary(z, z, z, z, z, z, 0.0, p);
        CHECK(dev.h_dev < 1e-14);
        CHECK(dev.b_dev < 1e-14);

        ModelParams q = p;  // at t > 0 the profile term needs rho = 0 to vanish
        q.rho = 0.0;
        BoundaryDeviation dev2 = verify_order1_boundary(z, z, z, z, z, z, 0.5, q);
        CHECK(dev2.h_dev < 1e-14);
        CHECK(dev2.b_dev < 1e-14);
    }

    SUBCASE("eta-only: pure convolution terms against the oracle") {
        ModelParams q = p;
        q.theta = 0.0;
        q.rho = 0.0;
        SpectralField h0 = single_mode(q.trunc, 1, cdouble(0.5, 0.0));
        SpectralField z(q.trunc);
        BoundaryDeviation dev = verify_order1_boundary(h0, z, h0, z, z, z, 0.0, q);
        CHECK(dev.h_dev < 1e-6);
        CHECK(dev.b_dev < 1e-6);

        SpectralField b0 = single_mode(q.trunc, 2, cdouble(0.3, 0.1));
        BoundaryDeviation dev2 = verify_order1_boundary(z, b0, z, b0, z, z, 0.0, q);
        CHECK(dev2.h_dev < 1e-6);
        CHECK(dev2.b_dev < 1e-6);
    }

    SUBCASE("corrected J1 brackets certify; printed ones do not") {
        ModelParams q = p;
        q.theta = 0.0;  // isolate the rho group where the misprints live
        SpectralField h0 = single_mode(q.trunc, 1, cdouble(0.5, 0.0));
        SpectralField b0 = single_mode(q.trunc, 2, cdouble(0.25, -0.15));
        SpectralField z(q.trunc);

        Order1Options fixed;
        fixed.forcing = {true, true};
        BoundaryDeviation good = verify_order1_boundary(h0, b0, h0, b0, z, z, 0.0, q, fixed);
        CHECK(good.h_dev < 1e-6);
        CHECK(good.b_dev < 1e-6);

        Order1Options printed;
        BoundaryDeviation bad = verify_order1_boundary(h0, b0, h0, b0, z, z, 0.0, q, printed);
        CHECK(bad.h_dev < 1e-6);  // K1 (h equation) is correct as printed
        CHECK(bad.b_dev > 1e-3);  // J1 misprints show up in the b equation
    }

    SUBCASE("theta group with distinct frozen and current data") {
        ModelParams q = p;
        q.rho = 0.0;
        SpectralField h00 = single_mode(q.trunc, 1, cdouble(0.4, 0.0));
        SpectralField b00 = single_mode(q.trunc, 1, cdouble(0.0, 0.2));
        SpectralField h0t = single_mode(q.trunc, 2, cdouble(0.1, 0.05));
        SpectralField b0t = single_mode(q.trunc, 1, cdouble(-0.3, 0.0));
        SpectralField z(q.trunc);
        BoundaryDeviation dev = verify_order1_boundary(h00, b00, h0t, b0t, z, z, 0.8, q);
        CHECK(dev.h_dev < 1e-6);
        CHECK(dev.b_dev < 1e-6);
    }

    SUBCASE("first-order traces couple through the stiff linear terms") {
        ModelParams q = p;
        q.theta = 0.0;
        q.rho = 0.0;
        SpectralField z(q.trunc);
        SpectralField h1 = single_mode(q.trunc, 2, cdouble(0.3, -0.2));
        SpectralField b1 = single_mode(q.trunc, 1, cdouble(0.15, 0.1));
        BoundaryDeviation dev = verify_order1_boundary(z, z, z, z, h1, b1, 0.4, q);
        CHECK(dev.h_dev < 1e-10);
        CHECK(dev.b_dev < 1e-10);
    }

    SUBCASE("as printed, the t-proportional profile term is a k = 0 effect only") {
        // with rho on and t > 0 the printed all-mode profile series deviates
        // from the oracle at k != 0; report-only behavior, documented here
        ModelParams q = p;
        q.theta = 0.0;
        SpectralField z(q.trunc);
        Order1Options fixed;
        fixed.forcing = {true, true};
        BoundaryDeviation dev = verify_order1_boundary(z, z, z, z, z, z, 0.5, q, fixed);
        CHECK(dev.h_dev > 1e-3);  // the printed series forces every mode
        CHECK(dev.b_dev > 1e-3);
    }
}

TEST_CASE("linear_flow and k0_integral") {
    ModelParams p = oracle_params();

    SUBCASE("k0_integral matches quadrature of K0") {
        for (double t : {0.3, 1.2}) {
            double ref = integrate([&](double s) { return forcing_k0(s, p); }, 0.0, t,
                                   QuadratureRule{32});
            CHECK(k0_integral(t, p) == doctest::Approx(ref).epsilon(1e-12));
        }
        ModelParams q = p;
        q.big_n = 0.0;
        double ref0 = integrate([&](double s) { return forcing_k0(s, q); }, 0.0, 0.9,
                                QuadratureRule{32});
        CHECK(k0_integral(0.9, q) == doctest::Approx(ref0).epsilon(1e-12));
    }

    SUBCASE("linear_flow decays each diagonal mode exactly") {
        SpectralField h0 = random_low_mode(p.trunc, 61, 0.5, 6);
        SpectralField b0 = random_low_mode(p.trunc, 62, 0.5, 6);
        double t = 0.4;
        auto [h, b] = linear_flow(h0, b0, t, p, false);
        for (int k = 1; k <= p.trunc; ++k) {
            LinearBlock blk = linear_block(k, p);
            cdouble wp = h.coeff(k) + b.coeff(k);
            cdouble expect = std::exp(blk.lambda_plus * t) * (h0.coeff(k) + b0.coeff(k));
            CHECK(std::abs(wp - expect) < 1e-13);
        }
    }
}
