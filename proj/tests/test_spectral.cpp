#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bilayer/spectral.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace bilayer;

namespace {

std::vector<double> sample(int m, const std::function<double(double)>& f) {
    std::vector<double> s(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j)
        s[static_cast<size_t>(j)] = f(-std::numbers::pi + 2.0 * std::numbers::pi * j / m);
    return s;
}

SpectralField random_hermitian(int trunc, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    SpectralField f(trunc);
    f.set_mode(0, cdouble(dist(rng), 0.0));
    for (int k = 1; k <= trunc; ++k) f.set_mode(k, cdouble(dist(rng), dist(rng)));
    return f;
}

}  // namespace

TEST_CASE("analyze single modes") {
    auto s = sample(64, [](double x) { return std::sin(x); });
    SpectralField f = analyze(s, 16);
    CHECK(std::abs(f.coeff(1) - cdouble(0.0, -0.5)) < 1e-14);
    CHECK(std::abs(f.coeff(-1) - cdouble(0.0, 0.5)) < 1e-14);
    for (int k = 0; k <= 16; ++k)
        if (k != 1) CHECK(std::abs(f.coeff(k)) < 1e-14);

    auto ones = sample(64, [](double) { return 1.0; });
    SpectralField g = analyze(ones, 16);
    CHECK(g.coeff(0).real() == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 1; k <= 16; ++k) CHECK(std::abs(g.coeff(k)) < 1e-14);

    auto mix = sample(64, [](double x) { return std::cos(2 * x) + 3.0 * std::sin(5 * x); });
    SpectralField h = analyze(mix, 16);
    CHECK(std::abs(h.coeff(2) - cdouble(0.5, 0.0)) < 1e-13);
    CHECK(std::abs(h.coeff(-2) - cdouble(0.5, 0.0)) < 1e-13);
    CHECK(std::abs(h.coeff(5) - cdouble(0.0, -1.5)) < 1e-13);
    CHECK(std::abs(h.coeff(-5) - cdouble(0.0, 1.5)) < 1e-13);
}

TEST_CASE("analyze rejects undersized grids and bad samples") {
    std::vector<double> s(16, 0.0);
    CHECK_THROWS_AS(analyze(s, 8), config_error);
    std::vector<double> bad(64, 0.0);
    bad[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(analyze(bad, 16), invariant_error);
}

TEST_CASE("synthesize inverts analyze on band-limited data") {
    SpectralField f(1);
    f.set_mode(1, cdouble(0.0, -0.5));
    auto s = synthesize(f, 16);
    for (int j = 0; j < 16; ++j) {
        double x = -std::numbers::pi + 2.0 * std::numbers::pi * j / 16;
        CHECK(s[static_cast<size_t>(j)] == doctest::Approx(std::sin(x)).epsilon(1e-13));
    }

    SpectralField z(4);
    for (double v : synthesize(z, 16)) CHECK(v == 0.0);

    SpectralField r = random_hermitian(16, 1234);
    SpectralField back = analyze(synthesize(r, 64), 16);
    for (int k = -16; k <= 16; ++k)
        CHECK(std::abs(back.coeff(k) - r.coeff(k)) < 1e-12);
}

TEST_CASE("synthesize rejects broken Hermitian symmetry") {
    SpectralField f(2);
    f(1) = cdouble(1.0, 0.0);
    f(-1) = cdouble(0.5, 0.0);  // not the conjugate
    CHECK_THROWS_AS(synthesize(f, 16), invariant_error);
}

TEST_CASE("theta symbols: limits, spot values, asymptotics") {
    auto [t1_0, t2_0] = theta_symbols(0);
    CHECK(t1_0 == 1.0);
    CHECK(t2_0 == 1.0);

    auto [t1_1, t2_1] = theta_symbols(1);
    CHECK(t1_1 == doctest::Approx(1.3130352854993312).epsilon(1e-14));
    CHECK(t2_1 == doctest::Approx(0.8509181282393216).epsilon(1e-14));

    auto [t1_50, t2_50] = theta_symbols(50);
    CHECK(t1_50 == doctest::Approx(50.0).epsilon(1e-15));
    CHECK(t2_50 > 0.0);
    CHECK(t2_50 == doctest::Approx(100.0 * std::exp(-50.0)).epsilon(1e-12));

    // symmetry in k
    for (int k : {1, 3, 17}) {
        CHECK(theta_symbols(-k) == theta_symbols(k));
    }
}

TEST_CASE("coth identity theta1 = |k| + 2|k|/(e^{2|k|}-1)") {
    for (int k = 1; k <= 50; ++k) {
        double s = k;
        double ref = s + 2.0 * s / std::expm1(2.0 * s);
        CHECK(std::abs(theta_symbols(k).first - ref) <= 1e-13 * ref);
    }
}

TEST_CASE("theta2 decays faster than any power") {
    for (int k = 30; k <= 200; k += 7) {
        double v = theta_symbols(k).second;
        CHECK(v * std::pow(static_cast<double>(k), 6) < 1.0);
    }
    // no overflow far beyond the truncations in use
    CHECK(std::isfinite(theta_symbols(100000).first));
    CHECK(theta_symbols(100000).second == 0.0);
}

TEST_CASE("apply_multiplier examples") {
    SpectralField sinx(4);
    sinx.set_mode(1, cdouble(0.0, -0.5));
    SpectralField same = apply_multiplier(sinx, lambda_sq_symbol());
    for (int k = -4; k <= 4; ++k)
        CHECK(std::abs(same.coeff(k) - sinx.coeff(k)) < 1e-15);

    SpectralField cosx(4);
    cosx.set_mode(1, cdouble(0.5, 0.0));
    Multiplier theta2_l2 = [](int k) {
        return cdouble(k * static_cast<double>(k) * theta_symbols(k).second, 0.0);
    };
    SpectralField scaled = apply_multiplier(cosx, theta2_l2);
    CHECK(scaled.coeff(1).real() == doctest::Approx(0.5 / std::sinh(1.0)).epsilon(1e-14));

    SpectralField zero(4);
    SpectralField still_zero = apply_multiplier(zero, theta1_symbol());
    CHECK(still_zero.max_abs() == 0.0);
}

TEST_CASE("multiply_fields examples") {
    SpectralField sinx(3), one(3);
    sinx.set_mode(1, cdouble(0.0, -0.5));
    one.set_mode(0, cdouble(1.0, 0.0));
    SpectralField prod = multiply_fields(sinx, one);
    for (int k = -3; k <= 3; ++k)
        CHECK(std::abs(prod.coeff(k) - sinx.coeff(k)) < 1e-14);

    SpectralField cosx(3);
    cosx.set_mode(1, cdouble(0.5, 0.0));
    SpectralField sq = multiply_fields(cosx, cosx);
    CHECK(sq.coeff(0).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sq.coeff(2).real() == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(std::abs(sq.coeff(1)) < 1e-14);

    // truncation at K = 1 removes the whole sin(2x) product
    SpectralField s1(1), c1(1);
    s1.set_mode(1, cdouble(0.0, -0.5));
    c1.set_mode(1, cdouble(0.5, 0.0));
    SpectralField sc = multiply_fields(s1, c1);
    CHECK(sc.max_abs() < 1e-14);
}

TEST_CASE("wiener norm examples") {
    SpectralField sinx(8);
    sinx.set_mode(1, cdouble(0.0, -0.5));
    CHECK(wiener_norm(sinx, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(wiener_norm(sinx, 1) == doctest::Approx(1.0).epsilon(1e-14));

    SpectralField cos3(8);
    cos3.set_mode(3, cdouble(0.5, 0.0));
    CHECK(wiener_norm(cos3, 2) == doctest::Approx(9.0).epsilon(1e-14));
}

TEST_CASE("algebra property: product norm bounded by norm product") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        SpectralField f = random_hermitian(12, static_cast<unsigned>(rng()));
        SpectralField g = random_hermitian(12, static_cast<unsigned>(rng()));
        double lhs = wiener_norm(multiply_fields(f, g), 0);
        double rhs = wiener_norm(f, 0) * wiener_norm(g, 0);
        CHECK(lhs <= rhs * (1.0 + 1e-12));
    }
}

TEST_CASE("operations preserve Hermitian symmetry") {
    SpectralField f = random_hermitian(20, 7);
    SpectralField g = random_hermitian(20, 8);
    CHECK(apply_multiplier(f, theta1_symbol()).is_hermitian());
    CHECK(apply_multiplier(f, derivative_symbol()).is_hermitian());
    CHECK(multiply_fields(f, g).is_hermitian());
    CHECK(analyze(synthesize(f, 64), 20).is_hermitian());
}
