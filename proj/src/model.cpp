#include "bilayer/model.hpp"

#include <cmath>

namespace bilayer {

void ModelParams::validate() const {
    if (!(epsilon >= 0.0)) throw config_error("params: epsilon must be >= 0");
    if (!(eta >= 0.0)) throw config_error("params: eta must be >= 0");
    if (!(big_n >= 0.0)) throw config_error("params: N must be >= 0");
    if (trunc < 1) throw config_error("params: K must be >= 1");
    if (grid < 3 * trunc + 3)
        throw config_error("params: M must be >= 3K+3 (2/3 dealiasing rule)");
    for (double v : {epsilon, eta, theta, rho, tau, big_n, c_b, c_s})
        if (!std::isfinite(v)) throw config_error("params: non-finite parameter");
}

double beta1(double t, const ModelParams& p) { return p.c_s - p.big_n * p.c_b * t; }

double beta2(double t, const ModelParams& p) { return beta1(t, p) - p.tau * p.c_b; }

double forcing_k0(double t, const ModelParams& p) {
    return p.rho / 12.0 * beta2(t, p) * std::exp(-p.big_n * t);
}

LinearBlock linear_block(int k, const ModelParams& p) {
    LinearBlock blk;
    if (k == 0) return blk;  // Lambda^2 annihilates the mean
    double s = std::abs(static_cast<double>(k));
    auto [th1, th2] = theta_symbols(k);
    double s3 = s * s * s;
    blk.diag = -p.eta * s * s * th1;     // -eta s^3 coth s
    blk.offdiag = -p.eta * s * s * th2;  // -eta s^3 csch s
    double coth_half = 1.0 + 2.0 / std::expm1(s);
    blk.lambda_plus = -p.eta * s3 * coth_half;
    blk.lambda_minus = -p.eta * s3 * std::tanh(s / 2.0);
    return blk;
}

namespace {

/// Stable hyperbolic building blocks for the forcing brackets, s = |k| >= 1.
struct Hyp {
    double s, coth, csch, tanh_half;
    explicit Hyp(int k) {
        s = std::abs(static_cast<double>(k));
        coth = 1.0 + 2.0 / std::expm1(2.0 * s);
        csch = 2.0 * std::exp(-s) / (1.0 - std::exp(-2.0 * s));
        tanh_half = std::tanh(s / 2.0);  // = (cosh s - 1)/sinh s
    }
};

}  // namespace

ForcingCache::ForcingCache(const SpectralField& u0, const SpectralField& v0,
                           const ModelParams& p, ForcingMode mode, ForcingOptions opts)
    : mode_(mode), opts_(opts), u0_(u0), v0_(v0) {
    if (u0.trunc() != p.trunc || v0.trunc() != p.trunc)
        throw config_error("ForcingCache: initial data truncation mismatch");
    u0_.require_hermitian();
    v0_.require_hermitian();

    size_t n = static_cast<size_t>(p.trunc) + 1;
    profile_.assign(n, 0.0);
    k1_u_theta_.assign(n, 0.0);
    k1_u_rho_.assign(n, 0.0);
    k1_v_theta_.assign(n, 0.0);
    k1_v_rho_.assign(n, 0.0);
    j1_u_theta_.assign(n, 0.0);
    j1_u_rho_.assign(n, 0.0);
    j1_v_theta_.assign(n, 0.0);
    j1_v_rho_.assign(n, 0.0);

    profile_[0] = 0.5;  // limit of (cosh s - 1)/(s sinh s)
    for (int k = 1; k <= p.trunc; ++k) {
        Hyp h(k);
        double s = h.s, s2 = s * s, s3 = s2 * s;
        size_t i = static_cast<size_t>(k);
        profile_[i] = h.tanh_half / s;

        // K^(1) brackets, as printed (eq:h1 / section-5 display).
        k1_u_theta_[i] = s * h.coth;
        k1_u_rho_[i] = (s * h.coth - 3.0) / s2 + 4.0 * h.tanh_half / s3;
        k1_v_theta_[i] = -s * h.csch;
        k1_v_rho_[i] = -1.0 / s2 - h.csch / s + 4.0 * h.tanh_half / s3;

        // J^(1) brackets; the two *_variant switches replace the suspected
        // misprints by their cosh-consistent forms.
        j1_u_theta_[i] = -s * h.csch;
        j1_u_rho_[i] = opts.j1_cosh_variant
                           ? k1_v_rho_[i]
                           : 4.0 * (h.coth - 1.0) * h.csch / s3 - 1.0 / s2 - h.csch / s;
        j1_v_theta_[i] = -s * h.coth;
        // as printed: (4 - cosh s)/(s^3 sinh s) + 3/s^2 - coth s/s, written with
        // csch/coth so large |k| cannot overflow
        j1_v_rho_[i] = opts.j1_paren_variant
                           ? -k1_u_rho_[i]
                           : (4.0 * h.csch - h.coth) / s3 + 3.0 / s2 - h.coth / s;
    }
}

namespace {

SpectralField forcing_field(double t, const ForcingCache& cache, const ModelParams& p,
                            bool is_k1) {
    SpectralField out(p.trunc);
    if (cache.mode() == ForcingMode::simplified) return out;

    double e = std::exp(-p.big_n * t);
    double tb1 = p.theta * beta1(t, p) * e;
    double rb2 = p.rho * beta2(t, p) * e;
    double profile_scale = 2.0 * rb2 * t;

    for (int k = -p.trunc; k <= p.trunc; ++k) {
        cdouble val;
        if (is_k1) {
            val = (tb1 * cache.k1_u_theta(k) + rb2 * cache.k1_u_rho(k)) * cache.u0().coeff(k) -
                  (tb1 * cache.k1_v_theta(k) + rb2 * cache.k1_v_rho(k)) * cache.v0().coeff(k) -
                  profile_scale * cache.profile_sum(k);
        } else {
            val = -(tb1 * cache.j1_u_theta(k) + rb2 * cache.j1_u_rho(k)) * cache.u0().coeff(k) -
                  (tb1 * cache.j1_v_theta(k) + rb2 * cache.j1_v_rho(k)) * cache.v0().coeff(k) +
                  profile_scale * cache.profile_sum(k);
        }
        out(k) = val;
    }
    return out;
}

}  // namespace

SpectralField forcing_k1(double t, const ForcingCache& cache, const ModelParams& p) {
    return forcing_field(t, cache, p, true);
}

SpectralField forcing_j1(double t, const ForcingCache& cache, const ModelParams& p) {
    return forcing_field(t, cache, p, false);
}

RhsResult rhs_order_eps(const SimState& state, const ForcingCache& cache,
                        const ModelParams& p) {
    const SpectralField& u = state.u;
    const SpectralField& v = state.v;
    int trunc = p.trunc;

    SpectralField th1_l2_u = apply_multiplier(u, [](int k) {
        return cdouble(k * static_cast<double>(k) * theta_symbols(k).first, 0.0);
    });
    SpectralField th2_l2_u = apply_multiplier(u, [](int k) {
        return cdouble(k * static_cast<double>(k) * theta_symbols(k).second, 0.0);
    });
    SpectralField th1_l2_v = apply_multiplier(v, [](int k) {
        return cdouble(k * static_cast<double>(k) * theta_symbols(k).first, 0.0);
    });
    SpectralField th2_l2_v = apply_multiplier(v, [](int k) {
        return cdouble(k * static_cast<double>(k) * theta_symbols(k).second, 0.0);
    });
    SpectralField dx_l2_u = apply_multiplier(u, [](int k) {
        return cdouble(0.0, static_cast<double>(k) * k * k);
    });
    SpectralField dx_l2_v = apply_multiplier(v, [](int k) {
        return cdouble(0.0, static_cast<double>(k) * k * k);
    });

    SpectralField p1 = multiply_fields(u, th1_l2_u);  // U * Theta1 L2 U
    SpectralField p2 = multiply_fields(u, th2_l2_v);  // U * Theta2 L2 V
    SpectralField p3 = multiply_fields(u, dx_l2_u);   // U * dx L2 U
    SpectralField p4 = multiply_fields(v, th2_l2_u);  // V * Theta2 L2 U
    SpectralField p5 = multiply_fields(v, th1_l2_v);  // V * Theta1 L2 V
    SpectralField p6 = multiply_fields(v, dx_l2_v);   // V * dx L2 V

    double eps_eta = p.epsilon * p.eta;
    double e = std::exp(-p.big_n * state.t);
    double chem = p.epsilon * (p.theta * beta1(state.t, p) + p.rho / 12.0 * beta2(state.t, p)) * e;

    SpectralField du(trunc), dv(trunc);
    for (int k = -trunc; k <= trunc; ++k) {
        auto [th1, th2] = theta_symbols(k);
        cdouble ik(0.0, static_cast<double>(k));
        cdouble nl_u = th1 * p1.coeff(k) + th1 * p2.coeff(k) + ik * p3.coeff(k) -
                       th2 * p4.coeff(k) - th2 * p5.coeff(k);
        cdouble nl_v = th2 * p1.coeff(k) + th2 * p2.coeff(k) - th1 * p4.coeff(k) -
                       th1 * p5.coeff(k) - ik * p6.coeff(k);
        cdouble chem_u = th1 * u.coeff(k) + th2 * v.coeff(k);
        cdouble chem_v = th2 * u.coeff(k) + th1 * v.coeff(k);
        du(k) = eps_eta * nl_u - chem * chem_u;
        dv(k) = eps_eta * nl_v - chem * chem_v;
    }

    if (cache.mode() == ForcingMode::full) {
        double k0 = forcing_k0(state.t, p);
        du(0) += k0;
        dv(0) -= k0;
        SpectralField k1 = forcing_k1(state.t, cache, p);
        SpectralField j1 = forcing_j1(state.t, cache, p);
        for (int k = -trunc; k <= trunc; ++k) {
            du(k) += p.epsilon * k1.coeff(k);
            dv(k) += p.epsilon * j1.coeff(k);
        }
    }

#ifndef NDEBUG
    du.require_hermitian(1e-10);
    dv.require_hermitian(1e-10);
#endif
    return {std::move(du), std::move(dv)};
}

}  // namespace bilayer
