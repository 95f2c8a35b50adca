#include "bilayer/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bilayer {

const char* to_string(Termination t) {
    switch (t) {
        case Termination::horizon_reached: return "horizon_reached";
        case Termination::collision: return "collision";
        case Termination::energy_blowup: return "energy_blowup";
        case Termination::nan: return "nan";
    }
    return "unknown";
}

void RunConfig::validate() const {
    params.validate();
    if (!(dt > 0.0)) throw config_error("run: dt must be > 0");
    if (!(t_end >= 0.0)) throw config_error("run: t_end must be >= 0");
    if (output_every < 1) throw config_error("run: output_every must be >= 1");
    if (!std::isfinite(collision_threshold) || !std::isfinite(energy_blowup_threshold))
        throw config_error("run: thresholds must be finite");
    if (u0.trunc() != params.trunc || v0.trunc() != params.trunc)
        throw config_error("run: initial data truncation does not match params.K");
}

double min_thickness(const SimState& state, const ModelParams& p) {
    auto us = synthesize(state.u, p.grid);
    auto vs = synthesize(state.v, p.grid);
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j < p.grid; ++j)
        m = std::min(m, 1.0 + p.epsilon * (us[static_cast<size_t>(j)] - vs[static_cast<size_t>(j)]));
    return m;
}

namespace {

/// Exact per-mode propagator of the stiff block over a time interval, expressed
/// in (U, V) variables: U' = a U + b V, V' = b U + a V with
/// a = (e^{l+ tau} + e^{l- tau})/2, b = (e^{l+ tau} - e^{l- tau})/2.
struct StiffPropagator {
    std::vector<double> a, b;

    StiffPropagator(const ModelParams& p, double tau) {
        a.resize(static_cast<size_t>(p.trunc) + 1);
        b.resize(static_cast<size_t>(p.trunc) + 1);
        for (int k = 0; k <= p.trunc; ++k) {
            LinearBlock blk = linear_block(k, p);
            double ep = std::exp(blk.lambda_plus * tau);
            double em = std::exp(blk.lambda_minus * tau);
            a[static_cast<size_t>(k)] = 0.5 * (ep + em);
            b[static_cast<size_t>(k)] = 0.5 * (ep - em);
        }
    }

    void apply(SpectralField& u, SpectralField& v) const {
        for (int k = -u.trunc(); k <= u.trunc(); ++k) {
            size_t i = static_cast<size_t>(std::abs(k));
            cdouble uu = u.coeff(k), vv = v.coeff(k);
            u(k) = a[i] * uu + b[i] * vv;
            v(k) = b[i] * uu + a[i] * vv;
        }
    }
};

SimState step_impl(const SimState& state, double dt, const ForcingCache& cache,
                   const ModelParams& p, const StiffPropagator& half,
                   const StiffPropagator& full) {
    const double t = state.t;
    const int trunc = p.trunc;

    RhsResult k1 = rhs_order_eps(state, cache, p);

    // stage 2: e^{L dt/2} (w + dt/2 k1)
    SimState s2{state.u, state.v, t + 0.5 * dt};
    for (int k = -trunc; k <= trunc; ++k) {
        s2.u(k) += 0.5 * dt * k1.du.coeff(k);
        s2.v(k) += 0.5 * dt * k1.dv.coeff(k);
    }
    half.apply(s2.u, s2.v);
    RhsResult k2 = rhs_order_eps(s2, cache, p);

    // stage 3: e^{L dt/2} w + dt/2 k2
    SimState s3{state.u, state.v, t + 0.5 * dt};
    half.apply(s3.u, s3.v);
    for (int k = -trunc; k <= trunc; ++k) {
        s3.u(k) += 0.5 * dt * k2.du.coeff(k);
        s3.v(k) += 0.5 * dt * k2.dv.coeff(k);
    }
    RhsResult k3 = rhs_order_eps(s3, cache, p);

    // stage 4: e^{L dt} w + dt e^{L dt/2} k3
    SimState s4{state.u, state.v, t + dt};
    full.apply(s4.u, s4.v);
    half.apply(k3.du, k3.dv);
    for (int k = -trunc; k <= trunc; ++k) {
        s4.u(k) += dt * k3.du.coeff(k);
        s4.v(k) += dt * k3.dv.coeff(k);
    }
    RhsResult k4 = rhs_order_eps(s4, cache, p);

    // w_next = e^{L dt} w + dt/6 [e^{L dt} k1 + 2 e^{L dt/2} (k2 + k3prop) + k4]
    // where k3prop = e^{L dt/2} k3 has already been formed above.
    SimState next{state.u, state.v, t + dt};
    full.apply(next.u, next.v);
    full.apply(k1.du, k1.dv);
    half.apply(k2.du, k2.dv);
    const double w6 = dt / 6.0;
    for (int k = -trunc; k <= trunc; ++k) {
        next.u(k) += w6 * (k1.du.coeff(k) + 2.0 * (k2.du.coeff(k) + k3.du.coeff(k)) +
                           k4.du.coeff(k));
        next.v(k) += w6 * (k1.dv.coeff(k) + 2.0 * (k2.dv.coeff(k) + k3.dv.coeff(k)) +
                           k4.dv.coeff(k));
    }
    return next;
}

}  // namespace

SimState step(const SimState& state, double dt, const ForcingCache& cache,
              const ModelParams& p) {
    if (!(dt > 0.0)) throw config_error("step: dt must be > 0");
    StiffPropagator half(p, 0.5 * dt), full(p, dt);
    return step_impl(state, dt, cache, p, half, full);
}

Trajectory run(const RunConfig& config) {
    config.validate();
    const ModelParams& p = config.params;
    ForcingCache cache(config.u0, config.v0, p, config.forcing, config.forcing_options);

    Trajectory traj;
    SimState state{config.u0, config.v0, 0.0};

    DiagnosticsRecord rec = energies(state, p);
    traj.records.push_back(rec);
    if (rec.min_thickness <= config.collision_threshold) {
        traj.termination = Termination::collision;
        traj.termination_time = 0.0;
        traj.final_state = std::move(state);
        return traj;
    }

    // Whole steps of dt, plus one shorter step when t_end is not commensurate.
    double steps_exact = config.t_end / config.dt;
    long n_full = static_cast<long>(std::floor(steps_exact + 1e-9));
    double remainder = config.t_end - static_cast<double>(n_full) * config.dt;
    if (remainder < 1e-9 * config.dt) remainder = 0.0;

    StiffPropagator half(p, 0.5 * config.dt), full(p, config.dt);

    Termination term = Termination::horizon_reached;
    long step_index = 0;
    long n_total = n_full + (remainder > 0.0 ? 1 : 0);
    while (step_index < n_total) {
        bool is_remainder = step_index >= n_full;
        try {
            if (is_remainder) {
                state = step(state, remainder, cache, p);
            } else {
                state = step_impl(state, config.dt, cache, p, half, full);
            }
        } catch (const invariant_error&) {
            term = Termination::nan;
            break;
        }
        ++step_index;
        // keep reported times free of accumulated addition error
        state.t = is_remainder ? config.t_end
                               : config.dt * static_cast<double>(step_index);
        if (config.project_zero_mean) {
            state.u(0) = cdouble(0.0, 0.0);
            state.v(0) = cdouble(0.0, 0.0);
        }

        if (!state.u.all_finite() || !state.v.all_finite()) {
            term = Termination::nan;
            break;
        }
        rec = energies(state, p);
        if (rec.min_thickness <= config.collision_threshold) {
            term = Termination::collision;
            break;
        }
        if (rec.e0 + rec.e1 > config.energy_blowup_threshold) {
            term = Termination::energy_blowup;
            break;
        }
        if (step_index % config.output_every == 0 && step_index < n_total)
            traj.records.push_back(rec);
    }

    if (term == Termination::nan) {
        DiagnosticsRecord bad;  // diagnostics of a non-finite state are meaningless
        bad.t = state.t;
        bad.min_thickness = std::numeric_limits<double>::quiet_NaN();
        traj.records.push_back(bad);
    } else if (traj.records.back().t != state.t) {
        traj.records.push_back(rec);
    }
    traj.termination = term;
    traj.termination_time = state.t;
    traj.final_state = std::move(state);
    return traj;
}

}  // namespace bilayer
