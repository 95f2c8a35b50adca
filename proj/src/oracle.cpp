#include "bilayer/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace bilayer::oracle {

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGlNodes[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498, 0.5255324099163290,
    0.7966664774136267, 0.9602898564975363};
constexpr double kGlWeights[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

struct QuadNodes {
    std::vector<double> y;
    std::vector<double> w;
};

QuadNodes quad_nodes(double a, double b, const QuadratureRule& quad) {
    QuadNodes out;
    int panels = std::max(1, quad.panels);
    out.y.reserve(static_cast<size_t>(panels) * 8);
    out.w.reserve(static_cast<size_t>(panels) * 8);
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h;
        for (int q = 0; q < 8; ++q) {
            out.y.push_back(lo + 0.5 * h * (kGlNodes[q] + 1.0));
            out.w.push_back(0.5 * h * kGlWeights[q]);
        }
    }
    return out;
}

std::vector<double> synth_row(const std::vector<cdouble>& coeffs, int m) {
    int trunc = static_cast<int>(coeffs.size()) - 1;
    SpectralField f(trunc);
    f(0) = cdouble(coeffs[0].real(), 0.0);
    for (int k = 1; k <= trunc; ++k) {
        f(k) = coeffs[static_cast<size_t>(k)];
        f(-k) = std::conj(coeffs[static_cast<size_t>(k)]);
    }
    return synthesize(f, m);
}

std::vector<cdouble> analyze_row(std::span<const double> row, int trunc) {
    SpectralField f = analyze(row, trunc);
    std::vector<cdouble> out(static_cast<size_t>(trunc) + 1);
    for (int k = 0; k <= trunc; ++k) out[static_cast<size_t>(k)] = f.coeff(k);
    return out;
}

double abs_k(int k) { return std::abs(static_cast<double>(k)); }

}  // namespace

double StripField::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

BoundaryPair::BoundaryPair(SpectralField t, SpectralField b)
    : top(std::move(t)), bot(std::move(b)) {
    if (top.trunc() != bot.trunc())
        throw config_error("BoundaryPair: trace truncations differ");
    top.require_hermitian();
    bot.require_hermitian();
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureRule& quad) {
    QuadNodes nodes = quad_nodes(a, b, quad);
    double sum = 0.0;
    for (size_t i = 0; i < nodes.y.size(); ++i) sum += nodes.w[i] * f(nodes.y[i]);
    return sum;
}

cdouble integrate_c(const std::function<cdouble(double)>& f, double a, double b,
                    const QuadratureRule& quad) {
    QuadNodes nodes = quad_nodes(a, b, quad);
    cdouble sum = 0.0;
    for (size_t i = 0; i < nodes.y.size(); ++i) sum += nodes.w[i] * f(nodes.y[i]);
    return sum;
}

ModalRhs modal_rhs_from_function(const std::function<double(double, double)>& w, int m,
                                 int trunc) {
    ModalRhs rhs;
    rhs.trunc = trunc;
    rhs.rows = [w, m, trunc](double y) {
        std::vector<double> row(static_cast<size_t>(m));
        for (int j = 0; j < m; ++j)
            row[static_cast<size_t>(j)] = w(-M_PI + 2.0 * M_PI * j / m, y);
        return analyze_row(row, trunc);
    };
    return rhs;
}

StripField solve_poisson_stratified(const std::function<double(double)>& w,
                                    const BoundaryPair& g, const StripGrid& grid,
                                    const QuadratureRule& quad) {
    const int trunc = g.top.trunc();
    StripField u(grid);

    double int_w1 = integrate([&](double y) { return (1.0 + y) * w(y); }, -1.0, 0.0, quad);

    for (int j2 = 0; j2 < grid.p; ++j2) {
        double x2 = grid.x2(j2);
        double k0_w = x2 * int_w1;
        if (x2 < 0.0)
            k0_w -= integrate([&](double y) { return (x2 - y) * w(y); }, x2, 0.0, quad);

        std::vector<cdouble> coeffs(static_cast<size_t>(trunc) + 1);
        cdouble g1_0 = g.top.coeff(0), g2_0 = g.bot.coeff(0);
        coeffs[0] = k0_w + g1_0 + x2 * (g1_0 - g2_0);
        for (int k = 1; k <= trunc; ++k) {
            double s = abs_k(k);
            cdouble g1 = g.top.coeff(k), g2 = g.bot.coeff(k);
            auto gamma = [&](double y) { return g1 + y * (g1 - g2); };
            cdouble inner = integrate_c(
                [&](double y) { return std::sinh(s * (1.0 + y)) * gamma(y); }, -1.0, 0.0,
                quad);
            cdouble val = std::sinh(s * x2) / std::sinh(s) * s * inner;
            if (x2 < 0.0)
                val -= s * integrate_c(
                               [&](double y) { return std::sinh(s * (x2 - y)) * gamma(y); },
                               x2, 0.0, quad);
            val += g1 + x2 * (g1 - g2);
            coeffs[static_cast<size_t>(k)] = val;
        }
        std::vector<double> row = synth_row(coeffs, grid.m);
        for (int j1 = 0; j1 < grid.m; ++j1) u.at(j1, j2) = row[static_cast<size_t>(j1)];
    }
    return u;
}

GeneralSolution solve_poisson_general(const ModalRhs& w, const BoundaryPair& g,
                                      const StripGrid& grid, const QuadratureRule& quad) {
    const int trunc = std::max(w.trunc, g.top.trunc());
    auto gtop = [&](int k) { return k <= g.top.trunc() ? g.top.coeff(k) : cdouble{}; };
    auto gbot = [&](int k) { return k <= g.bot.trunc() ? g.bot.coeff(k) : cdouble{}; };
    auto what = [&](const std::vector<cdouble>& row, int k) {
        return k <= w.trunc ? row[static_cast<size_t>(k)] : cdouble{};
    };

    // Rows of w at the fixed [-1,0] quadrature nodes serve every mode.
    QuadNodes tr = quad_nodes(-1.0, 0.0, quad);
    std::vector<std::vector<cdouble>> wrows(tr.y.size());
    for (size_t q = 0; q < tr.y.size(); ++q) wrows[q] = w.rows(tr.y[q]);

    GeneralSolution sol{StripField(grid), SpectralField(trunc), SpectralField(trunc)};

    std::vector<cdouble> ik_full(static_cast<size_t>(trunc) + 1);
    std::vector<cdouble> ic_full(static_cast<size_t>(trunc) + 1);
    cdouble lin_top{}, lin_bot{};
    for (int k = 1; k <= trunc; ++k) {
        double s = abs_k(k);
        cdouble accs{}, accc{};
        for (size_t q = 0; q < tr.y.size(); ++q) {
            cdouble wv = what(wrows[q], k);
            accs += tr.w[q] * std::sinh(s * (1.0 + tr.y[q])) * wv;
            accc += tr.w[q] * std::cosh(s * (1.0 + tr.y[q])) * wv;
        }
        ik_full[static_cast<size_t>(k)] = accs;
        ic_full[static_cast<size_t>(k)] = accc;
    }
    for (size_t q = 0; q < tr.y.size(); ++q) {
        cdouble wv = what(wrows[q], 0);
        lin_top += tr.w[q] * (1.0 + tr.y[q]) * wv;
        lin_bot += tr.w[q] * tr.y[q] * wv;
    }

    // boundary derivatives (Lemma A.2 closed forms)
    for (int k = 0; k <= trunc; ++k) {
        cdouble g1 = gtop(k), g2 = gbot(k);
        cdouble dtop, dbot;
        if (k == 0) {
            dtop = (g1 - g2) + lin_top;
            dbot = (g1 - g2) + lin_bot;
            sol.du_top(0) = cdouble(dtop.real(), 0.0);
            sol.du_bot(0) = cdouble(dbot.real(), 0.0);
        } else {
            double s = abs_k(k);
            double csch = 1.0 / std::sinh(s);
            double coth = std::cosh(s) * csch;
            dtop = s * (coth * g1 - csch * g2) + csch * ik_full[static_cast<size_t>(k)];
            dbot = s * (csch * g1 - coth * g2) + coth * ik_full[static_cast<size_t>(k)] -
                   ic_full[static_cast<size_t>(k)];
            sol.du_top(k) = dtop;
            sol.du_top(-k) = std::conj(dtop);
            sol.du_bot(k) = dbot;
            sol.du_bot(-k) = std::conj(dbot);
        }
    }

    // full field (eq:u2 with the k = 0 double-integral limits)
    for (int j2 = 0; j2 < grid.p; ++j2) {
        double x2 = grid.x2(j2);
        QuadNodes pn;
        std::vector<std::vector<cdouble>> prows;
        if (x2 < 0.0) {
            pn = quad_nodes(x2, 0.0, quad);
            prows.resize(pn.y.size());
            for (size_t q = 0; q < pn.y.size(); ++q) prows[q] = w.rows(pn.y[q]);
        }

        std::vector<cdouble> coeffs(static_cast<size_t>(trunc) + 1);
        for (int k = 0; k <= trunc; ++k) {
            cdouble g1 = gtop(k), g2 = gbot(k);
            cdouble val;
            if (k == 0) {
                val = (1.0 + x2) * g1 - x2 * g2 + x2 * lin_top;
                for (size_t q = 0; q < prows.size(); ++q)
                    val -= pn.w[q] * (x2 - pn.y[q]) * what(prows[q], 0);
            } else {
                double s = abs_k(k);
                double sh = std::sinh(s);
                val = std::sinh(s * (x2 + 1.0)) / sh * g1 - std::sinh(s * x2) / sh * g2 +
                      std::sinh(s * x2) / (s * sh) * ik_full[static_cast<size_t>(k)];
                cdouble part{};
                for (size_t q = 0; q < prows.size(); ++q)
                    part += pn.w[q] * std::sinh(s * (x2 - pn.y[q])) * what(prows[q], k);
                val -= part / s;
            }
            coeffs[static_cast<size_t>(k)] = val;
        }
        std::vector<double> row = synth_row(coeffs, grid.m);
        for (int j1 = 0; j1 < grid.m; ++j1) sol.u.at(j1, j2) = row[static_cast<size_t>(j1)];
    }
    return sol;
}

ResidualReport residual_check(const StripField& u, const StripField& w,
                              const BoundaryPair& g) {
    const StripGrid& grid = u.grid;
    if (w.grid.m != grid.m || w.grid.p != grid.p)
        throw config_error("residual_check: grid mismatch");
    ResidualReport rep;
    double h = 1.0 / (grid.p - 1);
    int trunc_row = grid.m / 2 - 1;

    for (int j2 = 2; j2 <= grid.p - 3; ++j2) {
        std::span<const double> row(&u.values[static_cast<size_t>(j2) * grid.m],
                                    static_cast<size_t>(grid.m));
        SpectralField rf = analyze(row, trunc_row);
        SpectralField rxx = apply_multiplier(
            rf, [](int k) { return cdouble(-static_cast<double>(k) * k, 0.0); });
        std::vector<double> uxx = synthesize(rxx, grid.m);
        for (int j1 = 0; j1 < grid.m; ++j1) {
            double uyy = (-u.at(j1, j2 - 2) + 16.0 * u.at(j1, j2 - 1) - 30.0 * u.at(j1, j2) +
                          16.0 * u.at(j1, j2 + 1) - u.at(j1, j2 + 2)) /
                         (12.0 * h * h);
            rep.interior = std::max(
                rep.interior, std::abs(uxx[static_cast<size_t>(j1)] + uyy - w.at(j1, j2)));
        }
    }

    std::vector<double> top = synthesize(g.top, grid.m);
    std::vector<double> bot = synthesize(g.bot, grid.m);
    for (int j1 = 0; j1 < grid.m; ++j1) {
        rep.boundary = std::max(
            rep.boundary, std::abs(u.at(j1, grid.p - 1) - top[static_cast<size_t>(j1)]));
        rep.boundary =
            std::max(rep.boundary, std::abs(u.at(j1, 0) - bot[static_cast<size_t>(j1)]));
    }
    return rep;
}

ZerothProfiles zeroth_profiles(double t, const ModelParams& p) {
    double e = std::exp(-p.big_n * t);
    double b1 = beta1(t, p);
    ZerothProfiles out;
    out.b0 = [e, cb = p.c_b](double y) { return -cb * e * y * (y + 1.0); };
    out.s0 = [e, b1](double y) { return -e * b1 * y * (y + 1.0); };
    out.s0_d2_top = -e * b1;
    out.s0_d2_bot = e * b1;
    return out;
}

double zeroth_profiles_ode_residual(double t, const ModelParams& p) {
    const double dt = 1e-3;
    auto b0_at = [&](double s, double y) {
        return -p.c_b * std::exp(-p.big_n * s) * y * (y + 1.0);
    };
    auto s0_at = [&](double s, double y) {
        return -std::exp(-p.big_n * s) * beta1(s, p) * y * (y + 1.0);
    };
    auto ddt = [&](auto&& f, double y) {
        return (f(t - 2 * dt, y) - 8.0 * f(t - dt, y) + 8.0 * f(t + dt, y) -
                f(t + 2 * dt, y)) /
               (12.0 * dt);
    };
    double worst = 0.0;
    for (int j = 0; j <= 32; ++j) {
        double y = -1.0 + j / 32.0;
        double r1 = ddt(b0_at, y) + p.big_n * b0_at(t, y);
        double r2 = ddt(s0_at, y) + p.big_n * s0_at(t, y) + p.big_n * b0_at(t, y);
        worst = std::max({worst, std::abs(r1), std::abs(r2)});
    }
    return worst;
}

namespace {

/// Closed-form order-0 pressure, mode by mode. The sinh/cosh brackets of eq:P0
/// are collapsed to sinh(s(1+y))/sinh(s) and sinh(sy)/sinh(s), which stay
/// bounded on [-1, 0].
struct PressureModes {
    double eta, e, tb1, rb2;
    const SpectralField* h;
    const SpectralField* b;

    PressureModes(const SpectralField& h0, const SpectralField& b0, double t,
                  const ModelParams& p)
        : eta(p.eta), e(std::exp(-p.big_n * t)), tb1(p.theta * beta1(t, p)),
          rb2(p.rho * beta2(t, p)), h(&h0), b(&b0) {}

    double poly(double y) const {
        return e * y * (y + 1.0) * (-tb1 + rb2 / 12.0 * (y * y + y - 1.0));
    }
    double poly_d2(double y) const {
        return e * (-tb1 * (2.0 * y + 1.0) +
                    rb2 / 12.0 * (4.0 * y * y * y + 6.0 * y * y - 1.0));
    }
    double poly_d22(double y) const { return e * (-2.0 * tb1 + rb2 * y * (y + 1.0)); }

    cdouble mode(int k, double y) const {  // coefficient of e^{ikx}, k >= 1
        double s = abs_k(k), sh = std::sinh(s);
        return eta * s * s *
               (std::sinh(s * (1.0 + y)) / sh * h->coeff(k) +
                std::sinh(s * y) / sh * b->coeff(k));
    }
    cdouble mode_d2(int k, double y) const {
        double s = abs_k(k), sh = std::sinh(s);
        return eta * s * s * s *
               (std::cosh(s * (1.0 + y)) / sh * h->coeff(k) +
                std::cosh(s * y) / sh * b->coeff(k));
    }
    cdouble mode_d22(int k, double y) const {
        double s = abs_k(k);
        return s * s * mode(k, y);
    }
    cdouble mode_d12(int k, double y) const {
        return cdouble(0.0, static_cast<double>(k)) * mode_d2(k, y);
    }
    cdouble mode_d1(int k, double y) const {
        return cdouble(0.0, static_cast<double>(k)) * mode(k, y);
    }
};

}  // namespace

PressureP0 pressure_p0(const SpectralField& h0, const SpectralField& b0, double t,
                       const ModelParams& p, const StripGrid& grid) {
    if (h0.trunc() != b0.trunc()) throw config_error("pressure_p0: truncation mismatch");
    const int trunc = h0.trunc();
    PressureModes pm(h0, b0, t, p);

    PressureP0 out{StripField(grid), SpectralField(trunc), SpectralField(trunc)};
    for (int j2 = 0; j2 < grid.p; ++j2) {
        double y = grid.x2(j2);
        std::vector<cdouble> coeffs(static_cast<size_t>(trunc) + 1);
        coeffs[0] = pm.poly(y);
        for (int k = 1; k <= trunc; ++k) coeffs[static_cast<size_t>(k)] = pm.mode(k, y);
        std::vector<double> row = synth_row(coeffs, grid.m);
        for (int j1 = 0; j1 < grid.m; ++j1)
            out.field.at(j1, j2) = row[static_cast<size_t>(j1)];
    }

    double const_part = std::exp(-p.big_n * t) *
                        (p.theta * beta1(t, p) + p.rho / 12.0 * beta2(t, p));
    out.d2_top(0) = cdouble(-const_part, 0.0);
    out.d2_bot(0) = cdouble(const_part, 0.0);
    for (int k = 1; k <= trunc; ++k) {
        cdouble top = pm.mode_d2(k, 0.0);
        cdouble bot = pm.mode_d2(k, -1.0);
        out.d2_top(k) = top;
        out.d2_top(-k) = std::conj(top);
        out.d2_bot(k) = bot;
        out.d2_bot(-k) = std::conj(bot);
    }
    return out;
}

FirstOrderChem first_order_chem(const SpectralField& h0_t0, const SpectralField& b0_t0,
                                const SpectralField& h0_tt, const SpectralField& b0_tt,
                                double t, const ModelParams& p, const StripGrid& grid) {
    const int trunc = h0_t0.trunc();
    double e = std::exp(-p.big_n * t);
    double b1 = beta1(t, p);

    SpectralField dh(trunc), db(trunc);
    for (int k = -trunc; k <= trunc; ++k) {
        dh(k) = h0_tt.coeff(k) - h0_t0.coeff(k);
        db(k) = b0_tt.coeff(k) - b0_t0.coeff(k);
    }
    std::vector<double> dh_row = synthesize(dh, grid.m);
    std::vector<double> db_row = synthesize(db, grid.m);

    FirstOrderChem out{StripField(grid), StripField(grid), SpectralField(trunc),
                       SpectralField(trunc)};
    for (int j2 = 0; j2 < grid.p; ++j2) {
        double y = grid.x2(j2);
        for (int j1 = 0; j1 < grid.m; ++j1) {
            size_t j = static_cast<size_t>(j1);
            double interface =
                ((y + 1.0) * dh_row[j] - y * db_row[j]) * (2.0 * y + 1.0);
            out.b1.at(j1, j2) = -p.c_b * e * (2.0 * t + interface);
            out.s1.at(j1, j2) = -e * b1 * (interface + 2.0 * t);
        }
    }
    for (int k = -trunc; k <= trunc; ++k) {
        out.s1_d2_top(k) = e * b1 * (-3.0 * dh.coeff(k) + db.coeff(k));
        out.s1_d2_bot(k) = e * b1 * (-3.0 * db.coeff(k) + dh.coeff(k));
    }
    return out;
}

SourceQ0Z0 q0_z0(const SpectralField& h0, const SpectralField& b0, double t,
                 const ModelParams& p, const StripGrid& grid) {
    const int trunc = h0.trunc();
    PressureModes pm(h0, b0, t, p);
    double e = std::exp(-p.big_n * t);
    double b1 = beta1(t, p);
    double s0_d22 = -2.0 * e * b1;

    auto deriv_row = [&](const SpectralField& f, int order) {
        SpectralField g = apply_multiplier(f, [order](int k) {
            cdouble ik(0.0, static_cast<double>(k));
            cdouble v(1.0, 0.0);
            for (int i = 0; i < order; ++i) v *= ik;
            return v;
        });
        return synthesize(g, grid.m);
    };
    std::vector<double> h_row = synthesize(h0, grid.m);
    std::vector<double> b_row = synthesize(b0, grid.m);
    std::vector<double> hx = deriv_row(h0, 1), bx = deriv_row(b0, 1);
    std::vector<double> hxx = deriv_row(h0, 2), bxx = deriv_row(b0, 2);

    SourceQ0Z0 out{StripField(grid), StripField(grid)};
    for (int j2 = 0; j2 < grid.p; ++j2) {
        double y = grid.x2(j2);
        double s0d2 = -e * b1 * (2.0 * y + 1.0);

        std::vector<cdouble> p2(static_cast<size_t>(trunc) + 1),
            p12(static_cast<size_t>(trunc) + 1), p22(static_cast<size_t>(trunc) + 1);
        p2[0] = pm.poly_d2(y);
        p22[0] = pm.poly_d22(y);
        for (int k = 1; k <= trunc; ++k) {
            p2[static_cast<size_t>(k)] = pm.mode_d2(k, y);
            p12[static_cast<size_t>(k)] = pm.mode_d12(k, y);
            p22[static_cast<size_t>(k)] = pm.mode_d22(k, y);
        }
        std::vector<double> p2r = synth_row(p2, grid.m);
        std::vector<double> p12r = synth_row(p12, grid.m);
        std::vector<double> p22r = synth_row(p22, grid.m);

        for (int j1 = 0; j1 < grid.m; ++j1) {
            size_t j = static_cast<size_t>(j1);
            double curv = (y + 1.0) * hxx[j] - y * bxx[j];
            double slope = (y + 1.0) * hx[j] - y * bx[j];
            double gap = h_row[j] - b_row[j];
            out.q0.at(j1, j2) = curv * p2r[j] + 2.0 * slope * p12r[j] + 2.0 * gap * p22r[j];
            out.z0.at(j1, j2) = curv * s0d2 + 2.0 * gap * s0_d22;
        }
    }
    return out;
}

double k0_integral(double t, const ModelParams& p) {
    double beta20 = p.c_s - p.tau * p.c_b;
    if (p.big_n == 0.0) return p.rho / 12.0 * beta20 * t;
    double n = p.big_n;
    double ent = std::exp(-n * t);
    return p.rho / 12.0 *
           (beta20 * (1.0 - ent) / n - p.c_b * (1.0 - (1.0 + n * t) * ent) / n);
}

std::pair<SpectralField, SpectralField> linear_flow(const SpectralField& h0,
                                                    const SpectralField& b0, double t,
                                                    const ModelParams& p,
                                                    bool with_k0_mean) {
    const int trunc = h0.trunc();
    SpectralField h(trunc), b(trunc);
    for (int k = -trunc; k <= trunc; ++k) {
        LinearBlock blk = linear_block(k, p);
        double ep = std::exp(blk.lambda_plus * t);
        double em = std::exp(blk.lambda_minus * t);
        cdouble wp = h0.coeff(k) + b0.coeff(k);
        cdouble wm = h0.coeff(k) - b0.coeff(k);
        h(k) = 0.5 * (ep * wp + em * wm);
        b(k) = 0.5 * (ep * wp - em * wm);
    }
    if (with_k0_mean) {
        double drift = k0_integral(t, p);
        h(0) += drift;
        b(0) -= drift;
    }
    return {std::move(h), std::move(b)};
}

BoundaryDeviation verify_order0_boundary(const SpectralField& h0, const SpectralField& b0,
                                         double t, const ModelParams& p,
                                         const StripGrid& grid, const QuadratureRule& quad) {
    const int trunc = h0.trunc();
    double e = std::exp(-p.big_n * t);
    double b1 = beta1(t, p);
    double k0 = forcing_k0(t, p);

    // route (a): the spectral formulas eq:ht0 / eq:bt0
    SpectralField spec_h(trunc), spec_b(trunc);
    for (int k = -trunc; k <= trunc; ++k) {
        auto [th1, th2] = theta_symbols(k);
        double k2 = static_cast<double>(k) * k;
        spec_h(k) = -p.eta * k2 * (th1 * h0.coeff(k) + th2 * b0.coeff(k));
        spec_b(k) = -p.eta * k2 * (th2 * h0.coeff(k) + th1 * b0.coeff(k));
    }
    spec_h(0) += k0;
    spec_b(0) -= k0;

    // route (b): Poisson oracle with w0(y) = -e (2 theta beta1 - rho beta2 y(y+1))
    double rb2 = p.rho * beta2(t, p);
    ModalRhs w0;
    w0.trunc = trunc;
    w0.rows = [e, tb1 = p.theta * b1, rb2, trunc](double y) {
        std::vector<cdouble> row(static_cast<size_t>(trunc) + 1);
        row[0] = -e * (2.0 * tb1 - rb2 * y * (y + 1.0));
        return row;
    };
    BoundaryPair g(trunc);
    for (int k = -trunc; k <= trunc; ++k) {
        double k2 = static_cast<double>(k) * k;
        g.top(k) = p.eta * k2 * h0.coeff(k);
        g.bot(k) = -p.eta * k2 * b0.coeff(k);
    }
    StripGrid trace_grid{grid.m, 2};
    GeneralSolution sol = solve_poisson_general(w0, g, trace_grid, quad);

    SpectralField oracle_h(trunc), oracle_b(trunc);
    for (int k = -trunc; k <= trunc; ++k) {
        oracle_h(k) = -sol.du_top.coeff(k);
        oracle_b(k) = -sol.du_bot.coeff(k);
    }
    oracle_h(0) += p.theta * (-e * b1);  // + theta S0,2(0)
    oracle_b(0) += p.theta * (e * b1);   // + theta S0,2(-1)

    BoundaryDeviation dev;
    std::vector<double> sh = synthesize(spec_h, grid.m), oh = synthesize(oracle_h, grid.m);
    std::vector<double> sb = synthesize(spec_b, grid.m), ob = synthesize(oracle_b, grid.m);
    for (int j = 0; j < grid.m; ++j) {
        size_t i = static_cast<size_t>(j);
        dev.h_dev = std::max(dev.h_dev, std::abs(sh[i] - oh[i]));
        dev.b_dev = std::max(dev.b_dev, std::abs(sb[i] - ob[i]));
    }
    return dev;
}

namespace {

/// (f per-mode-weighted convolution g)(k) = sum_m mult(k, m) f(k-m) g(m).
SpectralField convolve(const SpectralField& f, const SpectralField& g, int out_trunc,
                       const std::function<double(int, int)>& mult) {
    SpectralField out(out_trunc);
    for (int k = -out_trunc; k <= out_trunc; ++k) {
        cdouble acc{};
        for (int m = -g.trunc(); m <= g.trunc(); ++m) {
            int km = k - m;
            if (km < -f.trunc() || km > f.trunc()) continue;
            acc += mult(k, m) * f.coeff(km) * g.coeff(m);
        }
        out(k) = acc;
    }
    return out;
}

}  // namespace

BoundaryDeviation verify_order1_boundary(const SpectralField& h0_t0,
                                         const SpectralField& b0_t0,
                                         const SpectralField& h0_tt,
                                         const SpectralField& b0_tt,
                                         const SpectralField& h1, const SpectralField& b1,
                                         double t, const ModelParams& p,
                                         const Order1Options& opts) {
    const int kk = h0_t0.trunc();
    const int t2 = 2 * kk;              // quadratic terms reach bandwidth 2K
    int m_o = 8;
    while (m_o < 4 * kk + 4) m_o *= 2;  // alias-free analysis of quadratic rows

    const double e = std::exp(-p.big_n * t);
    const double b1c = beta1(t, p);
    const double b2c = beta2(t, p);
    const double tb1 = p.theta * b1c * e;
    const double rb2 = p.rho * b2c * e;

    SpectralField dh(kk), db(kk);
    for (int k = -kk; k <= kk; ++k) {
        dh(k) = h0_tt.coeff(k) - h0_t0.coeff(k);
        db(k) = b0_tt.coeff(k) - b0_t0.coeff(k);
    }

    // ---- route (a): the paper's spectral displays eq:h1 / eq:b1 ----
    ForcingCache brackets(h0_t0, b0_t0, p, ForcingMode::full, opts.forcing);

    auto theta1 = [](int k) { return theta_symbols(k).first; };
    auto theta2 = [](int k) { return theta_symbols(k).second; };
    auto m2 = [](int m) { return static_cast<double>(m) * m; };
    auto m3 = [](int m) { return static_cast<double>(m) * m * m; };

    SpectralField conv_hh = convolve(h0_tt, h0_tt, t2, [&](int k, int m) {
        return theta1(k) * theta1(m) * m2(m) - k * m3(m);
    });
    SpectralField conv_hb = convolve(h0_tt, b0_tt, t2, [&](int k, int m) {
        return theta1(k) * theta2(m) * m2(m);
    });
    SpectralField conv_bh = convolve(b0_tt, h0_tt, t2, [&](int k, int m) {
        return theta2(k) * theta2(m) * m2(m);
    });
    SpectralField conv_bb = convolve(b0_tt, b0_tt, t2, [&](int k, int m) {
        return theta2(k) * theta1(m) * m2(m);
    });

    SpectralField conv2_hh = convolve(h0_tt, h0_tt, t2, [&](int k, int m) {
        return theta2(k) * theta1(m) * m2(m);
    });
    SpectralField conv2_hb = convolve(h0_tt, b0_tt, t2, [&](int k, int m) {
        return theta2(k) * theta2(m) * m2(m);
    });
    SpectralField conv2_bh = convolve(b0_tt, h0_tt, t2, [&](int k, int m) {
        return theta1(k) * theta2(m) * m2(m);
    });
    SpectralField conv2_bb = convolve(b0_tt, b0_tt, t2, [&](int k, int m) {
        return theta1(k) * theta1(m) * m2(m) - k * m3(m);
    });

    SpectralField route_a_h(t2), route_a_b(t2);
    for (int k = -t2; k <= t2; ++k) {
        auto [th1, th2] = theta_symbols(k);
        double k2v = static_cast<double>(k) * k;
        cdouble val_h{}, val_b{};

        if (std::abs(k) <= kk) {
            // stiff linear terms on the first-order corrections
            val_h += -p.eta * k2v * (th1 * h1.coeff(k) + th2 * b1.coeff(k));
            val_b += -p.eta * k2v * (th2 * h1.coeff(k) + th1 * b1.coeff(k));
            // current-time single sums
            double c = tb1 + rb2 / 12.0;
            val_h += -c * (th1 * h0_tt.coeff(k) + th2 * b0_tt.coeff(k));
            val_b += -c * (th2 * h0_tt.coeff(k) + th1 * b0_tt.coeff(k));
            // frozen-data brackets (K1 for h, J1 for b)
            cdouble fu = h0_t0.coeff(k), fv = b0_t0.coeff(k);
            val_h += (tb1 * brackets.k1_u_theta(k) + rb2 * brackets.k1_u_rho(k)) * fu -
                     (tb1 * brackets.k1_v_theta(k) + rb2 * brackets.k1_v_rho(k)) * fv;
            val_b += -(tb1 * brackets.j1_u_theta(k) + rb2 * brackets.j1_u_rho(k)) * fu -
                     (tb1 * brackets.j1_v_theta(k) + rb2 * brackets.j1_v_rho(k)) * fv;
        }
        // t-proportional profile term, as printed (all modes)
        double prof = (k == 0) ? 0.5 : std::tanh(abs_k(k) / 2.0) / abs_k(k);
        val_h += -2.0 * rb2 * t * prof;
        val_b += 2.0 * rb2 * t * prof;

        val_h += p.eta * (conv_hh.coeff(k) + conv_hb.coeff(k) - conv_bh.coeff(k) -
                          conv_bb.coeff(k));
        val_b += p.eta * (conv2_hh.coeff(k) + conv2_hb.coeff(k) - conv2_bh.coeff(k) -
                          conv2_bb.coeff(k));
        route_a_h(k) = val_h;
        route_a_b(k) = val_b;
    }

    // ---- route (b): independent assembly through the Poisson solver ----
    PressureModes pm(h0_tt, b0_tt, t, p);

    auto deriv_row = [&](const SpectralField& f, int order) {
        SpectralField g = apply_multiplier(f, [order](int k) {
            cdouble ik(0.0, static_cast<double>(k));
            cdouble v(1.0, 0.0);
            for (int i = 0; i < order; ++i) v *= ik;
            return v;
        });
        return synthesize(g, m_o);
    };
    std::vector<double> h_row = synthesize(h0_tt, m_o), b_row = synthesize(b0_tt, m_o);
    std::vector<double> hx = deriv_row(h0_tt, 1), bx = deriv_row(b0_tt, 1);
    std::vector<double> hxx = deriv_row(h0_tt, 2), bxx = deriv_row(b0_tt, 2);

    auto w1_rows = [&](double y) {
        std::vector<cdouble> row(static_cast<size_t>(t2) + 1, cdouble{});

        // modal linear parts (bandwidth K)
        for (int k = 0; k <= kk; ++k) {
            double k2v = static_cast<double>(k) * k;
            cdouble ddh = dh.coeff(k), ddb = db.coeff(k);
            cdouble interface = (2.0 * y + 1.0) * ((y + 1.0) * ddh - y * ddb);
            cdouble s1 = -e * b1c * interface;
            cdouble b1f = -p.c_b * e * interface;
            if (k == 0) {
                s1 += -e * b1c * 2.0 * t;
                b1f += -p.c_b * e * 2.0 * t;
            }
            cdouble s1yy = -4.0 * e * b1c * (ddh - ddb);
            cdouble lap_s1 = -k2v * s1 + s1yy;
            cdouble z0 = (-k2v * ((y + 1.0) * h0_tt.coeff(k) - y * b0_tt.coeff(k))) *
                             (-e * b1c * (2.0 * y + 1.0)) +
                         2.0 * (h0_tt.coeff(k) - b0_tt.coeff(k)) * (-2.0 * e * b1c);
            row[static_cast<size_t>(k)] +=
                p.theta * lap_s1 - p.rho * (s1 - p.tau * b1f) - p.theta * z0;
        }

        // Q0 row by pointwise assembly (bandwidth 2K)
        std::vector<cdouble> p2(static_cast<size_t>(kk) + 1),
            p12(static_cast<size_t>(kk) + 1), p22(static_cast<size_t>(kk) + 1);
        p2[0] = pm.poly_d2(y);
        p22[0] = pm.poly_d22(y);
        for (int k = 1; k <= kk; ++k) {
            p2[static_cast<size_t>(k)] = pm.mode_d2(k, y);
            p12[static_cast<size_t>(k)] = pm.mode_d12(k, y);
            p22[static_cast<size_t>(k)] = pm.mode_d22(k, y);
        }
        std::vector<double> p2r = synth_row(p2, m_o), p12r = synth_row(p12, m_o),
                            p22r = synth_row(p22, m_o);
        std::vector<double> q0row(static_cast<size_t>(m_o));
        for (int j = 0; j < m_o; ++j) {
            size_t i = static_cast<size_t>(j);
            double curv = (y + 1.0) * hxx[i] - y * bxx[i];
            double slope = (y + 1.0) * hx[i] - y * bx[i];
            double gap = h_row[i] - b_row[i];
            q0row[i] = curv * p2r[i] + 2.0 * slope * p12r[i] + 2.0 * gap * p22r[i];
        }
        std::vector<cdouble> q0c = analyze_row(q0row, t2);
        for (int k = 0; k <= t2; ++k)
            row[static_cast<size_t>(k)] += q0c[static_cast<size_t>(k)];
        return row;
    };

    ModalRhs w1{t2, w1_rows};
    BoundaryPair g1(t2);
    for (int k = -kk; k <= kk; ++k) {
        double k2v = static_cast<double>(k) * k;
        g1.top(k) = p.eta * k2v * h1.coeff(k);
        g1.bot(k) = -p.eta * k2v * b1.coeff(k);
    }
    StripGrid trace_grid{m_o, 2};  // only the boundary derivatives are needed
    GeneralSolution p1 = solve_poisson_general(w1, g1, trace_grid, opts.quad);

    // boundary quadratic terms at the two traces
    std::vector<cdouble> p1top_modes(static_cast<size_t>(kk) + 1, cdouble{}),
        p1bot_modes(static_cast<size_t>(kk) + 1, cdouble{});
    std::vector<cdouble> p2top(static_cast<size_t>(kk) + 1), p2bot(static_cast<size_t>(kk) + 1);
    p2top[0] = pm.poly_d2(0.0);
    p2bot[0] = pm.poly_d2(-1.0);
    for (int k = 1; k <= kk; ++k) {
        p1top_modes[static_cast<size_t>(k)] = pm.mode_d1(k, 0.0);
        p1bot_modes[static_cast<size_t>(k)] = pm.mode_d1(k, -1.0);
        p2top[static_cast<size_t>(k)] = pm.mode_d2(k, 0.0);
        p2bot[static_cast<size_t>(k)] = pm.mode_d2(k, -1.0);
    }
    std::vector<double> p1top_row = synth_row(p1top_modes, m_o);
    std::vector<double> p1bot_row = synth_row(p1bot_modes, m_o);
    std::vector<double> p2top_row = synth_row(p2top, m_o);
    std::vector<double> p2bot_row = synth_row(p2bot, m_o);

    double s0d2_top = -e * b1c, s0d2_bot = e * b1c;
    std::vector<double> quad_top(static_cast<size_t>(m_o)), quad_bot(static_cast<size_t>(m_o));
    for (int j = 0; j < m_o; ++j) {
        size_t i = static_cast<size_t>(j);
        double gap = h_row[i] - b_row[i];
        quad_top[i] = hx[i] * p1top_row[i] + gap * (p2top_row[i] - p.theta * s0d2_top);
        quad_bot[i] = bx[i] * p1bot_row[i] + gap * (p2bot_row[i] - p.theta * s0d2_bot);
    }
    std::vector<cdouble> quad_top_c = analyze_row(quad_top, t2);
    std::vector<cdouble> quad_bot_c = analyze_row(quad_bot, t2);

    SpectralField route_b_h(t2), route_b_b(t2);
    for (int k = 0; k <= t2; ++k) {
        cdouble s1_top{}, s1_bot{};
        if (k <= kk) {
            s1_top = e * b1c * (-3.0 * dh.coeff(k) + db.coeff(k));
            s1_bot = e * b1c * (-3.0 * db.coeff(k) + dh.coeff(k));
        }
        cdouble vh =
            -p1.du_top.coeff(k) + p.theta * s1_top + quad_top_c[static_cast<size_t>(k)];
        cdouble vb =
            -p1.du_bot.coeff(k) + p.theta * s1_bot + quad_bot_c[static_cast<size_t>(k)];
        if (k == 0) {
            route_b_h(0) = cdouble(vh.real(), 0.0);
            route_b_b(0) = cdouble(vb.real(), 0.0);
        } else {
            route_b_h(k) = vh;
            route_b_h(-k) = std::conj(vh);
            route_b_b(k) = vb;
            route_b_b(-k) = std::conj(vb);
        }
    }

    BoundaryDeviation dev;
    std::vector<double> ah = synthesize(route_a_h, m_o), oh = synthesize(route_b_h, m_o);
    std::vector<double> ab = synthesize(route_a_b, m_o), ob = synthesize(route_b_b, m_o);
    for (int j = 0; j < m_o; ++j) {
        size_t i = static_cast<size_t>(j);
        dev.h_dev = std::max(dev.h_dev, std::abs(ah[i] - oh[i]));
        dev.b_dev = std::max(dev.b_dev, std::abs(ab[i] - ob[i]));
    }
    return dev;
}

}  // namespace bilayer::oracle
