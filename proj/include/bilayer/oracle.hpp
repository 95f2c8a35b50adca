#pragma once

#include "bilayer/model.hpp"

#include <cmath>
#include <functional>

namespace bilayer::oracle {

/// Tensor grid on the reference strip S^1 x [-1, 0]: m uniform periodic x1
/// points starting at -pi, p x2 points including both endpoints.
struct StripGrid {
    int m = 64;
    int p = 129;

    double x1(int j) const { return -M_PI + 2.0 * M_PI * j / m; }
    double x2(int j) const { return -1.0 + static_cast<double>(j) / (p - 1); }
};

/// Real samples on a StripGrid, row-major in x2 (slowest) then x1.
struct StripField {
    StripGrid grid;
    std::vector<double> values;

    explicit StripField(const StripGrid& g)
        : grid(g), values(static_cast<size_t>(g.m) * g.p, 0.0) {}
    double& at(int j1, int j2) { return values[static_cast<size_t>(j2) * grid.m + j1]; }
    double at(int j1, int j2) const { return values[static_cast<size_t>(j2) * grid.m + j1]; }
    double max_abs() const;
};

/// Dirichlet traces at x2 = 0 (top) and x2 = -1 (bottom).
struct BoundaryPair {
    SpectralField top;
    SpectralField bot;

    explicit BoundaryPair(int trunc) : top(trunc), bot(trunc) {}
    BoundaryPair(SpectralField t, SpectralField b);
};

/// Composite Gauss-Legendre rule: 8 nodes per panel.
struct QuadratureRule {
    int panels = 16;
};

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureRule& quad = {});
cdouble integrate_c(const std::function<cdouble(double)>& f, double a, double b,
                    const QuadratureRule& quad = {});

/// Right-hand side of a strip Poisson problem given by per-mode vertical
/// profiles: call(y2) returns the Fourier coefficients what(k, y2), k = 0..trunc
/// (negative modes by conjugation).
struct ModalRhs {
    int trunc = 0;
    std::function<std::vector<cdouble>(double y2)> rows;
};

/// Builds a ModalRhs by sampling w(x1, y2) on m uniform x1 points and analyzing;
/// exact when w is band-limited to |k| <= trunc.
ModalRhs modal_rhs_from_function(const std::function<double(double, double)>& w, int m,
                                 int trunc);

/// Lemma A.1: Delta u = w(x2), u(x1,0) = g1, u(x1,-1) = g2.
StripField solve_poisson_stratified(const std::function<double(double)>& w,
                                    const BoundaryPair& g, const StripGrid& grid,
                                    const QuadratureRule& quad = {});

/// Lemma A.2: Delta u = w(x1,x2) plus the closed-form boundary derivatives.
struct GeneralSolution {
    StripField u;
    SpectralField du_top;  ///< u,2(x1, 0)
    SpectralField du_bot;  ///< u,2(x1, -1)
};
GeneralSolution solve_poisson_general(const ModalRhs& w, const BoundaryPair& g,
                                      const StripGrid& grid,
                                      const QuadratureRule& quad = {});

/// max |Delta u - w| on interior nodes (spectral in x1, 4th-order central
/// differences in x2) and max trace mismatch on the boundary rows.
struct ResidualReport {
    double interior = 0.0;
    double boundary = 0.0;
};
ResidualReport residual_check(const StripField& u, const StripField& w,
                              const BoundaryPair& g);

/// Order-0 chemical profiles B0, S0 (x2-only) and the S0 boundary derivatives.
struct ZerothProfiles {
    std::function<double(double)> b0;
    std::function<double(double)> s0;
    double s0_d2_top = 0.0;
    double s0_d2_bot = 0.0;
};
ZerothProfiles zeroth_profiles(double t, const ModelParams& p);

/// Max residual of the order-0 chemical ODEs along the exact profiles,
/// via 4th-order time differences.
double zeroth_profiles_ode_residual(double t, const ModelParams& p);

/// Closed-form order-0 pressure on the strip and its normal-derivative traces.
struct PressureP0 {
    StripField field;
    SpectralField d2_top;
    SpectralField d2_bot;
};
PressureP0 pressure_p0(const SpectralField& h0, const SpectralField& b0, double t,
                       const ModelParams& p, const StripGrid& grid);

/// Closed-form order-1 chemicals B1, S1 (from snapshots at times 0 and t) and
/// the S1,2 traces.
struct FirstOrderChem {
    StripField b1;
    StripField s1;
    SpectralField s1_d2_top;
    SpectralField s1_d2_bot;
};
FirstOrderChem first_order_chem(const SpectralField& h0_t0, const SpectralField& b0_t0,
                                const SpectralField& h0_tt, const SpectralField& b0_tt,
                                double t, const ModelParams& p, const StripGrid& grid);

/// Q0 and Z0 source terms assembled from the order-0 fields.
struct SourceQ0Z0 {
    StripField q0;
    StripField z0;
};
SourceQ0Z0 q0_z0(const SpectralField& h0, const SpectralField& b0, double t,
                 const ModelParams& p, const StripGrid& grid);

/// Exact flow of the order-0 (linear) system over [0, t]: per-mode exponential
/// decay in the diagonal variables plus the +-K0 drift of the means when
/// with_k0_mean is set.
std::pair<SpectralField, SpectralField> linear_flow(const SpectralField& h0,
                                                    const SpectralField& b0, double t,
                                                    const ModelParams& p,
                                                    bool with_k0_mean);
/// Closed form of int_0^t K0(s) ds.
double k0_integral(double t, const ModelParams& p);

/// Compares the spectral order-0 boundary formulas against the Poisson oracle.
struct BoundaryDeviation {
    double h_dev = 0.0;
    double b_dev = 0.0;
    double max() const { return h_dev > b_dev ? h_dev : b_dev; }
};
BoundaryDeviation verify_order0_boundary(const SpectralField& h0, const SpectralField& b0,
                                         double t, const ModelParams& p,
                                         const StripGrid& grid,
                                         const QuadratureRule& quad = {});

struct Order1Options {
    ForcingOptions forcing;  ///< bracket variants used by the spectral route
    QuadratureRule quad;
};

/// Compares the paper's order-1 spectral formulas (all convolution sums,
/// single sums, data brackets and the t-proportional profile term) against the
/// independent assembly through the general Poisson solver. The comparison
/// covers the full quadratic bandwidth 2K on an alias-free x1 grid; the x2
/// resolution is the quadrature rule.
BoundaryDeviation verify_order1_boundary(const SpectralField& h0_t0,
                                         const SpectralField& b0_t0,
                                         const SpectralField& h0_tt,
                                         const SpectralField& b0_tt,
                                         const SpectralField& h1, const SpectralField& b1,
                                         double t, const ModelParams& p,
                                         const Order1Options& opts = {});

}  // namespace bilayer::oracle
