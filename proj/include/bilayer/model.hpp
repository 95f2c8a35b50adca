#pragma once

#include "bilayer/spectral.hpp"

namespace bilayer {

/// Dimensionless parameter group of the asymptotic two-interface model plus the
/// spectral truncation K and physical grid size M.
struct ModelParams {
    double epsilon = 0.1;  ///< aspect ratio width/length, > 0
    double eta = 1.0;      ///< surface tension group, >= 0
    double theta = 1.0;    ///< chemotaxis group
    double rho = 1.0;      ///< proliferation group
    double tau = 1.0;      ///< inhibitor weight
    double big_n = 1.0;    ///< chemical decay rate N, >= 0
    double c_b = 0.5;      ///< inhibitor data amplitude
    double c_s = 1.0;      ///< nutrient data amplitude
    int trunc = 128;       ///< spectral truncation K
    int grid = 512;        ///< physical grid size M, >= 3K+3

    void validate() const;  // throws config_error
};

/// beta1(t) = c_S - N c_B t
double beta1(double t, const ModelParams& p);
/// beta2(t) = beta1(t) - tau c_B
double beta2(double t, const ModelParams& p);
/// Spatially constant forcing K^(0)(t) = (rho/12) beta2(t) e^{-Nt}; enters the
/// U mean with + sign and the V mean with - sign.
double forcing_k0(double t, const ModelParams& p);

/// Stiff coupling of mode k: L(k) = -eta|k|^3 [[coth|k|, csch|k>], [csch, coth]],
/// zero at k = 0. Eigenvectors (1,1)/sqrt2 and (1,-1)/sqrt2 with eigenvalues
/// lambda_plus = -eta|k|^3 coth(|k|/2), lambda_minus = -eta|k|^3 tanh(|k|/2).
struct LinearBlock {
    double diag = 0.0;      // -eta|k|^3 coth|k|
    double offdiag = 0.0;   // -eta|k|^3 / sinh|k|
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
};
LinearBlock linear_block(int k, const ModelParams& p);

enum class ForcingMode { simplified, full };

/// Resolutions of the two suspected misprints in the paper-facing J^(1)
/// coefficient display; false keeps each formula exactly as printed.
struct ForcingOptions {
    bool j1_cosh_variant = false;   // h-data bracket: 4(coth-1)... -> 4(cosh-1)...
    bool j1_paren_variant = false;  // b-data bracket: (4-cosh)...  -> 4(1-cosh)...
};

/// Frozen initial spectra and precomputed per-mode multipliers for the
/// first-order forcings K^(1), J^(1). Immutable after construction.
class ForcingCache {
public:
    ForcingCache(const SpectralField& u0, const SpectralField& v0,
                 const ModelParams& p, ForcingMode mode, ForcingOptions opts = {});

    ForcingMode mode() const { return mode_; }
    const ForcingOptions& options() const { return opts_; }
    const SpectralField& u0() const { return u0_; }
    const SpectralField& v0() const { return v0_; }
    /// (cosh|k|-1)/(|k| sinh|k|), with the limit 1/2 at k = 0.
    double profile_sum(int k) const { return profile_[static_cast<size_t>(std::abs(k))]; }

    // Per-mode data-bracket coefficients (theta part, rho part); 0 at k = 0.
    double k1_u_theta(int k) const { return at(k1_u_theta_, k); }
    double k1_u_rho(int k) const { return at(k1_u_rho_, k); }
    double k1_v_theta(int k) const { return at(k1_v_theta_, k); }
    double k1_v_rho(int k) const { return at(k1_v_rho_, k); }
    double j1_u_theta(int k) const { return at(j1_u_theta_, k); }
    double j1_u_rho(int k) const { return at(j1_u_rho_, k); }
    double j1_v_theta(int k) const { return at(j1_v_theta_, k); }
    double j1_v_rho(int k) const { return at(j1_v_rho_, k); }

private:
    double at(const std::vector<double>& v, int k) const {
        return v[static_cast<size_t>(std::abs(k))];
    }

    ForcingMode mode_;
    ForcingOptions opts_;
    SpectralField u0_, v0_;
    std::vector<double> profile_;
    std::vector<double> k1_u_theta_, k1_u_rho_, k1_v_theta_, k1_v_rho_;
    std::vector<double> j1_u_theta_, j1_u_rho_, j1_v_theta_, j1_v_rho_;
};

/// First-order forcing K^(1)(t) as a spectral field (zero in simplified mode).
SpectralField forcing_k1(double t, const ForcingCache& cache, const ModelParams& p);
/// First-order forcing J^(1)(t) as a spectral field (zero in simplified mode).
SpectralField forcing_j1(double t, const ForcingCache& cache, const ModelParams& p);

/// Pair of interface perturbations and the current time.
struct SimState {
    SpectralField u;
    SpectralField v;
    double t = 0.0;
};

struct RhsResult {
    SpectralField du;
    SpectralField dv;
};

/// Everything on the right-hand side of the coupled system except the stiff
/// O(1) linear term (which the integrator applies exactly): the eps-prefixed
/// quadratic terms, the eps-order linear chemistry term, and the forcings.
RhsResult rhs_order_eps(const SimState& state, const ForcingCache& cache,
                        const ModelParams& p);

}  // namespace bilayer
