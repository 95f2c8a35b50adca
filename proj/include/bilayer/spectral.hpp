#pragma once

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bilayer {

using cdouble = std::complex<double>;

/// Bad user-supplied configuration (grid too small for truncation, dt <= 0, ...).
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical invariant was violated (broken Hermitian symmetry, non-finite data).
class invariant_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fourier coefficients of a real 2*pi-periodic function, truncated at |k| <= trunc().
///
/// Convention: f(x) = sum_{|k|<=K} coeff(k) e^{ikx} with
/// coeff(k) = (1/2pi) integral f(x) e^{-ikx} dx, so coeff(-k) = conj(coeff(k))
/// and coeff(0) is real for real-valued f.
class SpectralField {
public:
    explicit SpectralField(int trunc);

    int trunc() const { return trunc_; }

    cdouble coeff(int k) const { return c_[index(k)]; }
    /// Coefficient lookup that treats out-of-range modes as zero (convolutions).
    cdouble coeff_or_zero(int k) const {
        return (k < -trunc_ || k > trunc_) ? cdouble{0.0, 0.0} : c_[index(k)];
    }
    cdouble& operator()(int k) { return c_[index(k)]; }

    /// Sets mode k and its conjugate mirror at -k. For k = 0 the imaginary part
    /// must vanish.
    void set_mode(int k, cdouble value);

    bool is_hermitian(double rel_tol = 1e-12) const;
    /// Throws invariant_error if Hermitian symmetry is broken or data is non-finite.
    void require_hermitian(double rel_tol = 1e-12) const;
    bool all_finite() const;

    double max_abs() const;

private:
    int index(int k) const {
        if (k < -trunc_ || k > trunc_)
            throw std::out_of_range("SpectralField: mode " + std::to_string(k) +
                                    " outside truncation " + std::to_string(trunc_));
        return k + trunc_;
    }

    int trunc_;
    std::vector<cdouble> c_;
};

/// A Fourier multiplier symbol k -> complex scalar, defined for every retained mode
/// (including an explicit k = 0 value).
using Multiplier = std::function<cdouble(int)>;

/// theta1(k) = |k| coth|k| and theta2(k) = |k|/sinh|k|, with the continuous limits
/// (1, 1) at k = 0. theta2 is evaluated as 2|k|e^{-|k|}/(1 - e^{-2|k|}) so it
/// underflows gracefully instead of overflowing sinh.
std::pair<double, double> theta_symbols(int k);

Multiplier lambda_symbol();       // |k|
Multiplier lambda_sq_symbol();    // k^2
Multiplier theta1_symbol();       // |k| coth|k|
Multiplier theta2_symbol();       // |k| / sinh|k|
Multiplier derivative_symbol();   // ik

/// Samples -> coefficients on the uniform grid x_j = -pi + 2*pi*j/m.
/// Requires m >= 2*trunc + 2; exact on data band-limited to |k| <= trunc.
SpectralField analyze(std::span<const double> samples, int trunc);

/// Coefficients -> m samples on x_j = -pi + 2*pi*j/m. Validates Hermitian symmetry.
std::vector<double> synthesize(const SpectralField& field, int m);

/// coeff_out(k) = symbol(k) * coeff_in(k).
SpectralField apply_multiplier(const SpectralField& field, const Multiplier& symbol);

/// Dealiased pointwise product (2/3 rule): synthesize on a grid with at least
/// 3*trunc + 3 points, multiply, analyze back at the common truncation.
SpectralField multiply_fields(const SpectralField& f, const SpectralField& g);

/// Wiener seminorm sum_k |k|^j |coeff(k)|; for j = 0 the k = 0 term contributes.
double wiener_norm(const SpectralField& field, int j);

}  // namespace bilayer
