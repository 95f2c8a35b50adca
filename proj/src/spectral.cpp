#include "bilayer/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace bilayer {

namespace {

#ifndef NDEBUG
void debug_check_hermitian(const SpectralField& f) { f.require_hermitian(1e-10); }
#else
void debug_check_hermitian(const SpectralField&) {}
#endif

/// One cached pair of FFTW plans per grid size. Plans are created with
/// FFTW_UNALIGNED so they can run on plain std::vector storage via the
/// new-array execute interface (which is reentrant).
struct PlanEntry {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

PlanEntry& plans_for(int m) {
    static std::mutex mutex;
    static std::map<int, PlanEntry> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;

    std::vector<double> real(static_cast<size_t>(m));
    std::vector<cdouble> cplx(static_cast<size_t>(m / 2 + 1));
    PlanEntry entry;
    entry.r2c = fftw_plan_dft_r2c_1d(m, real.data(),
                                     reinterpret_cast<fftw_complex*>(cplx.data()),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    entry.c2r = fftw_plan_dft_c2r_1d(m, reinterpret_cast<fftw_complex*>(cplx.data()),
                                     real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    return cache.emplace(m, entry).first->second;
}

int product_grid(int trunc) {
    int need = 3 * trunc + 3;
    int m = 8;
    while (m < need) m *= 2;
    return m;
}

}  // namespace

SpectralField::SpectralField(int trunc) : trunc_(trunc) {
    if (trunc < 0) throw config_error("SpectralField: truncation must be >= 0");
    c_.assign(static_cast<size_t>(2 * trunc + 1), cdouble{0.0, 0.0});
}

void SpectralField::set_mode(int k, cdouble value) {
    if (k == 0) {
        if (value.imag() != 0.0)
            throw invariant_error("SpectralField: mode 0 must be real");
        c_[index(0)] = value;
        return;
    }
    c_[index(k)] = value;
    c_[index(-k)] = std::conj(value);
}

bool SpectralField::is_hermitian(double rel_tol) const {
    if (!all_finite()) return false;
    double scale = std::max(max_abs(), 1e-300);
    if (std::abs(coeff(0).imag()) > rel_tol * scale) return false;
    for (int k = 1; k <= trunc_; ++k)
        if (std::abs(coeff(-k) - std::conj(coeff(k))) > rel_tol * scale) return false;
    return true;
}

void SpectralField::require_hermitian(double rel_tol) const {
    if (!all_finite())
        throw invariant_error("SpectralField: non-finite coefficient");
    if (!is_hermitian(rel_tol))
        throw invariant_error("SpectralField: Hermitian symmetry broken");
}

bool SpectralField::all_finite() const {
    for (const auto& z : c_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

double SpectralField::max_abs() const {
    double m = 0.0;
    for (const auto& z : c_) m = std::max(m, std::abs(z));
    return m;
}

std::pair<double, double> theta_symbols(int k) {
    if (k == 0) return {1.0, 1.0};
    double s = std::abs(static_cast<double>(k));
    // coth(s) = 1 + 2/(e^{2s} - 1); expm1 overflows to inf for large s and the
    // correction term cleanly underflows to 0.
    double theta1 = s * (1.0 + 2.0 / std::expm1(2.0 * s));
    double theta2 = 2.0 * s * std::exp(-s) / (1.0 - std::exp(-2.0 * s));
    return {theta1, theta2};
}

Multiplier lambda_symbol() {
    return [](int k) { return cdouble(std::abs(static_cast<double>(k)), 0.0); };
}

Multiplier lambda_sq_symbol() {
    return [](int k) { return cdouble(static_cast<double>(k) * k, 0.0); };
}

Multiplier theta1_symbol() {
    return [](int k) { return cdouble(theta_symbols(k).first, 0.0); };
}

Multiplier theta2_symbol() {
    return [](int k) { return cdouble(theta_symbols(k).second, 0.0); };
}

Multiplier derivative_symbol() {
    return [](int k) { return cdouble(0.0, static_cast<double>(k)); };
}

SpectralField analyze(std::span<const double> samples, int trunc) {
    int m = static_cast<int>(samples.size());
    if (m < 2 * trunc + 2)
        throw config_error("analyze: need at least 2K+2 samples for truncation K (got " +
                           std::to_string(m) + " for K=" + std::to_string(trunc) + ")");
    for (double v : samples)
        if (!std::isfinite(v)) throw invariant_error("analyze: non-finite sample");

    std::vector<double> in(samples.begin(), samples.end());
    std::vector<cdouble> out(static_cast<size_t>(m / 2 + 1));
    fftw_execute_dft_r2c(plans_for(m).r2c, in.data(),
                         reinterpret_cast<fftw_complex*>(out.data()));

    // Grid starts at x = -pi, so mode k picks up the phase e^{ik pi} = (-1)^k.
    SpectralField field(trunc);
    field(0) = cdouble(out[0].real() / m, 0.0);
    for (int k = 1; k <= trunc; ++k) {
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        cdouble c = sign * out[static_cast<size_t>(k)] / static_cast<double>(m);
        field(k) = c;
        field(-k) = std::conj(c);
    }
    return field;
}

std::vector<double> synthesize(const SpectralField& field, int m) {
    if (m < 2 * field.trunc() + 2)
        throw config_error("synthesize: grid has fewer than 2K+2 points");
    field.require_hermitian();

    std::vector<cdouble> in(static_cast<size_t>(m / 2 + 1), cdouble{0.0, 0.0});
    in[0] = cdouble(field.coeff(0).real(), 0.0);
    for (int k = 1; k <= field.trunc(); ++k) {
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        in[static_cast<size_t>(k)] = sign * field.coeff(k);
    }
    std::vector<double> out(static_cast<size_t>(m));
    fftw_execute_dft_c2r(plans_for(m).c2r,
                         reinterpret_cast<fftw_complex*>(in.data()), out.data());
    return out;
}

SpectralField apply_multiplier(const SpectralField& field, const Multiplier& symbol) {
    SpectralField out(field.trunc());
    for (int k = -field.trunc(); k <= field.trunc(); ++k)
        out(k) = symbol(k) * field.coeff(k);
    debug_check_hermitian(out);
    return out;
}

SpectralField multiply_fields(const SpectralField& f, const SpectralField& g) {
    if (f.trunc() != g.trunc())
        throw config_error("multiply_fields: mismatched truncations");
    int m = product_grid(f.trunc());
    std::vector<double> a = synthesize(f, m);
    std::vector<double> b = synthesize(g, m);
    for (int j = 0; j < m; ++j) a[static_cast<size_t>(j)] *= b[static_cast<size_t>(j)];
    SpectralField out = analyze(a, f.trunc());
    debug_check_hermitian(out);
    return out;
}

double wiener_norm(const SpectralField& field, int j) {
    if (j < 0) throw config_error("wiener_norm: order must be >= 0");
    double sum = 0.0;
    for (int k = -field.trunc(); k <= field.trunc(); ++k) {
        double w = (j == 0) ? 1.0 : std::pow(std::abs(static_cast<double>(k)), j);
        sum += w * std::abs(field.coeff(k));
    }
    return sum;
}

}  // namespace bilayer
