// fock.hpp - truncated Fock-space states and matrix elements.

#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "catsim/specfun.hpp"
#include "catsim/types.hpp"

namespace catsim::fock {

/// Oscillator state vector on Fock levels 0..n_d.
struct FockVector {
    CVec amps;

    int truncation() const { return static_cast<int>(amps.size()) - 1; }
    double norm_squared() const { return amps.squaredNorm(); }
    /// Population of the highest retained level.
    double tail_mass() const { return std::norm(amps[amps.size() - 1]); }
};

enum class Parity { even, odd };

struct CatTarget {
    cplx alpha{0.0, 0.0};
    Parity parity = Parity::even;

    /// N = [2(1 +/- e^{-2|alpha|^2})]^{-1/2}; infinite for the odd cat at alpha = 0.
    double normalization() const {
        const double x = -2.0 * std::norm(alpha);
        const double s = (parity == Parity::even) ? 2.0 + std::expm1(x) : -std::expm1(x);
        return 1.0 / std::sqrt(2.0 * s);
    }
    bool degenerate() const { return parity == Parity::odd && std::norm(alpha) == 0.0; }
};

inline void check_truncation(int n_d) {
    if (n_d < 0) throw std::invalid_argument("Fock truncation must be >= 0");
}

/// Coherent-state amplitudes e^{-|a|^2/2} a^m / sqrt(m!) for m = 0..n_d.
inline FockVector coherent_vector(cplx alpha, int n_d) {
    check_truncation(n_d);
    FockVector v{CVec::Zero(n_d + 1)};
    const double r = std::abs(alpha);
    if (r == 0.0) {
        v.amps[0] = 1.0;
        return v;
    }
    const double log_r = std::log(r);
    const cplx phase = alpha / r;
    cplx phase_m{1.0, 0.0};
    for (int m = 0; m <= n_d; ++m) {
        const double log_mag = -0.5 * r * r + m * log_r - 0.5 * specfun::log_factorial(m);
        v.amps[m] = std::exp(log_mag) * phase_m;
        phase_m *= phase;
    }
    return v;
}

/// Even or odd cat N(|a> +/- |-a>) on levels 0..n_d.
inline FockVector cat_vector(const CatTarget& target, int n_d) {
    check_truncation(n_d);
    if (target.degenerate()) {
        throw std::invalid_argument("cat_vector: odd cat with alpha = 0 is undefined");
    }
    FockVector coh = coherent_vector(target.alpha, n_d);
    const double weight = 2.0 * target.normalization();
    const int keep = (target.parity == Parity::even) ? 0 : 1;
    for (int m = 0; m <= n_d; ++m) {
        coh.amps[m] = (m % 2 == keep) ? weight * coh.amps[m] : cplx{0.0, 0.0};
    }
    return coh;
}

/// <m| D(beta) |n> with D(beta) = exp(beta a^dag - beta^* a).
inline cplx displacement_element(int m, int n, cplx beta) {
    if (m < 0 || n < 0) throw std::invalid_argument("displacement_element: negative index");
    const double r2 = std::norm(beta);
    if (r2 == 0.0) return (m == n) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
    const int lo = std::min(m, n);
    const int k = std::abs(m - n);
    const double r = std::sqrt(r2);
    const double log_mag =
        0.5 * (specfun::log_factorial(lo) - specfun::log_factorial(lo + k)) - 0.5 * r2 + k * std::log(r);
    // n > m carries (-beta^*)^{n-m}; m > n carries beta^{m-n}.
    const cplx unit = (m >= n) ? beta / r : -std::conj(beta) / r;
    return std::exp(log_mag) * specfun::laguerre_assoc(lo, k, r2) * std::pow(unit, k);
}

/// Matrix of <m|D(beta)|l> for rows 0..rows-1 and columns 0..cols-1.
inline CMat displacement_block(cplx beta, int rows, int cols) {
    CMat d(rows, cols);
    const double r2 = std::norm(beta);
    if (r2 == 0.0) {
        d.setIdentity();
        return d;
    }
    const double r = std::sqrt(r2);
    const double log_r = std::log(r);
    const cplx up = beta / r;
    const cplx down = -std::conj(beta) / r;
    const int kmax = std::max(rows, cols);
    std::vector<cplx> up_pow(kmax), down_pow(kmax);
    up_pow[0] = down_pow[0] = 1.0;
    for (int k = 1; k < kmax; ++k) {
        up_pow[k] = up_pow[k - 1] * up;
        down_pow[k] = down_pow[k - 1] * down;
    }
    for (int n = 0; n < cols; ++n) {
        for (int m = 0; m < rows; ++m) {
            const int lo = std::min(m, n);
            const int k = std::abs(m - n);
            const double log_mag = 0.5 * (specfun::log_factorial(lo) - specfun::log_factorial(lo + k)) -
                                   0.5 * r2 + k * log_r;
            const cplx ph = (m >= n) ? up_pow[k] : down_pow[k];
            d(m, n) = std::exp(log_mag) * specfun::laguerre_assoc(lo, k, r2) * ph;
        }
    }
    return d;
}

/// Square displacement matrix on levels 0..n_d.
inline CMat displacement_matrix(cplx beta, int n_d) {
    check_truncation(n_d);
    return displacement_block(beta, n_d + 1, n_d + 1);
}

/// <X(theta)|m> for the rotated quadrature (a e^{-i theta} + a^dag e^{i theta})/sqrt(2).
inline cplx quadrature_overlap(int m, double x, double theta) {
    if (m < 0) throw std::invalid_argument("quadrature_overlap: negative index");
    const double h = specfun::hermite_functions(m, x)[static_cast<std::size_t>(m)];
    return h * std::polar(1.0, -theta * m);
}

/// <X(theta)|m> for m = 0..n_d.
inline CVec quadrature_overlaps(int n_d, double x, double theta) {
    check_truncation(n_d);
    const auto h = specfun::hermite_functions(n_d, x);
    CVec out(n_d + 1);
    for (int m = 0; m <= n_d; ++m) out[m] = h[static_cast<std::size_t>(m)] * std::polar(1.0, -theta * m);
    return out;
}

/// Suggested truncation for coherent amplitudes up to |alpha|^2 with a thermal
/// oscillator bath of occupation nbar_r.
inline int recommended_truncation(double alpha_max_sq, double nbar_r) {
    return static_cast<int>(std::ceil(alpha_max_sq + 6.0 * std::sqrt(alpha_max_sq) + 4.0 * (nbar_r + 1.0)));
}

}  // namespace catsim::fock
