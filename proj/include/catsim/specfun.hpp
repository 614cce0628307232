// specfun.hpp - real special functions used by the analytic formulas.
//
// Bessel J_m of the first kind, associated Laguerre L_n^k, physicists'
// Hermite H_m, normalized Hermite functions, and log-factorials. All
// functions are pure.

#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace catsim::specfun {

namespace detail {

constexpr int kLogFactorialTableSize = 256;

inline const std::array<double, kLogFactorialTableSize>& log_factorial_table() {
    static const std::array<double, kLogFactorialTableSize> table = [] {
        std::array<double, kLogFactorialTableSize> t{};
        // Accumulating log(k) loses ~1 ulp per term; lgamma is accurate to
        // a few ulp everywhere, so use it for every entry.
        for (int n = 0; n < kLogFactorialTableSize; ++n) {
            t[n] = (n < 2) ? 0.0 : std::lgamma(static_cast<double>(n) + 1.0);
        }
        return t;
    }();
    return table;
}

// Ascending series sum_k (-1)^k (x/2)^(2k+m) / (k! (k+m)!).
inline double bessel_j_series(int m, double x) {
    const double half = 0.5 * x;
    if (half == 0.0) return m == 0 ? 1.0 : 0.0;
    // Leading term computed in log space to stay finite for large m.
    double term = std::exp(m * std::log(std::abs(half)) - std::lgamma(m + 1.0));
    if (half < 0.0 && (m % 2 == 1)) term = -term;
    const double q = -half * half;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k + m));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

// Miller's downward recurrence normalized with J_0 + 2 sum J_2k = 1.
inline double bessel_j_miller(int m, double x) {
    const double ax = std::abs(x);
    const int start = 2 * ((std::max(m, static_cast<int>(ax)) + 15 +
                            static_cast<int>(std::sqrt(40.0 * std::max(m, static_cast<int>(ax))))) /
                           2);
    double jp = 0.0;   // J_{k+1}
    double jk = 1e-30; // J_k
    double result = 0.0;
    double norm = 0.0;
    for (int k = start; k > 0; --k) {
        const double jm = (2.0 * k / ax) * jk - jp;  // J_{k-1}
        jp = jk;
        jk = jm;
        if (std::abs(jk) > 1e250) {
            jk *= 1e-250;
            jp *= 1e-250;
            result *= 1e-250;
            norm *= 1e-250;
        }
        if (k - 1 == m) result = jk;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * jk;
    }
    norm += jk;  // J_0 term
    double value = result / norm;
    if (x < 0.0 && (m % 2 == 1)) value = -value;
    return value;
}

}  // namespace detail

/// Bessel function of the first kind J_m(x) for integer order m >= 0.
///
/// Power series for |x| <= 12, Miller downward recurrence beyond.
inline double bessel_j(int m, double x) {
    if (m < 0) throw std::invalid_argument("bessel_j: negative order");
    if (std::abs(x) <= 12.0) return detail::bessel_j_series(m, x);
    return detail::bessel_j_miller(m, x);
}

/// J_m(x) for any integer m, using J_{-m} = (-1)^m J_m.
inline double bessel_j_signed(int m, double x) {
    if (m >= 0) return bessel_j(m, x);
    const double v = bessel_j(-m, x);
    return (m % 2 == 0) ? v : -v;
}

/// Associated Laguerre polynomial L_n^k(x) by the three-term recurrence
/// (j+1) L_{j+1} = (2j+1+k-x) L_j - (j+k) L_{j-1}.
inline double laguerre_assoc(int n, int k, double x) {
    if (n < 0 || k < 0) throw std::invalid_argument("laguerre_assoc: negative index");
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = 1.0 + k - x;
    for (int j = 1; j < n; ++j) {
        const double next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Physicists' Hermite polynomial H_m(x).
inline double hermite(int m, double x) {
    if (m < 0) throw std::invalid_argument("hermite: negative order");
    double prev = 1.0;
    if (m == 0) return prev;
    double cur = 2.0 * x;
    for (int j = 1; j < m; ++j) {
        const double next = 2.0 * x * cur - 2.0 * j * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Normalized Hermite functions h_j(x) = H_j(x) e^{-x^2/2} / sqrt(sqrt(pi) 2^j j!)
/// for j = 0..m_max, via the normalized recurrence (no overflow for large j).
inline std::vector<double> hermite_functions(int m_max, double x) {
    if (m_max < 0) throw std::invalid_argument("hermite_functions: negative order");
    std::vector<double> h(static_cast<std::size_t>(m_max) + 1);
    h[0] = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
    if (m_max >= 1) h[1] = std::sqrt(2.0) * x * h[0];
    for (int j = 2; j <= m_max; ++j) {
        h[j] = std::sqrt(2.0 / j) * x * h[j - 1] - std::sqrt((j - 1.0) / j) * h[j - 2];
    }
    return h;
}

/// ln(n!).
inline double log_factorial(int n) {
    if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
    if (n < detail::kLogFactorialTableSize) return detail::log_factorial_table()[n];
    return std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace catsim::specfun
