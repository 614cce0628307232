// tomography.hpp - Wigner function and rotated-quadrature distributions of an
// oscillator state given in the Fock basis.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "catsim/fock.hpp"
#include "catsim/specfun.hpp"
#include "catsim/types.hpp"

namespace catsim::tomography {

struct GridSpec {
    double re_min = -3.5;
    double re_max = 3.5;
    double im_min = -3.5;
    double im_max = 3.5;
    int resolution = 141;  // points per axis

    double re_at(int i) const { return re_min + (re_max - re_min) * i / (resolution - 1); }
    double im_at(int j) const { return im_min + (im_max - im_min) * j / (resolution - 1); }
    double cell_area() const {
        return (re_max - re_min) / (resolution - 1) * (im_max - im_min) / (resolution - 1);
    }
};

struct WignerGrid {
    GridSpec spec;
    RMat values;  // values(j, i) = W(re_at(i) + i im_at(j))

    /// Riemann sum times cell area.
    double mass() const { return values.sum() * spec.cell_area(); }
};

inline CMat density_from(const fock::FockVector& psi) { return psi.amps * psi.amps.adjoint(); }

/// W(beta) = (2/pi) sum_l (-1)^l <l|D^dag(beta) rho D(beta)|l>.
///
/// The l-sum is done in closed form: D(beta) P D^dag(beta) = D(2 beta) P with
/// P the parity, so W = (2/pi) sum_{mn} rho_mn (-1)^m <n|D(2 beta)|m>. This is
/// the untruncated sum; no Fock levels beyond rho's own are needed.
inline double wigner_point(const CMat& rho, cplx beta) {
    const int n = static_cast<int>(rho.rows());
    const CMat d = fock::displacement_block(2.0 * beta, n, n);  // d(k, m) = <k|D(2 beta)|m>
    cplx w = 0.0;
    for (int m = 0; m < n; ++m) {
        const cplx col = rho.row(m).transpose().cwiseProduct(d.col(m)).sum();  // sum_n rho_mn <n|D|m>
        w += (m % 2 == 0) ? col : -col;
    }
    return 2.0 / kPi * w.real();
}

inline WignerGrid wigner(const CMat& rho, const GridSpec& spec = {}) {
    if (spec.resolution < 2) throw std::invalid_argument("wigner grid needs at least 2 points per axis");
    WignerGrid g{spec, RMat(spec.resolution, spec.resolution)};
    for (int j = 0; j < spec.resolution; ++j) {
        for (int i = 0; i < spec.resolution; ++i) {
            g.values(j, i) = wigner_point(rho, cplx{spec.re_at(i), spec.im_at(j)});
        }
    }
    return g;
}

inline WignerGrid wigner(const fock::FockVector& psi, const GridSpec& spec = {}) {
    return wigner(density_from(psi), spec);
}

/// sum max(-W, 0) times cell area.
inline double wigner_negativity_volume(const WignerGrid& grid) {
    return (-grid.values).cwiseMax(0.0).sum() * grid.spec.cell_area();
}

struct QuadratureDistribution {
    double theta = 0.0;
    std::vector<double> x;
    std::vector<double> p;

    /// Trapezoid rule over the X samples.
    double integral() const {
        double s = 0.0;
        for (std::size_t k = 1; k < x.size(); ++k) s += 0.5 * (p[k] + p[k - 1]) * (x[k] - x[k - 1]);
        return s;
    }
};

/// Uniform X grid [lo, hi] with the given spacing (both ends included).
inline std::vector<double> x_grid(double lo = -6.0, double hi = 6.0, double spacing = 0.01) {
    const long count = std::lround((hi - lo) / spacing) + 1;
    std::vector<double> xs(static_cast<std::size_t>(count));
    for (long k = 0; k < count; ++k) xs[static_cast<std::size_t>(k)] = lo + k * spacing;
    return xs;
}

/// P[X(theta)] = <X(theta)| rho |X(theta)>.
inline QuadratureDistribution quadrature_distribution(const CMat& rho, double theta, const std::vector<double>& xs) {
    const int n_d = static_cast<int>(rho.rows()) - 1;
    QuadratureDistribution out{theta, xs, std::vector<double>(xs.size())};
    for (std::size_t k = 0; k < xs.size(); ++k) {
        // <X|m> for all m; P = sum_{mn} <X|m> rho_mn <n|X>.
        const CVec ov = fock::quadrature_overlaps(n_d, xs[k], theta);
        out.p[k] = std::max(0.0, ov.conjugate().dot(rho * ov.conjugate()).real());
    }
    return out;
}

inline QuadratureDistribution quadrature_distribution(const fock::FockVector& psi, double theta,
                                                      const std::vector<double>& xs) {
    const int n_d = psi.truncation();
    QuadratureDistribution out{theta, xs, std::vector<double>(xs.size())};
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const CVec ov = fock::quadrature_overlaps(n_d, xs[k], theta);
        out.p[k] = std::norm(ov.cwiseProduct(psi.amps).sum());
    }
    return out;
}

/// Modulus of the Fourier component of P at wavenumber k, the interference
/// frequency 2 sqrt(2) |alpha| of a cat projected on the quadrature
/// perpendicular to its two components.
inline double fringe_amplitude(const QuadratureDistribution& dist, double wavenumber) {
    cplx s = 0.0;
    for (std::size_t k = 1; k < dist.x.size(); ++k) {
        const double dx = dist.x[k] - dist.x[k - 1];
        s += 0.5 * dx *
             (dist.p[k] * std::polar(1.0, wavenumber * dist.x[k]) +
              dist.p[k - 1] * std::polar(1.0, wavenumber * dist.x[k - 1]));
    }
    return std::abs(s);
}

}  // namespace catsim::tomography
