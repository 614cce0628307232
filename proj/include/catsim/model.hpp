// model.hpp - physical parameters, effective RWA parameters, Hamiltonians.
//
// Internal units: every frequency and rate in units of the bare coupling g0,
// time in units of 1/g0.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "catsim/operators.hpp"
#include "catsim/specfun.hpp"
#include "catsim/types.hpp"

namespace catsim::model {

enum class Coupling {
    sigma_z_displacement,  // g0 sigma_z (a + a^dag), sigma_x drive
    sigma_x_displacement,  // g0 sigma_x (a + a^dag), sigma_z drive
    jaynes_cummings,       // g0 (sigma_+ a + sigma_- a^dag), sigma_x drive
};

inline std::string to_string(Coupling c) {
    switch (c) {
        case Coupling::sigma_z_displacement: return "sigma_z_displacement";
        case Coupling::sigma_x_displacement: return "sigma_x_displacement";
        case Coupling::jaynes_cummings: return "jaynes_cummings";
    }
    return "unknown";
}

inline Coupling coupling_from_string(const std::string& s) {
    if (s == "sigma_z_displacement") return Coupling::sigma_z_displacement;
    if (s == "sigma_x_displacement") return Coupling::sigma_x_displacement;
    if (s == "jaynes_cummings") return Coupling::jaynes_cummings;
    throw std::invalid_argument("unknown coupling variant '" + s + "'");
}

struct SystemParams {
    double omega_q = 0.0;
    double omega_r = 200.0;
    double omega_0 = 100.0;
    double xi = 0.0;
    double g_0 = 1.0;
    double gamma_q = 0.0;
    double kappa_r = 0.0;
    double nbar_q = 0.0;
    double nbar_r = 0.0;
    Coupling coupling = Coupling::sigma_z_displacement;

    void validate() const {
        auto need = [](bool ok, const char* what) {
            if (!ok) throw std::invalid_argument(what);
        };
        need(std::isfinite(omega_q), "omega_q must be finite");
        need(omega_r > 0.0, "omega_r must be > 0");
        need(omega_0 > 0.0, "omega_0 must be > 0");
        need(g_0 >= 0.0, "g_0 must be >= 0");
        need(xi >= 0.0, "xi must be >= 0");
        need(gamma_q >= 0.0 && kappa_r >= 0.0, "damping rates must be >= 0");
        need(nbar_q >= 0.0 && nbar_r >= 0.0, "thermal occupations must be >= 0");
    }
};

struct EffectiveParams {
    int n_0 = 0;
    double delta = 0.0;
    double g = 0.0;
    double alpha_max = 0.0;  // 2|g/delta|, +inf when delta = 0 and g != 0
    double t_peak = 0.0;     // pi/|delta|, +inf when delta = 0

    bool delta_negative() const { return delta < 0.0; }
    bool resonant() const { return delta == 0.0; }
};

namespace detail {

inline EffectiveParams finish(int n_0, double delta, double g) {
    EffectiveParams e;
    e.n_0 = n_0;
    e.delta = delta;
    e.g = g;
    const double inf = std::numeric_limits<double>::infinity();
    if (delta == 0.0) {
        e.alpha_max = (g == 0.0) ? 0.0 : inf;
        e.t_peak = inf;
    } else {
        e.alpha_max = std::abs(2.0 * g / delta);
        e.t_peak = kPi / std::abs(delta);
    }
    return e;
}

}  // namespace detail

/// n0 = Round[omega_r / (2 omega_0)] (half away from zero),
/// delta = omega_r - 2 n0 omega_0, g = g0 J_{2 n0}(2 xi).
inline EffectiveParams effective_params(const SystemParams& p) {
    if (p.coupling == Coupling::jaynes_cummings) {
        throw std::invalid_argument("effective_params: use jc_effective_params for the Jaynes-Cummings variant");
    }
    if (!(p.omega_0 > 0.0)) throw std::invalid_argument("effective_params: omega_0 must be > 0");
    const int n_0 = static_cast<int>(std::round(p.omega_r / (2.0 * p.omega_0)));
    const double delta = p.omega_r - 2.0 * n_0 * p.omega_0;
    const double g = p.g_0 * specfun::bessel_j(2 * n_0, 2.0 * p.xi);
    return detail::finish(n_0, delta, g);
}

/// n0 >= 1 with (2 n0 - 1) omega_0 nearest omega_r,
/// delta' = omega_r - (2 n0 - 1) omega_0, g' = g0 J_{2 n0 - 1}(2 xi) / 2.
inline EffectiveParams jc_effective_params(const SystemParams& p) {
    if (p.coupling != Coupling::jaynes_cummings) {
        throw std::invalid_argument("jc_effective_params: requires the Jaynes-Cummings variant");
    }
    if (!(p.omega_0 > 0.0)) throw std::invalid_argument("jc_effective_params: omega_0 must be > 0");
    const int n_0 = std::max(1, static_cast<int>(std::round(0.5 * (p.omega_r / p.omega_0 + 1.0))));
    const int harmonic = 2 * n_0 - 1;
    const double delta = p.omega_r - harmonic * p.omega_0;
    const double g = 0.5 * p.g_0 * specfun::bessel_j(harmonic, 2.0 * p.xi);
    return detail::finish(n_0, delta, g);
}

inline EffectiveParams resolve_effective(const SystemParams& p) {
    return p.coupling == Coupling::jaynes_cummings ? jc_effective_params(p) : effective_params(p);
}

/// Drive frequency that puts the detuning at `delta_over_g` times the
/// effective coupling for harmonic index n0.
inline double drive_frequency_for_detuning(double omega_r, double g_0, double xi, int n_0,
                                           double delta_over_g, Coupling coupling) {
    if (n_0 < 1) throw std::invalid_argument("harmonic index n0 must be >= 1");
    double g;
    int harmonic;
    if (coupling == Coupling::jaynes_cummings) {
        harmonic = 2 * n_0 - 1;
        g = 0.5 * g_0 * specfun::bessel_j(harmonic, 2.0 * xi);
    } else {
        harmonic = 2 * n_0;
        g = g_0 * specfun::bessel_j(harmonic, 2.0 * xi);
    }
    return (omega_r - delta_over_g * g) / harmonic;
}

struct RwaValidity {
    double g0_over_omega_r = 0.0;
    double g0_over_omega_0 = 0.0;
    double delta_over_omega_0 = 0.0;
    double omega_q_over_2omega_0 = 0.0;
    double threshold = 0.05;
    bool pass = true;

    double max_ratio() const {
        return std::max({g0_over_omega_r, g0_over_omega_0, delta_over_omega_0, omega_q_over_2omega_0});
    }
};

inline RwaValidity rwa_validity(const SystemParams& p, const EffectiveParams& eff, double threshold = 0.05) {
    RwaValidity r;
    r.g0_over_omega_r = p.g_0 / p.omega_r;
    r.g0_over_omega_0 = p.g_0 / p.omega_0;
    r.delta_over_omega_0 = std::abs(eff.delta) / p.omega_0;
    r.omega_q_over_2omega_0 = std::abs(p.omega_q) / (2.0 * p.omega_0);
    r.threshold = threshold;
    r.pass = r.max_ratio() < threshold;
    return r;
}

/// Qubit operator the drive xi omega_0 cos(omega_0 t) couples to.
inline Mat2 drive_axis(Coupling c) {
    return c == Coupling::sigma_x_displacement ? ops::pauli_z() : ops::pauli_x();
}

/// Time-independent part of H(t) without the drive and without omega_r a^dag a:
/// the qubit splitting plus the qubit-oscillator coupling.
inline ops::Operator static_interaction(const SystemParams& p) {
    using ops::Osc;
    ops::Operator h;
    if (p.coupling != Coupling::sigma_x_displacement && p.omega_q != 0.0) {
        h.push_back({0.5 * p.omega_q * ops::pauli_z(), Osc::identity});
    }
    switch (p.coupling) {
        case Coupling::sigma_z_displacement:
            h.push_back({p.g_0 * ops::pauli_z(), Osc::lower});
            h.push_back({p.g_0 * ops::pauli_z(), Osc::raise});
            break;
        case Coupling::sigma_x_displacement:
            h.push_back({p.g_0 * ops::pauli_x(), Osc::lower});
            h.push_back({p.g_0 * ops::pauli_x(), Osc::raise});
            break;
        case Coupling::jaynes_cummings:
            h.push_back({p.g_0 * ops::sigma_plus(), Osc::lower});
            h.push_back({p.g_0 * ops::sigma_minus(), Osc::raise});
            break;
    }
    return h;
}

/// Full lab-frame H(t) as product terms.
inline ops::Operator hamiltonian_terms(const SystemParams& p, double t) {
    ops::Operator h = static_interaction(p);
    const double drive = p.xi * p.omega_0 * std::cos(p.omega_0 * t);
    if (drive != 0.0) h.push_back({drive * drive_axis(p.coupling), ops::Osc::identity});
    h.push_back({p.omega_r * Mat2::Identity(), ops::Osc::number});
    return h;
}

/// Dense H(t) of dimension 2(n_d + 1), exactly Hermitian.
inline CMat hamiltonian_matrix(const SystemParams& p, double t, int n_d) {
    if (n_d < 0) throw std::invalid_argument("hamiltonian_matrix: n_d must be >= 0");
    return ops::dense(hamiltonian_terms(p, t), n_d + 1, true);
}

/// The drive frame V(t) = exp{-i[xi sin(omega_0 t) S + omega_r t a^dag a]},
/// S the drive axis. Removes the large drive and free-oscillator terms
/// exactly; the transformed Hamiltonian has norm of order g0 sqrt(n_d).
struct DriveFrame {
    Mat2 qubit;          // exp(-i xi sin(omega_0 t) S)
    double osc_phase;    // omega_r t

    static DriveFrame at(const SystemParams& p, double t) {
        const double phi = p.xi * std::sin(p.omega_0 * t);
        DriveFrame f;
        f.qubit = std::cos(phi) * Mat2::Identity() - kI * std::sin(phi) * drive_axis(p.coupling);
        f.osc_phase = p.omega_r * t;
        return f;
    }

    /// V^dag (q (x) o) V.
    ops::Term conjugate(const ops::Term& term) const {
        Mat2 q = qubit.adjoint() * term.qubit * qubit;
        if (term.osc == ops::Osc::lower) q *= std::polar(1.0, -osc_phase);
        if (term.osc == ops::Osc::raise) q *= std::polar(1.0, osc_phase);
        return ops::Term{q, term.osc};
    }
};

/// x <- V x for x with 2 * levels rows (state vector or matrix columns).
inline void apply_frame(const DriveFrame& f, int levels, CMat& x) {
    const int n = levels;
    for (int m = 0; m < n; ++m) {
        const cplx ph = std::polar(1.0, -f.osc_phase * m);
        x.row(m) *= ph;
        x.row(n + m) *= ph;
    }
    CMat top = x.topRows(n);
    CMat bottom = x.bottomRows(n);
    x.topRows(n) = f.qubit(0, 0) * top + f.qubit(0, 1) * bottom;
    x.bottomRows(n) = f.qubit(1, 0) * top + f.qubit(1, 1) * bottom;
}

/// rho <- V rho V^dag for Hermitian rho.
inline void apply_frame_hermitian(const DriveFrame& f, int levels, CMat& rho) {
    apply_frame(f, levels, rho);
    rho.adjointInPlace();
    apply_frame(f, levels, rho);
}

/// V^dag (H - H_0) V with H_0 = drive + omega_r a^dag a.
inline ops::Operator frame_hamiltonian_terms(const SystemParams& p, double t) {
    const DriveFrame f = DriveFrame::at(p, t);
    ops::Operator h = static_interaction(p);
    for (auto& term : h) term = f.conjugate(term);
    return h;
}

}  // namespace catsim::model
