// analytic.hpp - closed-form solution of the conditionally driven oscillator
// under the rotating-wave Hamiltonian g sigma_z (a e^{-i delta t} + h.c.).

#pragma once

#include <cmath>
#include <utility>

#include "catsim/fock.hpp"
#include "catsim/model.hpp"
#include "catsim/types.hpp"

namespace catsim::analytic {

struct RwaSolution {
    model::EffectiveParams eff;
    double omega_r = 0.0;
    double xi = 0.0;
    double omega_0 = 0.0;

    static RwaSolution from(const model::SystemParams& p) {
        return RwaSolution{model::effective_params(p), p.omega_r, p.xi, p.omega_0};
    }
};

/// Rotating-frame displacement eta(t) = (g/delta)(1 - e^{i delta t});
/// -i g t on resonance.
inline cplx eta_t(const RwaSolution& sol, double t) {
    const double g = sol.eff.g;
    const double d = sol.eff.delta;
    if (d == 0.0) return cplx{0.0, -g * t};
    // 1 - e^{ix} = -2i sin(x/2) e^{ix/2}, no cancellation for small x.
    return (g / d) * (-2.0 * kI * std::sin(0.5 * d * t)) * std::polar(1.0, 0.5 * d * t);
}

/// Global phase theta(t) = (g/delta)^2 (delta t - sin(delta t)).
inline double theta_t(const RwaSolution& sol, double t) {
    const double g = sol.eff.g;
    const double d = sol.eff.delta;
    if (d == 0.0) return 0.0;
    const double x = d * t;
    // x - sin x by series when small to avoid cancellation.
    double x_minus_sin;
    if (std::abs(x) < 1e-3) {
        const double x3 = x * x * x;
        x_minus_sin = x3 / 6.0 - x3 * x * x / 120.0;
    } else {
        x_minus_sin = x - std::sin(x);
    }
    return (g / d) * (g / d) * x_minus_sin;
}

/// Lab-frame coherent amplitude alpha(t) = eta(t) e^{-i omega_r t}.
inline cplx alpha_t(const RwaSolution& sol, double t) {
    return eta_t(sol, t) * std::polar(1.0, -sol.omega_r * t);
}

/// <a^dag a> = 4 (g/delta)^2 sin^2(delta t / 2), or (g t)^2 on resonance.
inline double mean_excitation(const RwaSolution& sol, double t) {
    const double g = sol.eff.g;
    const double d = sol.eff.delta;
    if (d == 0.0) return g * g * t * t;
    const double s = std::sin(0.5 * d * t);
    return 4.0 * (g / d) * (g / d) * s * s;
}

struct CatProbabilities {
    double plus = 1.0;
    double minus = 0.0;
};

/// P_{+/-} = (1 +/- e^{-2|alpha|^2}) / 2.
inline CatProbabilities cat_probabilities_for(cplx alpha) {
    CatProbabilities p;
    p.minus = -0.5 * std::expm1(-2.0 * std::norm(alpha));
    p.plus = 1.0 - p.minus;
    return p;
}

inline CatProbabilities cat_probabilities(const RwaSolution& sol, double t) {
    return cat_probabilities_for(alpha_t(sol, t));
}

/// Von Neumann entropy (bits) of the reduced qubit state, whose eigenvalues
/// are 1/(4 N_{+/-}^2) = P_{+/-}.
inline double entropy(const RwaSolution& sol, double t) {
    const CatProbabilities p = cat_probabilities(sol, t);
    double s = 0.0;
    for (double v : {p.plus, p.minus}) {
        if (v > 0.0) s -= v * std::log2(v);
    }
    return s;
}

/// log2[(1/N_+ + 1/N_-)^2 / 4] = log2(1 + sqrt(1 - e^{-4|alpha|^2})).
inline double log_negativity_closed(const RwaSolution& sol, double t) {
    const double a2 = std::norm(alpha_t(sol, t));
    return std::log2(1.0 + std::sqrt(-std::expm1(-4.0 * a2)));
}

/// Magnus propagator e^{i theta} exp[sigma_z (eta a^dag - eta^* a)] in the
/// rotating frame: D(eta) on the |0>_q block, D(-eta) on the |1>_q block.
/// Elements are the exact operator elements restricted to levels 0..n_d.
inline CMat rwa_propagator(const RwaSolution& sol, double t, int n_d, double max_tail_mass = 1e-8) {
    fock::check_truncation(n_d);
    const cplx eta = eta_t(sol, t);
    const fock::FockVector probe = fock::coherent_vector(eta, n_d);
    if (probe.tail_mass() > max_tail_mass) {
        const int need = fock::recommended_truncation(std::norm(eta), 0.0);
        throw TruncationError("rwa_propagator: truncation " + std::to_string(n_d) +
                                  " too small for |eta| = " + std::to_string(std::abs(eta)) +
                                  "; use n_d >= " + std::to_string(need),
                              need);
    }
    const int n = n_d + 1;
    CMat u = CMat::Zero(2 * n, 2 * n);
    const cplx phase = std::polar(1.0, theta_t(sol, t));
    u.topLeftCorner(n, n) = phase * fock::displacement_matrix(eta, n_d);
    u.bottomRightCorner(n, n) = phase * fock::displacement_matrix(-eta, n_d);
    return u;
}

/// Lab-frame joint state V(t) U(t) |+>_q |0>_r as amplitude blocks A (qubit
/// |0>) and B (qubit |1>), each on levels 0..n_d. Keeps e^{i theta}.
struct JointAmplitudes {
    CVec a;
    CVec b;
};

inline JointAmplitudes rwa_joint_state(const RwaSolution& sol, double t, int n_d, double max_tail_mass = 1e-8) {
    fock::check_truncation(n_d);
    const cplx alpha = alpha_t(sol, t);
    const fock::FockVector plus = fock::coherent_vector(alpha, n_d);
    if (plus.tail_mass() > max_tail_mass) {
        const int need = fock::recommended_truncation(std::norm(alpha), 0.0);
        throw TruncationError("rwa_joint_state: truncation " + std::to_string(n_d) +
                                  " too small; use n_d >= " + std::to_string(need),
                              need);
    }
    CVec minus = plus.amps;
    for (int m = 1; m <= n_d; m += 2) minus[m] = -minus[m];
    const double phi = sol.xi * std::sin(sol.omega_0 * t);
    const cplx pre = std::polar(1.0 / std::sqrt(2.0), theta_t(sol, t));
    const double c = std::cos(phi);
    const cplx is = kI * std::sin(phi);
    JointAmplitudes out;
    out.a = pre * (c * plus.amps - is * minus);
    out.b = pre * (c * minus - is * plus.amps);
    return out;
}

}  // namespace catsim::analytic
