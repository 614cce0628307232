// closed.hpp - pure-state dynamics under the full time-dependent Hamiltonian.

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "catsim/analytic.hpp"
#include "catsim/fock.hpp"
#include "catsim/model.hpp"
#include "catsim/operators.hpp"
#include "catsim/rk4.hpp"
#include "catsim/types.hpp"

namespace catsim::closed {

/// |Psi> = sum_m A_m |0>_q|m> + B_m |1>_q|m>.
struct JointPureState {
    CVec a;
    CVec b;
    double t = 0.0;

    int truncation() const { return static_cast<int>(a.size()) - 1; }
    double norm_squared() const { return a.squaredNorm() + b.squaredNorm(); }
    /// Population of Fock level n_d summed over the qubit.
    double top_population() const {
        const auto k = a.size() - 1;
        return std::norm(a[k]) + std::norm(b[k]);
    }

    CVec stacked() const {
        CVec v(a.size() + b.size());
        v << a, b;
        return v;
    }
    static JointPureState from_stacked(const CVec& v, double t) {
        const auto n = v.size() / 2;
        return JointPureState{v.head(n), v.tail(n), t};
    }

    /// |+>_q |0>_r, i.e. A_0 = B_0 = 1/sqrt(2).
    static JointPureState initial(int n_d) {
        fock::check_truncation(n_d);
        JointPureState s{CVec::Zero(n_d + 1), CVec::Zero(n_d + 1), 0.0};
        s.a[0] = s.b[0] = 1.0 / std::sqrt(2.0);
        return s;
    }
};

enum class Method {
    lab_rk4,          // integrate the amplitude equations as written
    drive_frame_rk4,  // integrate in the frame V(t), map samples back exactly
};

inline std::string to_string(Method m) {
    return m == Method::lab_rk4 ? "lab_rk4" : "drive_frame_rk4";
}

inline Method method_from_string(const std::string& s) {
    if (s == "lab_rk4") return Method::lab_rk4;
    if (s == "drive_frame_rk4") return Method::drive_frame_rk4;
    throw std::invalid_argument("unknown integration method '" + s + "'");
}

/// Default drive-frame step: 1/40 of the period of the fastest carrier left
/// in the frame Hamiltonian, omega_r + 2 xi omega_0.
inline double default_step(const model::SystemParams& p) {
    return 2.0 * kPi / (p.omega_r + 2.0 * p.xi * p.omega_0) / 40.0;
}

struct IntegratorConfig {
    double step = 0.0;  // <= 0 selects default_step
    Method method = Method::drive_frame_rk4;
    bool norm_renormalize = false;
    int n_d = 14;
    int sample_stride = 1;     // store every k-th step (and the final state)
    double anchor_time = 0.0;  // grid is aligned so multiples of this are hit

    double resolved_step(const model::SystemParams& p) const { return step > 0.0 ? step : default_step(p); }
};

struct Diagnostics {
    double max_norm_drift = 0.0;
    double max_top_population = 0.0;
    long steps = 0;
    double step = 0.0;
};

struct Trajectory {
    std::vector<JointPureState> samples;
    Diagnostics diagnostics;
};

/// Time derivatives of A and B for the sigma_z-displacement Hamiltonian with
/// A_{-1} = A_{n_d+1} = 0 (and likewise for B).
inline std::pair<CVec, CVec> amplitude_rhs(const model::SystemParams& p, const JointPureState& s, double t) {
    const int n = static_cast<int>(s.a.size());
    const cplx drive = -kI * (p.xi * p.omega_0 * std::cos(p.omega_0 * t));
    const double half_q = 0.5 * p.omega_q;
    CVec da(n), db(n);
    for (int m = 0; m < n; ++m) {
        cplx hop_a = 0.0, hop_b = 0.0;
        if (m + 1 < n) {
            const double r = std::sqrt(m + 1.0);
            hop_a += r * s.a[m + 1];
            hop_b += r * s.b[m + 1];
        }
        if (m > 0) {
            const double r = std::sqrt(static_cast<double>(m));
            hop_a += r * s.a[m - 1];
            hop_b += r * s.b[m - 1];
        }
        da[m] = drive * s.b[m] - kI * (m * p.omega_r + half_q) * s.a[m] - kI * p.g_0 * hop_a;
        db[m] = drive * s.a[m] - kI * (m * p.omega_r - half_q) * s.b[m] + kI * p.g_0 * hop_b;
    }
    return {da, db};
}

namespace detail {

/// RHS of i d/dt x = H x with H given as product terms.
struct OperatorRhs {
    const model::SystemParams& params;
    ops::Ladder ladder;
    bool drive_frame;

    void operator()(double t, const CMat& y, CMat& dydt) const {
        const ops::Operator h =
            drive_frame ? model::frame_hamiltonian_terms(params, t) : model::hamiltonian_terms(params, t);
        dydt.setZero();
        ops::apply_left(h, ladder, y, dydt);
        dydt *= -kI;
    }
};

struct AmplitudeRhs {
    const model::SystemParams& params;

    void operator()(double t, const CMat& y, CMat& dydt) const {
        const JointPureState s = JointPureState::from_stacked(y.col(0), t);
        auto [da, db] = amplitude_rhs(params, s, t);
        const auto n = da.size();
        dydt.col(0).head(n) = da;
        dydt.col(0).tail(n) = db;
    }
};

}  // namespace detail

/// Observer called with each stored lab-frame sample.
using Observer = std::function<void(const JointPureState&)>;

/// Fixed-step RK4 from `initial` to t_end. The lab-frame method uses the
/// specialised amplitude equations for the sigma_z variant and the generic
/// -i H(t) psi form otherwise. Aborts with NumericInvariantError when the norm
/// drifts by more than 1e-5.
inline Diagnostics integrate(const model::SystemParams& params, const IntegratorConfig& config, double t_end,
                             const JointPureState& initial, const Observer& observe) {
    params.validate();
    if (config.sample_stride < 1) throw std::invalid_argument("sample_stride must be >= 1");
    const int levels = static_cast<int>(initial.a.size());
    if (levels != config.n_d + 1) throw std::invalid_argument("initial state truncation does not match config.n_d");

    const TimeGrid grid = TimeGrid::make(t_end, config.resolved_step(params), config.anchor_time);
    const bool frame = config.method == Method::drive_frame_rk4;
    Diagnostics diag;
    diag.steps = grid.steps;
    diag.step = grid.step;

    const double norm0 = initial.norm_squared();
    CMat y = initial.stacked();
    if (frame) {
        // Frame and lab coincide at t = 0 only; map a general start time back.
        CMat tmp = y;
        const model::DriveFrame f0 = model::DriveFrame::at(params, initial.t);
        model::DriveFrame inv = f0;
        inv.qubit = f0.qubit.adjoint();
        inv.osc_phase = -f0.osc_phase;
        model::apply_frame(inv, levels, tmp);
        y = tmp;
    }

    auto emit = [&](double t) {
        CMat lab = y;
        if (frame) model::apply_frame(model::DriveFrame::at(params, t), levels, lab);
        JointPureState s = JointPureState::from_stacked(lab.col(0), t);
        const double drift = std::abs(s.norm_squared() - norm0);
        diag.max_norm_drift = std::max(diag.max_norm_drift, drift);
        diag.max_top_population = std::max(diag.max_top_population, s.top_population());
        if (drift > 1e-5) {
            std::ostringstream msg;
            msg << "norm drift " << drift << " at g0 t = " << t << " exceeds 1e-5; reduce the step (now "
                << grid.step << ") or raise the truncation (now " << levels - 1 << ")";
            throw NumericInvariantError(msg.str());
        }
        if (observe) observe(s);
    };

    Rk4 rk4;
    const double t0 = initial.t;
    emit(t0);
    const ops::Ladder ladder(levels);
    const bool specialised = !frame && params.coupling == model::Coupling::sigma_z_displacement;
    for (long k = 0; k < grid.steps; ++k) {
        const double t = t0 + grid.time_at(k);
        const double h = grid.time_at(k + 1) - grid.time_at(k);
        if (specialised) {
            rk4.step(detail::AmplitudeRhs{params}, t, h, y);
        } else {
            rk4.step(detail::OperatorRhs{params, ladder, frame}, t, h, y);
        }
        if (config.norm_renormalize) y *= std::sqrt(norm0) / y.norm();
        const bool last = (k + 1 == grid.steps);
        if ((k + 1) % config.sample_stride == 0 || last) emit(t0 + grid.time_at(k + 1));
    }
    return diag;
}

inline Trajectory integrate(const model::SystemParams& params, const IntegratorConfig& config, double t_end) {
    Trajectory traj;
    traj.diagnostics = integrate(params, config, t_end, JointPureState::initial(config.n_d),
                                 [&](const JointPureState& s) { traj.samples.push_back(s); });
    return traj;
}

/// State at a single time t_end (no intermediate samples kept).
inline JointPureState evolve(const model::SystemParams& params, IntegratorConfig config, double t_end,
                             Diagnostics* diag = nullptr) {
    std::optional<JointPureState> last;
    config.sample_stride = std::numeric_limits<int>::max();
    const Diagnostics d = integrate(params, config, t_end, JointPureState::initial(config.n_d),
                                    [&](const JointPureState& s) { last = s; });
    if (diag) *diag = d;
    return *last;
}

/// <n> = sum_m m (|A_m|^2 + |B_m|^2).
inline double mean_excitation_numeric(const JointPureState& s) {
    double n = 0.0;
    for (int m = 0; m < s.a.size(); ++m) n += m * (std::norm(s.a[m]) + std::norm(s.b[m]));
    return n;
}

struct ConditionedPure {
    std::optional<fock::FockVector> plus;   // empty when p_plus < 1e-12
    std::optional<fock::FockVector> minus;
    double p_plus = 0.0;
    double p_minus = 0.0;
};

/// Project the qubit on |+/-> = (|0> +/- |1>)/sqrt(2).
inline ConditionedPure condition_on_qubit(const JointPureState& s) {
    ConditionedPure out;
    const CVec sum = s.a + s.b;
    const CVec diff = s.a - s.b;
    out.p_plus = 0.5 * sum.squaredNorm();
    out.p_minus = 0.5 * diff.squaredNorm();
    if (out.p_plus >= 1e-12) out.plus = fock::FockVector{sum / std::sqrt(2.0 * out.p_plus)};
    if (out.p_minus >= 1e-12) out.minus = fock::FockVector{diff / std::sqrt(2.0 * out.p_minus)};
    return out;
}

/// f = |<Psi|psi_RWA>|^2 against the analytic lab-frame state on the same
/// truncation.
inline double fidelity_vs_rwa(const JointPureState& s, const analytic::RwaSolution& sol) {
    const auto target = analytic::rwa_joint_state(sol, s.t, s.truncation(), 1.0);
    const cplx overlap = s.a.dot(target.a) + s.b.dot(target.b);
    return std::min(1.0, std::norm(overlap));
}

struct CatFidelities {
    std::optional<double> plus;   // empty when the conditioned state is undefined
    std::optional<double> minus;
};

/// f_{+/-} = |<Psi_{+/-}|alpha_{+/-}>|^2.
inline CatFidelities fidelity_vs_cat(const JointPureState& s, cplx alpha) {
    const ConditionedPure c = condition_on_qubit(s);
    CatFidelities f;
    const int n_d = s.truncation();
    if (c.plus) {
        const auto target = fock::cat_vector({alpha, fock::Parity::even}, n_d);
        f.plus = std::min(1.0, std::norm(c.plus->amps.dot(target.amps)));
    }
    if (c.minus) {
        const fock::CatTarget odd{alpha, fock::Parity::odd};
        // The odd cat tends to |1> as alpha -> 0.
        CVec target = CVec::Zero(n_d + 1);
        if (odd.degenerate()) {
            if (n_d >= 1) target[1] = 1.0;
        } else {
            target = fock::cat_vector(odd, n_d).amps;
        }
        f.minus = std::min(1.0, std::norm(c.minus->amps.dot(target)));
    }
    return f;
}

}  // namespace catsim::closed
