// open.hpp - Lindblad dynamics with thermal qubit and oscillator baths.
//
//   d rho/dt = i[rho, H(t)] + gamma_q nbar_q D[sigma_+] + gamma_q (nbar_q + 1) D[sigma_-]
//            + kappa_r nbar_r D[a^dag] + kappa_r (nbar_r + 1) D[a]
//
// with D[o] rho = o rho o^dag - (o^dag o rho + rho o^dag o) / 2, integrated
// as a dense matrix ODE.

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "catsim/closed.hpp"
#include "catsim/fock.hpp"
#include "catsim/model.hpp"
#include "catsim/operators.hpp"
#include "catsim/rk4.hpp"
#include "catsim/types.hpp"

namespace catsim::open {

/// rho indexed by (s, m; s', n) with flat index s * (n_d + 1) + m.
struct JointDensityMatrix {
    CMat rho;
    double t = 0.0;

    int levels() const { return static_cast<int>(rho.rows()) / 2; }
    int truncation() const { return levels() - 1; }

    double trace() const { return rho.trace().real(); }
    double hermiticity_residual() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }
    double purity() const { return (rho * rho).trace().real(); }
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver failed");
        return es.eigenvalues().minCoeff();
    }
    double top_population() const {
        const int n = levels();
        return rho(n - 1, n - 1).real() + rho(2 * n - 1, 2 * n - 1).real();
    }
    double mean_excitation() const {
        const int n = levels();
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += m * (rho(m, m).real() + rho(n + m, n + m).real());
        return s;
    }

    static JointDensityMatrix pure(const closed::JointPureState& psi) {
        const CVec v = psi.stacked();
        return JointDensityMatrix{v * v.adjoint(), psi.t};
    }
    /// rho_{0,0,0,0} = rho_{0,0,1,0} = rho_{1,0,0,0} = rho_{1,0,1,0} = 1/2.
    static JointDensityMatrix initial(int n_d) { return pure(closed::JointPureState::initial(n_d)); }
};

/// Default truncation for open runs: 14 + ceil(6 nbar_r).
inline int default_truncation(double nbar_r) { return 14 + static_cast<int>(std::ceil(6.0 * nbar_r)); }

struct Diagnostics {
    double max_trace_drift = 0.0;
    double max_hermiticity_residual = 0.0;
    double min_eigenvalue = std::numeric_limits<double>::infinity();
    double max_top_population = 0.0;
    long steps = 0;
    double step = 0.0;
};

struct Jump {
    double rate;
    ops::Term op;
};

/// Collapse channels with nonzero rate. In the drive frame the qubit
/// operators are conjugated by the frame rotation; oscillator phases cancel
/// inside each dissipator.
inline std::vector<Jump> jump_operators(const model::SystemParams& p, const model::DriveFrame* frame) {
    std::vector<Jump> jumps;
    auto qubit = [&](const Mat2& q) {
        return frame ? ops::Term{frame->qubit.adjoint() * q * frame->qubit, ops::Osc::identity}
                     : ops::Term{q, ops::Osc::identity};
    };
    if (p.gamma_q > 0.0 && p.nbar_q > 0.0) jumps.push_back({p.gamma_q * p.nbar_q, qubit(ops::sigma_plus())});
    if (p.gamma_q > 0.0) jumps.push_back({p.gamma_q * (p.nbar_q + 1.0), qubit(ops::sigma_minus())});
    if (p.kappa_r > 0.0 && p.nbar_r > 0.0) {
        jumps.push_back({p.kappa_r * p.nbar_r, ops::Term{Mat2::Identity(), ops::Osc::raise}});
    }
    if (p.kappa_r > 0.0) jumps.push_back({p.kappa_r * (p.nbar_r + 1.0), ops::Term{Mat2::Identity(), ops::Osc::lower}});
    return jumps;
}

namespace detail {

class LindbladRhs {
public:
    LindbladRhs(const model::SystemParams& p, int levels, bool drive_frame)
        : params_(p), ladder_(levels), drive_frame_(drive_frame), n_(levels) {
        // Oscillator part of sum_k rate_k L_k^dag L_k with the truncated
        // ladder operators, so that the trace is preserved exactly.
        const double down = p.kappa_r * (p.nbar_r + 1.0);
        const double up = p.kappa_r * p.nbar_r;
        osc_decay_ = RVec(n_);
        for (int m = 0; m < n_; ++m) osc_decay_[m] = down * m + (m + 1 < n_ ? up * (m + 1) : 0.0);
        if (n_ > 1) {
            RVec r(n_ - 1);
            for (int m = 0; m < n_ - 1; ++m) r[m] = std::sqrt(m + 1.0);
            ladder_outer_ = r * r.transpose();
        }
    }

    /// Lab-frame or drive-frame generator applied to Hermitian rho:
    /// -i(H_eff rho - rho H_eff^dag) + sum_k rate_k L_k rho L_k^dag with
    /// H_eff = H - (i/2) sum_k rate_k L_k^dag L_k.
    void operator()(double t, const CMat& rho, CMat& out) {
        const int n = n_;
        const int d = static_cast<int>(rho.rows());
        ensure(d);
        model::DriveFrame frame;
        if (drive_frame_) frame = model::DriveFrame::at(params_, t);
        const ops::Operator h =
            drive_frame_ ? model::frame_hamiltonian_terms(params_, t) : model::hamiltonian_terms(params_, t);

        // Qubit channels: G = sum rate Q^dag Q and the block map
        // c[s][t][u][v] = sum rate Q_su conj(Q_tv).
        Mat2 g = Mat2::Zero();
        cplx c[2][2][2][2] = {};
        auto add_qubit = [&](double rate, const Mat2& q0) {
            if (rate <= 0.0) return;
            const Mat2 q = drive_frame_ ? Mat2(frame.qubit.adjoint() * q0 * frame.qubit) : q0;
            g += rate * q.adjoint() * q;
            for (int s = 0; s < 2; ++s)
                for (int tt = 0; tt < 2; ++tt)
                    for (int u = 0; u < 2; ++u)
                        for (int v = 0; v < 2; ++v) c[s][tt][u][v] += rate * q(s, u) * std::conj(q(tt, v));
        };
        add_qubit(params_.gamma_q * params_.nbar_q, ops::sigma_plus());
        add_qubit(params_.gamma_q * (params_.nbar_q + 1.0), ops::sigma_minus());

        // K = H_eff rho.
        k_.setZero();
        ops::apply_left(h, ladder_, rho, k_);
        for (int s = 0; s < 2; ++s) {
            for (int u = 0; u < 2; ++u) {
                if (g(s, u) != cplx{0.0, 0.0}) k_.middleRows(s * n, n) += (-0.5 * kI * g(s, u)) * rho.middleRows(u * n, n);
            }
            if (params_.kappa_r > 0.0) {
                k_.middleRows(s * n, n) += (-0.5 * kI) * (osc_decay_.asDiagonal() * rho.middleRows(s * n, n));
            }
        }
        out.noalias() = -kI * k_;
        out.noalias() += kI * k_.adjoint();

        for (int s = 0; s < 2; ++s) {
            for (int tt = 0; tt < 2; ++tt) {
                auto blk = out.block(s * n, tt * n, n, n);
                for (int u = 0; u < 2; ++u) {
                    for (int v = 0; v < 2; ++v) {
                        const cplx w = c[s][tt][u][v];
                        if (w != cplx{0.0, 0.0}) blk += w * rho.block(u * n, v * n, n, n);
                    }
                }
                if (params_.kappa_r > 0.0 && n > 1) {
                    // a rho a^dag and a^dag rho a on the truncated ladder.
                    const double down = params_.kappa_r * (params_.nbar_r + 1.0);
                    const double up = params_.kappa_r * params_.nbar_r;
                    blk.topLeftCorner(n - 1, n - 1) +=
                        down * ladder_outer_.cwiseProduct(rho.block(s * n + 1, tt * n + 1, n - 1, n - 1));
                    if (up > 0.0) {
                        blk.bottomRightCorner(n - 1, n - 1) +=
                            up * ladder_outer_.cwiseProduct(rho.block(s * n, tt * n, n - 1, n - 1));
                    }
                }
            }
        }
        xa_ = out.adjoint();
        out += xa_;
        out *= 0.5;
    }

private:
    void ensure(int d) {
        if (k_.rows() == d) return;
        k_.resize(d, d);
        xa_.resize(d, d);
    }

    const model::SystemParams& params_;
    ops::Ladder ladder_;
    bool drive_frame_;
    int n_;
    RVec osc_decay_;
    RMat ladder_outer_;
    CMat k_, xa_;
};

}  // namespace detail

/// Lab-frame right-hand side of the master equation at time t.
inline CMat lindblad_rhs(const model::SystemParams& params, const JointDensityMatrix& rho, double t) {
    detail::LindbladRhs rhs(params, rho.levels(), false);
    CMat out(rho.rho.rows(), rho.rho.cols());
    rhs(t, rho.rho, out);
    return out;
}

struct IntegratorConfig {
    closed::IntegratorConfig base;
    int positivity_stride = 1;  // eigenvalue check every k-th sample; 0 disables
};

using Observer = std::function<void(const JointDensityMatrix&)>;

/// Fixed-step RK4 on the density matrix, re-symmetrized each step. Aborts
/// with NumericInvariantError when |Tr rho - 1| > 1e-5 or the smallest
/// eigenvalue falls below -1e-5 at a checked sample.
inline Diagnostics integrate_master(const model::SystemParams& params, const IntegratorConfig& config, double t_end,
                                    const JointDensityMatrix& initial, const Observer& observe) {
    params.validate();
    const closed::IntegratorConfig& base = config.base;
    if (base.sample_stride < 1) throw std::invalid_argument("sample_stride must be >= 1");
    const int levels = initial.levels();
    if (levels != base.n_d + 1) throw std::invalid_argument("initial state truncation does not match n_d");

    const TimeGrid grid = TimeGrid::make(t_end, base.resolved_step(params), base.anchor_time);
    const bool frame = base.method == closed::Method::drive_frame_rk4;
    Diagnostics diag;
    diag.steps = grid.steps;
    diag.step = grid.step;
    const double trace0 = initial.trace();

    CMat y = initial.rho;
    if (frame) {
        const model::DriveFrame f0 = model::DriveFrame::at(params, initial.t);
        model::DriveFrame inv = f0;
        inv.qubit = f0.qubit.adjoint();
        inv.osc_phase = -f0.osc_phase;
        model::apply_frame_hermitian(inv, levels, y);
    }

    long sample_index = 0;
    auto emit = [&](double t) {
        JointDensityMatrix s{y, t};
        if (frame) model::apply_frame_hermitian(model::DriveFrame::at(params, t), levels, s.rho);
        const double drift = std::abs(s.trace() - trace0);
        diag.max_trace_drift = std::max(diag.max_trace_drift, drift);
        diag.max_hermiticity_residual = std::max(diag.max_hermiticity_residual, s.hermiticity_residual());
        diag.max_top_population = std::max(diag.max_top_population, s.top_population());
        const bool check_pos = config.positivity_stride > 0 && sample_index % config.positivity_stride == 0;
        double min_eig = std::numeric_limits<double>::infinity();
        if (check_pos) {
            min_eig = s.min_eigenvalue();
            diag.min_eigenvalue = std::min(diag.min_eigenvalue, min_eig);
        }
        ++sample_index;
        if (drift > 1e-5 || min_eig < -1e-5) {
            std::ostringstream msg;
            msg << "density-matrix invariant violated at g0 t = " << t << " (trace drift " << drift
                << ", min eigenvalue " << min_eig << "); reduce the step (now " << grid.step
                << ") or raise the truncation (now " << levels - 1 << ")";
            throw NumericInvariantError(msg.str());
        }
        if (observe) observe(s);
    };

    Rk4 rk4;
    detail::LindbladRhs rhs(params, levels, frame);
    const double t0 = initial.t;
    emit(t0);
    for (long k = 0; k < grid.steps; ++k) {
        const double t = t0 + grid.time_at(k);
        const double h = grid.time_at(k + 1) - grid.time_at(k);
        rk4.step(rhs, t, h, y);
        y = 0.5 * (y + y.adjoint()).eval();
        const bool last = (k + 1 == grid.steps);
        if ((k + 1) % base.sample_stride == 0 || last) emit(t0 + grid.time_at(k + 1));
    }
    return diag;
}

inline Diagnostics integrate_master(const model::SystemParams& params, const IntegratorConfig& config, double t_end,
                                    const Observer& observe) {
    return integrate_master(params, config, t_end, JointDensityMatrix::initial(config.base.n_d), observe);
}

/// Density matrix at t_end.
inline JointDensityMatrix evolve_master(const model::SystemParams& params, IntegratorConfig config, double t_end,
                                        Diagnostics* diag = nullptr) {
    std::optional<JointDensityMatrix> last;
    config.base.sample_stride = std::numeric_limits<int>::max();
    const Diagnostics d = integrate_master(params, config, t_end, [&](const JointDensityMatrix& s) { last = s; });
    if (diag) *diag = d;
    return *last;
}

enum class Sign { plus, minus };

struct ConditionedOscillatorState {
    CMat rho_r;  // normalized; empty when the branch is undefined
    double probability = 0.0;
    Sign sign = Sign::plus;

    bool defined() const { return rho_r.size() > 0; }
};

struct ConditionedPair {
    ConditionedOscillatorState plus;
    ConditionedOscillatorState minus;
};

/// Lambda^{(+/-)} = rho_{1m,1n} + rho_{0m,0n} +/- (rho_{1m,0n} + rho_{0m,1n}),
/// P_{+/-} = Tr Lambda / 2, rho_r = Lambda / (2 P).
inline ConditionedPair condition_on_qubit_open(const JointDensityMatrix& state) {
    const int n = state.levels();
    const auto& r = state.rho;
    const CMat diag_sum = r.topLeftCorner(n, n) + r.bottomRightCorner(n, n);
    const CMat cross = r.bottomLeftCorner(n, n) + r.topRightCorner(n, n);
    ConditionedPair out;
    auto make = [&](Sign sign) {
        ConditionedOscillatorState c;
        c.sign = sign;
        const CMat lambda = (sign == Sign::plus) ? CMat(diag_sum + cross) : CMat(diag_sum - cross);
        c.probability = 0.5 * lambda.trace().real();
        if (c.probability > 1e-9) c.rho_r = lambda / (2.0 * c.probability);
        return c;
    };
    out.plus = make(Sign::plus);
    out.minus = make(Sign::minus);
    return out;
}

/// F = <alpha_{+/-}| rho_r |alpha_{+/-}> with the cat parity set by the branch.
inline std::optional<double> fidelity_open(const ConditionedOscillatorState& cond, cplx alpha) {
    if (!cond.defined()) return std::nullopt;
    const int n_d = static_cast<int>(cond.rho_r.rows()) - 1;
    const fock::CatTarget target{alpha, cond.sign == Sign::plus ? fock::Parity::even : fock::Parity::odd};
    CVec v = CVec::Zero(n_d + 1);
    if (target.degenerate()) {
        if (n_d >= 1) v[1] = 1.0;
    } else {
        v = fock::cat_vector(target, n_d).amps;
    }
    return (v.adjoint() * cond.rho_r * v)(0, 0).real();
}

/// Partial transpose over the oscillator index: (s,m; s',n) -> (s,n; s',m).
inline CMat partial_transpose_oscillator(const CMat& rho) {
    const int n = static_cast<int>(rho.rows()) / 2;
    CMat out(rho.rows(), rho.cols());
    for (int s = 0; s < 2; ++s) {
        for (int sp = 0; sp < 2; ++sp) {
            out.block(s * n, sp * n, n, n) = rho.block(s * n, sp * n, n, n).transpose();
        }
    }
    return out;
}

struct LogNegativity {
    double value = 0.0;  // max(raw, 0)
    double raw = 0.0;    // log2 of the trace norm
};

/// N = log2 || rho^{T_r} ||_1 with the trace norm from the Hermitian spectrum.
inline LogNegativity log_negativity_numeric(const CMat& rho) {
    const CMat pt = partial_transpose_oscillator(rho);
    Eigen::SelfAdjointEigenSolver<CMat> es(pt, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("log_negativity_numeric: eigensolver failed");
    const double trace_norm = es.eigenvalues().cwiseAbs().sum();
    LogNegativity out;
    out.raw = std::log2(trace_norm);
    out.value = std::max(0.0, out.raw);
    return out;
}

inline LogNegativity log_negativity_numeric(const JointDensityMatrix& rho) { return log_negativity_numeric(rho.rho); }

}  // namespace catsim::open
