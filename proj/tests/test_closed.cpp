#include <cmath>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "catsim/closed.hpp"

using namespace catsim;
using closed::JointPureState;
using model::Coupling;
using model::SystemParams;

namespace {

SystemParams cat_params(double omega_r = 200.0) {
    SystemParams p;
    p.omega_r = omega_r;
    p.xi = 1.5271;
    p.omega_0 = model::drive_frequency_for_detuning(p.omega_r, p.g_0, p.xi, 1, 1.0, Coupling::sigma_z_displacement);
    return p;
}

JointPureState random_state(int n_d, unsigned seed) {
    std::srand(seed);
    JointPureState s{CVec::Random(n_d + 1), CVec::Random(n_d + 1), 0.0};
    const double nrm = std::sqrt(s.norm_squared());
    s.a /= nrm;
    s.b /= nrm;
    return s;
}

// Time-ordered product of dense exponentials, fourth-order Magnus with two
// Gauss points per micro-step.
CVec magnus_oracle(const SystemParams& p, int n_d, const CVec& psi0, double t_end, int steps) {
    CVec psi = psi0;
    const double h = t_end / steps;
    const double c = std::sqrt(3.0) / 6.0;
    for (int k = 0; k < steps; ++k) {
        const double t = k * h;
        const CMat a1 = -kI * model::hamiltonian_matrix(p, t + (0.5 - c) * h, n_d);
        const CMat a2 = -kI * model::hamiltonian_matrix(p, t + (0.5 + c) * h, n_d);
        const CMat omega = 0.5 * h * (a1 + a2) + (std::sqrt(3.0) / 12.0) * h * h * (a2 * a1 - a1 * a2);
        psi = omega.exp() * psi;
    }
    return psi;
}

}  // namespace

TEST(AmplitudeRhs, MatchesDenseHamiltonian) {
    SystemParams p = cat_params();
    p.omega_q = 0.2;
    const int n_d = 9;
    const auto s = random_state(n_d, 7);
    for (double t : {0.0, 0.31, 5.0}) {
        auto [da, db] = closed::amplitude_rhs(p, s, t);
        const CVec expect = -kI * (model::hamiltonian_matrix(p, t, n_d) * s.stacked());
        CVec got(2 * (n_d + 1));
        got << da, db;
        EXPECT_LT((got - expect).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(AmplitudeRhs, FreeOscillatorIsPhaseRotation) {
    SystemParams p;
    p.g_0 = 0.0;
    p.xi = 0.0;
    const auto s = random_state(6, 3);
    auto [da, db] = closed::amplitude_rhs(p, s, 0.4);
    for (int m = 0; m <= 6; ++m) {
        EXPECT_NEAR(std::abs(da[m] - cplx{0, -m * p.omega_r} * s.a[m]), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(db[m] - cplx{0, -m * p.omega_r} * s.b[m]), 0.0, 1e-12);
    }
}

TEST(AmplitudeRhs, NormIsStationary) {
    const SystemParams p = cat_params();
    for (unsigned seed : {1u, 2u, 3u}) {
        const auto s = random_state(14, seed);
        auto [da, db] = closed::amplitude_rhs(p, s, 0.123 * seed);
        const double dnorm = 2.0 * (s.a.dot(da).real() + s.b.dot(db).real());
        EXPECT_LT(std::abs(dnorm), 1e-12);
    }
}

TEST(Integrate, ZeroDurationReturnsInitialState) {
    const auto traj = closed::integrate(cat_params(), {}, 0.0);
    ASSERT_EQ(traj.samples.size(), 1u);
    EXPECT_EQ(traj.samples[0].stacked(), JointPureState::initial(14).stacked());
}

TEST(Integrate, MatchesMagnusOracleForAllVariants) {
    for (Coupling c : {Coupling::sigma_z_displacement, Coupling::sigma_x_displacement, Coupling::jaynes_cummings}) {
        SystemParams p = cat_params();
        p.coupling = c;
        if (c == Coupling::jaynes_cummings) p.omega_q = 0.3;
        const int n_d = 6;
        const double t_end = 1.0;
        const CVec ref = magnus_oracle(p, n_d, JointPureState::initial(n_d).stacked(), t_end, 20000);

        closed::IntegratorConfig frame;
        frame.n_d = n_d;
        const auto sf = closed::evolve(p, frame, t_end);
        EXPECT_LT((sf.stacked() - ref).norm(), 1e-7) << model::to_string(c);

        closed::IntegratorConfig lab = frame;
        lab.method = closed::Method::lab_rk4;
        lab.step = 2e-5;
        const auto sl = closed::evolve(p, lab, t_end);
        EXPECT_LT((sl.stacked() - ref).norm(), 1e-7) << model::to_string(c);
    }
}

TEST(Integrate, NormConservedOverFullPeriod) {
    const SystemParams p = cat_params();
    const double period = 2.0 * kPi / model::effective_params(p).delta;
    closed::IntegratorConfig cfg;
    cfg.sample_stride = 50;
    const auto traj = closed::integrate(p, cfg, period);
    EXPECT_LT(traj.diagnostics.max_norm_drift, 1e-8);
    EXPECT_NEAR(traj.samples.back().t, period, 1e-12);
    for (const auto& s : traj.samples) EXPECT_LE(closed::mean_excitation_numeric(s), 14.0);
}

TEST(Integrate, AbortsWhenNormDrifts) {
    SystemParams p = cat_params();
    closed::IntegratorConfig cfg;
    cfg.method = closed::Method::lab_rk4;
    cfg.step = 0.02;  // n_d omega_r h far outside the RK4 stability region
    EXPECT_THROW(closed::evolve(p, cfg, 1.0), NumericInvariantError);
    EXPECT_THROW(closed::evolve(p, cfg, -1.0), std::invalid_argument);
}

TEST(Integrate, RenormalizationKeepsUnitNorm) {
    const SystemParams p = cat_params();
    closed::IntegratorConfig cfg;
    cfg.norm_renormalize = true;
    cfg.step = 2e-3;
    closed::Diagnostics d;
    const auto s = closed::evolve(p, cfg, 3.0, &d);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-13);
}

TEST(Integrate, AnchorTimeLandsOnGrid) {
    const SystemParams p = cat_params();
    const double ts = model::effective_params(p).t_peak;
    closed::IntegratorConfig cfg;
    cfg.anchor_time = ts;
    cfg.sample_stride = 1;
    const auto traj = closed::integrate(p, cfg, 2.0 * ts);
    bool hit = false;
    for (const auto& s : traj.samples) hit = hit || s.t == ts;
    EXPECT_TRUE(hit);
}

TEST(Observables, MeanExcitationAndConditioning) {
    const auto init = JointPureState::initial(5);
    EXPECT_EQ(closed::mean_excitation_numeric(init), 0.0);
    JointPureState one{CVec::Zero(6), CVec::Zero(6), 0.0};
    one.a[1] = 1.0;
    EXPECT_EQ(closed::mean_excitation_numeric(one), 1.0);

    const auto c = closed::condition_on_qubit(init);
    EXPECT_NEAR(c.p_plus, 1.0, 1e-15);
    EXPECT_EQ(c.p_minus, 0.0);
    ASSERT_TRUE(c.plus.has_value());
    EXPECT_FALSE(c.minus.has_value());
    EXPECT_NEAR(std::abs(c.plus->amps[0]), 1.0, 1e-15);

    const auto r = random_state(8, 11);
    const auto cr = closed::condition_on_qubit(r);
    EXPECT_NEAR(cr.p_plus + cr.p_minus, 1.0, 1e-12);
    EXPECT_NEAR(cr.plus->norm_squared(), 1.0, 1e-12);
    EXPECT_NEAR(cr.minus->norm_squared(), 1.0, 1e-12);
}

TEST(Observables, FidelitiesAtStart) {
    const SystemParams p = cat_params();
    const auto sol = analytic::RwaSolution::from(p);
    const auto init = JointPureState::initial(14);
    EXPECT_NEAR(closed::fidelity_vs_rwa(init, sol), 1.0, 1e-12);
    const auto f = closed::fidelity_vs_cat(init, analytic::alpha_t(sol, 0.0));
    ASSERT_TRUE(f.plus.has_value());
    EXPECT_NEAR(*f.plus, 1.0, 1e-12);
    EXPECT_FALSE(f.minus.has_value());
}

TEST(Physics, DisplacementAndFidelityAtGenerationTime) {
    const SystemParams p = cat_params();
    const auto sol = analytic::RwaSolution::from(p);
    const double ts = sol.eff.t_peak;
    closed::IntegratorConfig cfg;
    cfg.anchor_time = ts;
    const auto s = closed::evolve(p, cfg, ts);
    EXPECT_NEAR(closed::mean_excitation_numeric(s), 4.0, 0.08);
    EXPECT_GT(closed::fidelity_vs_rwa(s, sol), 0.99);
    const auto c = closed::condition_on_qubit(s);
    EXPECT_NEAR(c.p_plus, 0.5, 0.02);
    const auto f = closed::fidelity_vs_cat(s, analytic::alpha_t(sol, ts));
    EXPECT_GT(*f.plus, 0.98);
    EXPECT_GT(*f.minus, 0.98);
}

TEST(Physics, SmallResonatorFrequencyDegradesDisplacement) {
    const SystemParams p = cat_params(30.0);
    const double ts = model::effective_params(p).t_peak;
    closed::IntegratorConfig cfg;
    cfg.anchor_time = ts;
    const auto s = closed::evolve(p, cfg, ts);
    EXPECT_GT(std::abs(closed::mean_excitation_numeric(s) - 4.0), 0.08);
}

TEST(Config, MethodNamesRoundTrip) {
    for (auto m : {closed::Method::lab_rk4, closed::Method::drive_frame_rk4}) {
        EXPECT_EQ(closed::method_from_string(closed::to_string(m)), m);
    }
    EXPECT_THROW(closed::method_from_string("euler"), std::invalid_argument);
}
