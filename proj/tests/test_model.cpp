#include <cmath>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "catsim/model.hpp"

using namespace catsim;
using model::Coupling;
using model::SystemParams;

TEST(Effective, HarmonicIndexRounding) {
    SystemParams p;
    p.xi = 1.5271;
    p.omega_r = 200.0;
    for (double w0 : {100.0, 99.5, 100.4, 81.0, 133.0}) {
        p.omega_0 = w0;
        const auto e = model::effective_params(p);
        EXPECT_EQ(e.n_0, static_cast<int>(std::floor(200.0 / (2 * w0) + 0.5)));
        EXPECT_NEAR(e.delta, 200.0 - 2 * e.n_0 * w0, 1e-12);
        EXPECT_LE(std::abs(e.delta), w0 + 1e-12);
    }
    // Exactly half-way rounds away from zero.
    p.omega_0 = 80.0;
    EXPECT_EQ(model::effective_params(p).n_0, 1);
    p.omega_0 = 40.0;
    EXPECT_EQ(model::effective_params(p).n_0, 3);
}

TEST(Effective, CouplingAtFirstBesselPeak) {
    SystemParams p;
    p.xi = 1.5271;
    p.omega_0 = 100.0;
    const auto e = model::effective_params(p);
    EXPECT_EQ(e.n_0, 1);
    EXPECT_NEAR(e.g, 0.48649868, 1e-7);
    EXPECT_DOUBLE_EQ(e.delta, 0.0);
    EXPECT_TRUE(e.resonant());
    EXPECT_TRUE(std::isinf(e.alpha_max));
}

TEST(Effective, DetunedDriveFrequency) {
    SystemParams p;
    p.xi = 1.5271;
    p.omega_0 = model::drive_frequency_for_detuning(p.omega_r, p.g_0, p.xi, 1, 1.0, Coupling::sigma_z_displacement);
    const auto e = model::effective_params(p);
    EXPECT_EQ(e.n_0, 1);
    EXPECT_NEAR(e.delta, e.g, 1e-12);
    EXPECT_NEAR(e.alpha_max, 2.0, 1e-12);
    EXPECT_NEAR(e.t_peak, kPi / e.g, 1e-12);
}

TEST(Effective, JaynesCummingsVariant) {
    SystemParams p;
    p.coupling = Coupling::jaynes_cummings;
    p.xi = 1.0;
    p.omega_0 = 200.0 / 3.0;
    const auto e = model::jc_effective_params(p);
    EXPECT_EQ(e.n_0, 2);
    EXPECT_NEAR(e.delta, 0.0, 1e-12);
    EXPECT_NEAR(e.g, 0.5 * std::cyl_bessel_j(3.0, 2.0), 1e-14);
    EXPECT_THROW(model::effective_params(p), std::invalid_argument);
    EXPECT_NO_THROW(model::resolve_effective(p));
    p.coupling = Coupling::sigma_z_displacement;
    EXPECT_THROW(model::jc_effective_params(p), std::invalid_argument);
}

TEST(Validity, RatiosAndThreshold) {
    SystemParams p;
    p.xi = 1.5271;
    p.omega_0 = 100.0;
    auto r = model::rwa_validity(p, model::effective_params(p));
    EXPECT_NEAR(r.g0_over_omega_r, 0.005, 1e-15);
    EXPECT_NEAR(r.g0_over_omega_0, 0.01, 1e-15);
    EXPECT_TRUE(r.pass);
    p.omega_r = 30.0;
    p.omega_0 = 15.0;
    r = model::rwa_validity(p, model::effective_params(p));
    EXPECT_NEAR(r.max_ratio(), 1.0 / 15.0, 1e-15);
    EXPECT_FALSE(r.pass);
}

TEST(Params, ValidationRejectsBadValues) {
    SystemParams p;
    EXPECT_NO_THROW(p.validate());
    p.omega_r = -1.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = {};
    p.kappa_r = -0.1;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    EXPECT_EQ(model::coupling_from_string(model::to_string(Coupling::jaynes_cummings)), Coupling::jaynes_cummings);
    EXPECT_THROW(model::coupling_from_string("nope"), std::invalid_argument);
}

TEST(Hamiltonian, HermitianAndMatchesHandBuiltMatrix) {
    SystemParams p;
    p.omega_q = 0.3;
    p.xi = 1.2;
    p.omega_0 = 97.0;
    const int n_d = 6, n = n_d + 1;
    for (double t : {0.0, 0.013, 1.7}) {
        const CMat h = model::hamiltonian_matrix(p, t, n_d);
        EXPECT_LT((h - h.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
        CMat ref = CMat::Zero(2 * n, 2 * n);
        const double drive = p.xi * p.omega_0 * std::cos(p.omega_0 * t);
        for (int m = 0; m < n; ++m) {
            ref(m, m) = 0.5 * p.omega_q + p.omega_r * m;
            ref(n + m, n + m) = -0.5 * p.omega_q + p.omega_r * m;
            ref(m, n + m) = ref(n + m, m) = drive;
            if (m + 1 < n) {
                const double s = std::sqrt(m + 1.0);
                ref(m, m + 1) = ref(m + 1, m) = p.g_0 * s;
                ref(n + m, n + m + 1) = ref(n + m + 1, n + m) = -p.g_0 * s;
            }
        }
        EXPECT_LT((h - ref).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Hamiltonian, JaynesCummingsConservesExcitations) {
    SystemParams p;
    p.coupling = Coupling::jaynes_cummings;
    p.xi = 0.0;
    const int n_d = 5, n = n_d + 1;
    const CMat h = model::hamiltonian_matrix(p, 0.0, n_d);
    // Excitation number: qubit |0> counts one.
    for (int i = 0; i < 2 * n; ++i) {
        for (int j = 0; j < 2 * n; ++j) {
            const int ei = (i < n) ? i + 1 : i - n;
            const int ej = (j < n) ? j + 1 : j - n;
            if (ei != ej) EXPECT_EQ(h(i, j), cplx(0.0)) << i << "," << j;
        }
    }
}

TEST(DriveFrame, TransformedHamiltonianMatchesDenseConjugation) {
    for (Coupling c : {Coupling::sigma_z_displacement, Coupling::sigma_x_displacement, Coupling::jaynes_cummings}) {
        SystemParams p;
        p.coupling = c;
        p.xi = 1.3;
        p.omega_0 = 90.0;
        const int n_d = 5, n = n_d + 1;
        const double t = 0.37;
        // Dense V = exp{-i[xi sin(w0 t) S + w_r t a^dag a]} by matrix exponential.
        const Mat2 axis = (c == Coupling::sigma_x_displacement) ? ops::pauli_z() : ops::pauli_x();
        CMat gen = CMat::Zero(2 * n, 2 * n);
        for (int m = 0; m < n; ++m) {
            for (int r = 0; r < 2; ++r) {
                for (int q = 0; q < 2; ++q) gen(r * n + m, q * n + m) += p.xi * std::sin(p.omega_0 * t) * axis(r, q);
                gen(r * n + m, r * n + m) += p.omega_r * t * m;
            }
        }
        const CMat v = (-kI * gen).exp();
        CMat applied = CMat::Identity(2 * n, 2 * n);
        model::apply_frame(model::DriveFrame::at(p, t), n, applied);
        EXPECT_LT((applied - v).cwiseAbs().maxCoeff(), 1e-12);
        SystemParams no_drive = p;
        no_drive.xi = 0.0;
        no_drive.omega_r = 1e-300;  // removes omega_r a^dag a from the dense H
        const CMat h_int = model::hamiltonian_matrix(no_drive, t, n_d);
        const CMat expected = v.adjoint() * h_int * v;
        const CMat got = ops::dense(model::frame_hamiltonian_terms(p, t), n, false);
        EXPECT_LT((got - expected).cwiseAbs().maxCoeff(), 1e-12) << model::to_string(c);
    }
}
