#include "gravent/dp_model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace gravent;

namespace {

ExperimentConfig random_config(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> lm(std::log(1e-16), std::log(1e-4));
    std::uniform_real_distribution<double> sep(2.2, 50.0);
    std::uniform_real_distribution<double> dxr(0.0, 50.0);
    return make_scaled(std::exp(lm(gen)), 0.0, sep(gen), dxr(gen));
}

double max_abs(const Matrix4c& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST(EG, Examples) {
    const double M = 1e-14, R = 7e-7, G = PhysicalConstants{}.G;
    const double scale = 6.0 * G * M * M / (5.0 * R);
    EXPECT_EQ(e_g(M, R, 0.0), 0.0);
    EXPECT_NEAR(e_g(M, R, 2.0 * R) / scale, 7.0 / 12.0, 1e-15);
    EXPECT_NEAR(e_g(M, R, 2e12 * R) / scale, 1.0, 1e-11);
}

TEST(EG, ContinuousAtLambdaOne) {
    const double M = 1e-5, R = 7e-4;
    const double below = e_g(M, R, std::nextafter(2.0 * R, 0.0));
    const double above = e_g(M, R, std::nextafter(2.0 * R, 1.0));
    EXPECT_NEAR(below / above, 1.0, 1e-12);
}

TEST(EG, MonotoneAndBounded) {
    const double M = 1.0, R = 1.0, G = 1.0;
    const double cap = 6.0 * G * M * M / (5.0 * R);
    double prev = 0.0;
    for (int k = 1; k <= 2000; ++k) {
        const double v = e_g(M, R, 0.01 * k, G);
        EXPECT_GE(v, prev);
        EXPECT_LE(v, cap);
        prev = v;
    }
}

TEST(EG, Errors) {
    EXPECT_THROW(e_g(0.0, 1.0, 1.0), std::domain_error);
    EXPECT_THROW(e_g(1.0, 0.0, 1.0), std::domain_error);
    EXPECT_THROW(e_g(1.0, 1.0, -1.0), std::domain_error);
}

TEST(DPDensity, InitialState) {
    const auto rho = dp_density_matrix(make_scaled(1e-14, 0.0, 10.0, 10.0), 0.0);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) EXPECT_EQ(rho(r, c), cplx(0.25, 0.0));
    EXPECT_THROW(dp_density_matrix(make_scaled(1e-14, 0.0, 10.0, 10.0), -1.0), std::domain_error);
}

TEST(DPDensity, NoDecoherenceLimitIsUnitaryPhases) {
    const auto cfg = make_scaled(1e-14, 2.0, 10.0, 10.0);
    auto p = dp_parameters(cfg);
    Vector4c psi;
    for (auto bp : all_pairs) psi(bp.index()) = 0.5 * std::exp(-I * (p.u(bp) * cfg.t));
    const Matrix4c pure = psi * psi.adjoint();
    double prev = std::numeric_limits<double>::infinity();
    for (double s : {1e-2, 1e-4, 1e-6, 0.0}) {
        p.decoherence_scale = s;
        const double dev = max_abs(dp_density_matrix(p, cfg.t).matrix() - pure);
        EXPECT_LT(dev, prev);
        prev = dev;
    }
    EXPECT_LT(prev, 1e-15);
}

TEST(DPDensity, PhasesMatchNewtonianPhases) {
    auto cfg = make_scaled(1e-14, 0.3, 10.0, 10.0);
    const auto p = dp_parameters(cfg);
    for (auto bp : all_pairs) EXPECT_NEAR(p.u(bp) * cfg.t, phase_nonrel(cfg, bp), 1e-14);
}

TEST(DPDensity, PhysicalOverRandomSweep) {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> ls(std::log(1e-4), std::log(1e3));
    for (int k = 0; k < 1000; ++k) {
        const auto cfg = random_config(gen);
        const auto p = dp_parameters(cfg);
        const double rate = std::max({p.E_G1 / p.hbar, p.u(RL), 1e-300});
        const double t = std::exp(ls(gen)) / rate;
        const auto rho = dp_density_matrix(p, t);
        EXPECT_TRUE(rho.is_psd()) << "min eigenvalue " << rho.eigenvalues().minCoeff();
        EXPECT_NEAR(std::abs(rho.matrix().trace() - 1.0), 0.0, 1e-12);
        EXPECT_LE(DensityMatrix4::hermiticity_defect(rho.matrix()), 1e-15);
    }
}

TEST(DPDensity, CoherencesDecayMonotonically) {
    std::mt19937_64 gen(43);
    for (int k = 0; k < 50; ++k) {
        const auto p = dp_parameters(random_config(gen));
        const double tau = p.hbar / std::max(p.E_G1, 1e-300);
        Matrix4c prev = dp_density_matrix(p, 0.0).matrix();
        for (int s = 1; s <= 40; ++s) {
            const Matrix4c cur = dp_density_matrix(p, 0.1 * s * tau).matrix();
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) EXPECT_LE(std::abs(cur(r, c)), std::abs(prev(r, c)) * (1 + 1e-15));
            prev = cur;
        }
    }
}

TEST(DPDensity, FirstOrderDeviationScalesAsTSquared) {
    const auto cfg = make_scaled(1e-14, 0.0, 10.0, 10.0);
    const auto p = dp_parameters(cfg);
    const double t = 1e-5 * p.hbar / p.E_G1;
    const double e1 = max_abs(dp_density_matrix(p, t).matrix() - dp_first_order(p, t));
    const double e2 = max_abs(dp_density_matrix(p, 2.0 * t).matrix() - dp_first_order(p, 2.0 * t));
    EXPECT_NEAR(e2 / e1, 4.0, 0.1);
}

TEST(DPDensity, FarLimitForm) {
    const auto cfg = make_scaled(1e-14, 0.0, 10.0, 10.0);
    auto p = dp_parameters(cfg);
    p.U = {0.0, 0.0, p.u(RL), 0.0};
    for (double t : {1e-4, 1e-2, 0.5}) {
        const Matrix4c far = dp_far_limit(p.E_G1, p.u(RL), p.hbar, t);
        EXPECT_LT(max_abs(dp_density_matrix(p, t).matrix() - far), 1e-15);
    }
}

TEST(DPDensity, NoEntanglementAtFirstOrder) {
    const auto cfg = make_scaled(1e-14, 0.0, 10.0, 10.0);
    const auto p = dp_parameters(cfg);
    const double t = 1e-4 / (p.E_G1 / p.hbar + p.E_G2 / p.hbar);
    EXPECT_LT(negativity(dp_density_matrix(p, t)), 1e-8);
}

TEST(DPCondition, ZeroTime) {
    const auto c = dp_entanglement_condition(make_scaled(1e-5, 1.0, 10.0, 10.0), 0.0);
    EXPECT_EQ(c.kappa4_mag, 0.0);
    EXPECT_EQ(c.sigma_g, 0.0);
    EXPECT_FALSE(c.entangling);
}

TEST(DPCondition, DecoherenceExceedsPhase) {
    std::mt19937_64 gen(47);
    std::uniform_real_distribution<double> lm(std::log(1e-16), std::log(1e-3));
    std::uniform_real_distribution<double> dxr(2.0, 1e3);
    for (int k = 0; k < 200; ++k) {
        const auto cfg = make_scaled(std::exp(lm(gen)), 1.0, 10.0, dxr(gen));
        EXPECT_GE(dp_parameters(cfg).sigma_g(cfg.t), phase_nonrel(cfg, RL));
    }
}

TEST(DPCondition, ThresholdMatchesAnalyticInversion) {
    // |kappa4| = a^2 t^2 and sigma_G = (E_G / hbar) t cross at t = E_G / (hbar a^2).
    for (double m : {planck_mass, 1e-5, 1e-3}) {
        const auto cfg = make_scaled(m, 1.0, 10.0, 10.0);
        const double a = std::sqrt(std::abs(kappa4_closed(cfg, RL))) / cfg.t;
        const double want = dp_parameters(cfg).E_G1 / (cfg.constants.hbar * a * a);
        const auto got = dp_threshold_time(cfg);
        ASSERT_TRUE(got.has_value());
        EXPECT_NEAR(*got / want, 1.0, 1e-10);
        EXPECT_FALSE(dp_entanglement_condition(cfg, 0.5 * want).entangling);
        EXPECT_TRUE(dp_entanglement_condition(cfg, 2.0 * want).entangling);
    }
}

TEST(DPCondition, ThresholdOutsideBracket) {
    const auto cfg = make_scaled(1e-20, 1.0, 10.0, 10.0);
    EXPECT_FALSE(dp_threshold_time(cfg, 1e-40, 1e-30).has_value());
}
