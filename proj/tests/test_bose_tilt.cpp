#include <gtest/gtest.h>

#include "hubbard/bose_tilt.hpp"

using namespace hubbard;

TEST(BoseTilt, WindowProfileVanishesAtEdgesAndPeaksAtCentre) {
    EXPECT_EQ(PulseProfile::window_profile(0.0), 0.0);
    EXPECT_EQ(PulseProfile::window_profile(5.0), 0.0);
    EXPECT_NEAR(PulseProfile::window_profile(2.5), 1.0, 1e-15);
    EXPECT_NEAR(PulseProfile::window_profile(1e-9), 0.0, 1e-8);
}

// The vector potential must integrate the field; checked by Simpson quadrature.
TEST(BoseTilt, PotentialIntegratesField) {
    for (auto p : {PulseProfile::sauter(0.3, 2.0), PulseProfile::window(0.3, 2.0), PulseProfile::constant(0.3, 2.0)}) {
        double a = p.begin(), b = p.end();
        int n = 20000;
        double h = (b - a) / n, s = p.field(a) + p.field(b);
        for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * p.field(a + i * h);
        EXPECT_NEAR(s * h / 3.0, p.potential(b) - p.potential(a), 1e-6);
    }
}

TEST(BoseTilt, CustomPulseInterpolatesSamples) {
    std::vector<double> t, A;
    for (int i = 0; i <= 200; ++i) {
        t.push_back(-10.0 + 0.1 * i);
        A.push_back(0.2 * std::tanh(t.back()));
    }
    auto p = PulseProfile::custom(t, A);
    EXPECT_NEAR(p.potential(0.33), 0.2 * std::tanh(0.33), 1e-5);
    EXPECT_NEAR(p.field(0.33), 0.2 / std::pow(std::cosh(0.33), 2), 1e-3);
}

TEST(BoseTilt, EffectiveParamsAtZeroHopping) {
    auto p = effective_params(LatticeSpec::chain(8, 0.0, 1.0));
    EXPECT_EQ(p.light_speed_sq, 0.0);
    EXPECT_NEAR(p.rest_energy(), 0.5, 1e-15);
    EXPECT_THROW(effective_params(LatticeSpec::chain(8, 0.2, 1.0)), domain_error);
}

TEST(BoseTilt, LongSauterPulseApproachesStaticLimit) {
    auto spec = LatticeSpec::chain(8, 0.1, 1.0);
    auto p = effective_params(spec);
    double E0 = 0.05, tau = 400.0 / p.rest_energy();
    EXPECT_NEAR(sauter_beta_exact(0.0, 0.0, E0, tau, p) / sauter_infinite(0.0, E0, p), 1.0, 2e-2);
}

TEST(BoseTilt, StaticLatticeWithoutCorrectionsIsScalarLimit) {
    auto spec = LatticeSpec::cubic(3, 8, 0.05, 1.0);
    auto p = effective_params(spec);
    for (double E0 : {0.02, 0.1})
        for (double kp : {0.0, 0.3})
            EXPECT_NEAR(static_beta_lattice(kp, E0, spec, false), sauter_infinite(kp, E0, p), 1e-15);
}

TEST(BoseTilt, ZeroFieldCreatesNoPairs) {
    auto spec = LatticeSpec::chain(8, 0.1, 1.0);
    auto pulse = PulseProfile::sauter(0.0, 2.0);
    auto b = integrate_ph_modes(spec, pulse, {0.4});
    EXPECT_LT(std::norm(b.beta), 1e-20);
    EXPECT_NEAR(std::norm(b.alpha), 1.0, 1e-9);
    EXPECT_EQ(sauter_beta_exact(0.3, 0.0, 0.0, 2.0, effective_params(spec)), 0.0);
}

TEST(BoseTilt, BogoliubovNormalisationHolds) {
    auto spec = LatticeSpec::chain(8, 0.1, 1.0);
    for (double k : {0.0, 1.0, 2.5}) {
        auto b = integrate_ph_modes(spec, PulseProfile::sauter(0.2, 3.0), {k});
        EXPECT_LT(b.normalization_residual, 1e-8);
        EXPECT_GT(std::norm(b.beta), 0.0);
    }
}

TEST(BoseTilt, RampProjectionAgreesWithEigenbasis) {
    auto spec = LatticeSpec::chain(8, 0.05, 1.0);
    auto pulse = PulseProfile::sauter(0.3, 1.0);
    TiltOptions ramp;
    ramp.projection = Projection::ramp;
    ramp.ramp_time = 60.0;
    auto a = integrate_ph_modes(spec, pulse, {0.5});
    auto b = integrate_ph_modes(spec, pulse, {0.5}, ramp);
    EXPECT_LT(b.diabatic_residual, 1e-6);
    EXPECT_NEAR(std::norm(a.beta), std::norm(b.beta), 1e-4 * std::norm(a.beta) + 2e-6);
}

TEST(BoseTilt, WeakFieldRateIsQuadratic) {
    auto spec = LatticeSpec::chain(16, 0.1, 1.0);
    auto grid = momentum_grid(spec);
    double r1 = pair_creation_rate(spec, PulseProfile::window(1e-3, 1.0), grid).rate;
    double r2 = pair_creation_rate(spec, PulseProfile::window(2e-3, 1.0), grid).rate;
    EXPECT_GT(r1, 0.0);
    EXPECT_NEAR(r2 / r1, 4.0, 4e-2);
}

TEST(BoseTilt, RateUsesLatticeSiteCount) {
    auto spec = LatticeSpec::chain(10, 0.1, 1.0);
    auto grid = momentum_grid(spec);
    auto r = pair_creation_rate_sauter(spec, 0.2, 2.0, grid);
    EXPECT_NEAR(r.rate, 2.0 * 10 * r.density / 2.0, 1e-15);
}
