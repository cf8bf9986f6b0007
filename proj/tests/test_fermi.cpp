#include <gtest/gtest.h>

#include "hubbard/fermi.hpp"

using namespace hubbard;

TEST(Fermi, SoftAndHardRootsSolveTheQuadratic) {
    for (double T : {-1.0, 0.3, 1.0}) {
        auto m = soft_hard_modes(0.2, 1.0, T);
        for (double x : {m.soft, m.hard}) EXPECT_NEAR(x * x - 1.0 * x - 0.04 * T * T, 0.0, 1e-15);
    }
    auto tiny = soft_hard_modes(1e-6, 1.0, 1.0);
    EXPECT_NEAR(tiny.soft / -1e-12, 1.0, 1e-9);
}

TEST(Fermi, GroundStateIsPure) {
    auto spec = LatticeSpec::cubic(2, 8, 0.3, 1.0);
    auto grid = momentum_grid(spec);
    auto c = ground_correlators_fermi(spec, grid);
    for (const auto& m : c.modes) EXPECT_NEAR(std::abs(conserved_fermi_bilinear(m)), 0.0, 1e-15);
    EXPECT_NEAR(c.double_occupancy, c.empty_occupancy, 1e-15);
}

TEST(Fermi, OddPeriodicExtentIsRejected) {
    auto spec = LatticeSpec::chain(7, 0.1, 1.0);
    EXPECT_FALSE(is_bipartite(spec));
    EXPECT_THROW(ground_correlators_fermi(spec, momentum_grid(spec)), domain_error);
    EXPECT_TRUE(is_bipartite(LatticeSpec::chain(7, 0.1, 1.0, Boundary::open)));
}

// The RK4 solution of the full mode system is the oracle for the closed form.
TEST(Fermi, ClosedFormQuenchMatchesOde) {
    auto spec = LatticeSpec::chain(16, 0.4, 1.0);
    auto grid = momentum_grid(spec);
    auto ode = evolve_charge_modes(spec, grid, neel_state(grid), sudden_ramp(spec.J), std::nullopt, 6.0);
    auto closed = quench_correlators_fermi(spec, grid, 6.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_NEAR(std::abs(ode.state.modes[i].f1B1B - closed.modes[i].f1B1B), 0.0, 1e-9);
        EXPECT_NEAR(std::abs(ode.state.modes[i].f1B0A - closed.modes[i].f1B0A), 0.0, 1e-9);
        EXPECT_NEAR(std::abs(ode.state.modes[i].f0A1B - closed.modes[i].f0A1B), 0.0, 1e-9);
    }
    EXPECT_EQ(ode.max_sourceless, 0.0);
    EXPECT_LT(ode.max_drift, 1e-10);
}

TEST(Fermi, QuasiEquilibriumIsTheTimeAverage) {
    double J = 0.3, U = 1.0, T = 0.8, w = omega_fermi(J, U, T);
    double period = 2.0 * std::numbers::pi / w, d = 0.0, c = 0.0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
        auto m = quench_mode_fermi(J, U, T, period * (i + 0.5) / n);
        d += m.f1B1B.real();
        c += m.f1B0A.real();
    }
    EXPECT_NEAR(d / n, 2.0 * J * J * T * T / (w * w), 1e-12);
    EXPECT_NEAR(c / n, J * T * U / (w * w), 1e-12);
}

TEST(Fermi, DoubleOccupancyStaysBoundedAfterQuench) {
    auto spec = LatticeSpec::cubic(2, 8, 0.5, 1.0);
    auto grid = momentum_grid(spec);
    for (double t : {0.5, 3.0, 20.0}) {
        auto c = quench_correlators_fermi(spec, grid, t);
        EXPECT_GE(c.double_occupancy, 0.0);
        EXPECT_LE(c.double_occupancy, 0.5);
    }
}

// Rescaling the middle component by sqrt2 symmetrises the generator, so the flow is unitary.
TEST(Fermi, ChargeGeneratorIsSymmetrisable) {
    auto G = fermi_charge_generator(0.3, 1.0, 0.7);
    Eigen::Matrix3cd S = Eigen::Matrix3cd::Identity();
    S(1, 1) = std::sqrt(2.0);
    Eigen::Matrix3cd H = S * G * S.inverse();
    EXPECT_NEAR((H - H.adjoint()).norm(), 0.0, 1e-15);
}

TEST(Fermi, CheckerboardSeparatesNeighbours) {
    for (auto spec : {LatticeSpec::chain(6, 0.1, 1.0), LatticeSpec::cubic(2, 4, 0.1, 1.0), LatticeSpec::cubic(3, 4, 0.1, 1.0),
                      LatticeSpec::chain(5, 0.1, 1.0, Boundary::open)})
        EXPECT_TRUE(StaggeredField::checkerboard(spec, 0.2).consistent_with(spec));
}

TEST(Fermi, StaggeredFrequenciesReduceAtZeroAmplitude) {
    for (double T : {0.0, 0.5, -1.0}) {
        auto s = staggered_frequencies(0.2, 1.0, 0.0, T);
        auto m = soft_hard_modes(0.2, 1.0, T);
        EXPECT_NEAR(s.soft.soft, m.soft, 1e-15);
        EXPECT_NEAR(s.soft.hard, m.hard, 1e-15);
        EXPECT_NEAR(s.charge, omega_fermi(0.2, 1.0, T), 1e-15);
    }
    EXPECT_THROW(staggered_frequencies(0.2, 1.0, -0.1, 0.5), domain_error);
}

TEST(Fermi, DiracModeWithoutFieldStaysPut) {
    auto spec = LatticeSpec::chain(8, 0.2, 1.0);
    auto d = integrate_dirac_mode(spec, PulseProfile::sauter(0.0, 2.0), {0.7});
    EXPECT_LT(std::norm(d.beta), 1e-20);
    EXPECT_LT(d.normalization_residual, 1e-10);
}

TEST(Fermi, DiracPairCreationIsNormalisedAndGrowsWithField) {
    auto spec = LatticeSpec::chain(16, 0.3, 1.0);
    auto grid = momentum_grid(spec);
    double lo = dirac_pair_creation(spec, PulseProfile::sauter(0.1, 3.0), grid).double_occupancy;
    double hi = dirac_pair_creation(spec, PulseProfile::sauter(0.3, 3.0), grid).double_occupancy;
    EXPECT_GT(hi, lo);
    EXPECT_LE(hi, 1.0);
    auto k0 = gap_minimum_point(1);
    EXPECT_NEAR(structure_factor(spec, k0), 0.0, 1e-15);
}
