#include <gtest/gtest.h>

#include "hubbard/bose_z2.hpp"

using namespace hubbard;

TEST(BoseZ2, RenormalisationReducesToFirstOrder) {
    EXPECT_DOUBLE_EQ(omega_renormalized(LatticeSpec::chain(8, 0.1, 1.0), 0.0, 0.5).omega_sq,
                     omega_bose(0.1, 1.0, 0.5).omega_sq);
    EXPECT_NEAR(j_critical_renormalized(1.0, 0.0), j_critical(1.0), 1e-15);
    EXPECT_GT(j_critical_renormalized(1.0, 0.05), j_critical(1.0));
    EXPECT_THROW(omega_renormalized(LatticeSpec::chain(8, 0.1, 1.0), 0.4, 0.5), domain_error);
}

// Brute-force double momentum sums are the oracle for the factorised correlators.
TEST(BoseZ2, PairCorrelationsMatchDoubleSums) {
    auto spec = LatticeSpec::chain(10, 0.12, 1.0);
    auto grid = momentum_grid(spec);
    for (const auto& c : {ground_correlators(spec, grid), quench_correlators(spec, grid, 1.7)}) {
        for (int s : {1, 2, 4}) {
            cplx n = 0.0, p = 0.0;
            for (std::size_t a = 0; a < grid.size(); ++a)
                for (std::size_t b = 0; b < grid.size(); ++b) {
                    cplx ph = std::exp(cplx(0, (grid.point(a)[0] + grid.point(b)[0]) * s));
                    const auto& x = c.modes[a];
                    const auto& y = c.modes[b];
                    n += 2.0 * (x.f11 * y.f11 - x.f12 * y.f21) * ph;
                    p += 8.0 * (x.f11 * y.f11 + x.f12 * y.f21) * ph;
                }
            double w = grid.weight() * grid.weight();
            auto d = axis_displacement(1, s);
            EXPECT_NEAR(number_correlation(c, grid, d), (n * w).real(), 1e-13);
            EXPECT_NEAR(parity_correlation(c, grid, d), (p * w).real(), 1e-13);
        }
    }
}

TEST(BoseZ2, ParityLeadingOrder) {
    auto spec = LatticeSpec::chain(256, 1e-3, 1.0);
    auto grid = momentum_grid(spec);
    double f = parity_correlation(ground_correlators(spec, grid), grid, axis_displacement(1, 1));
    EXPECT_NEAR(f / (16.0 * std::pow(1e-3 / 2.0, 2)), 1.0, 1e-2);
    EXPECT_NEAR(parity_series(1, 2, 1e-3) / (16.0 * std::pow(1e-3 / 2.0, 2)), 1.0, 1e-4);
}

TEST(BoseZ2, QuarticCoefficientIsConsistent) {
    for (int Z : {2, 4, 6})
        for (double x : {0.01, 0.02}) {
            double quad = 8.0 * 2.0 * std::pow(x / Z, 2);
            EXPECT_NEAR(parity_series(1, Z, x) - quad, parity_series_quartic(1, Z) * std::pow(x, 4), 1e-15);
        }
}

TEST(BoseZ2, ParityMaximumInsideMottPhase) {
    auto spec = LatticeSpec::chain(128, 0.0, 1.0);
    auto grid = momentum_grid(spec);
    double Jmax = parity_maximum_coupling(spec, grid, axis_displacement(1, 1));
    EXPECT_GT(Jmax, 0.0);
    EXPECT_LT(Jmax, j_critical(1.0));
    auto f = [&](double J) { return parity_correlation(ground_correlators(with_hopping(spec, J), grid), grid, axis_displacement(1, 1)); };
    EXPECT_GE(f(Jmax), f(0.9 * Jmax));
    EXPECT_GE(f(Jmax), f(std::min(1.05 * Jmax, 0.999 * j_critical(1.0))));
}

TEST(BoseZ2, GroupVelocityIsTheDispersionSlope) {
    auto spec = LatticeSpec::cubic(2, 8, 0.1, 1.0);
    Wavevector k{0.7, -0.4};
    auto v = group_velocity(spec, k);
    auto w = [&](Wavevector q) { return std::sqrt(omega_bose(spec.J, spec.U, structure_factor(spec, q)).omega_sq); };
    for (std::size_t a = 0; a < 2; ++a) {
        auto kp = k, km = k;
        kp[a] += 1e-6;
        km[a] -= 1e-6;
        EXPECT_NEAR(v[a], (w(kp) - w(km)) / 2e-6, 1e-8);
    }
}

TEST(BoseZ2, CorrelationsOutsideLightConeAreSmall) {
    auto spec = LatticeSpec::chain(200, 0.1, 1.0);
    auto grid = momentum_grid(spec);
    double t = 5.0;
    auto cone = light_cone(spec, grid, t, axis_displacement(1, 1));
    EXPECT_TRUE(cone.inside);
    int far = static_cast<int>(std::ceil(4.0 * cone.v_max * t)) + 4;
    auto c = quench_correlators(spec, grid, t);
    EXPECT_FALSE(light_cone(spec, grid, t, axis_displacement(1, far)).inside);
    EXPECT_LT(std::abs(number_correlation(c, grid, axis_displacement(1, far))),
              1e-3 * std::abs(number_correlation(c, grid, axis_displacement(1, 1))));
}
