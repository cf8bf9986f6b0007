#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "hubbard/lattice.hpp"

using namespace hubbard;

TEST(Lattice, StructureFactorAveragesCosines) {
    std::vector<double> k{0.3, -1.1, 2.0};
    EXPECT_NEAR(structure_factor(3, k), (std::cos(0.3) + std::cos(1.1) + std::cos(2.0)) / 3.0, 1e-15);
    std::vector<double> zero{0.0, 0.0};
    EXPECT_DOUBLE_EQ(structure_factor(2, zero), 1.0);
}

TEST(Lattice, GradientMatchesFiniteDifference) {
    std::vector<double> k{0.4, 1.3};
    auto g = structure_gradient(k);
    for (std::size_t a = 0; a < k.size(); ++a) {
        auto kp = k, km = k;
        kp[a] += 1e-6;
        km[a] -= 1e-6;
        EXPECT_NEAR(g[a], (structure_factor(2, kp) - structure_factor(2, km)) / 2e-6, 1e-9);
    }
}

TEST(Lattice, SiteIndexRoundTrip) {
    std::vector<int> extent{3, 4, 5};
    for (std::size_t i = 0; i < 60; ++i) {
        auto x = site_coords(extent, i);
        EXPECT_EQ(site_index(extent, x), i);
    }
}

TEST(Lattice, NeighbourCounts) {
    EXPECT_EQ(neighbors(LatticeSpec::chain(2, 0.1, 1.0), 0).size(), 1u);
    EXPECT_EQ(neighbors(LatticeSpec::chain(5, 0.1, 1.0), 0).size(), 2u);
    EXPECT_EQ(neighbors(LatticeSpec::chain(5, 0.1, 1.0, Boundary::open), 0).size(), 1u);
    EXPECT_EQ(neighbors(LatticeSpec::cubic(2, 4, 0.1, 1.0), 5).size(), 4u);
    EXPECT_EQ(bonds(LatticeSpec::chain(7, 0.1, 1.0)).size(), 7u);
    EXPECT_EQ(bonds(LatticeSpec::chain(7, 0.1, 1.0, Boundary::open)).size(), 6u);
    EXPECT_EQ(bonds(LatticeSpec::cubic(2, 3, 0.1, 1.0)).size(), 18u);
}

TEST(Lattice, AdjacencyIsSymmetricWithCoordinationRows) {
    auto spec = LatticeSpec::cubic(2, 4, 0.1, 1.0);
    auto T = adjacency(spec);
    EXPECT_EQ(T, T.transpose());
    for (Eigen::Index i = 0; i < T.rows(); ++i) EXPECT_EQ(T.row(i).sum(), spec.coordination());
}

TEST(Lattice, GridWeightsAndNegation) {
    MomentumGrid g({4, 6});
    EXPECT_EQ(g.size(), 24u);
    EXPECT_DOUBLE_EQ(g.weight() * g.size(), 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_EQ(g.negated(g.negated(i)), i);
        auto k = g.point(i), q = g.point(g.negated(i));
        for (std::size_t a = 0; a < 2; ++a) EXPECT_NEAR(std::cos(k[a]), std::cos(q[a]), 1e-14);
        for (double c : g.centered(i)) {
            EXPECT_GT(c, -std::numbers::pi - 1e-12);
            EXPECT_LE(c, std::numbers::pi + 1e-12);
        }
    }
}

TEST(Lattice, FourierOfConstantIsKronecker) {
    MomentumGrid g({6, 4});
    std::vector<double> ones(g.size(), 1.0);
    for (int sx = 0; sx < 6; ++sx)
        for (int sy = 0; sy < 4; ++sy) {
            std::vector<int> s{sx, sy};
            EXPECT_NEAR(std::abs(g.fourier(ones, s)), (sx == 0 && sy == 0) ? 1.0 : 0.0, 1e-14);
        }
}

TEST(Lattice, FourierInvertsPlaneWave) {
    MomentumGrid g({8});
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<cplx> v(g.size());
    for (auto& x : v) x = {u(rng), u(rng)};
    // direct double sum as the oracle
    for (int s = 0; s < 8; ++s) {
        cplx direct = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) direct += v[i] * std::exp(cplx(0, g.point(i)[0] * s));
        std::vector<int> d{s};
        EXPECT_NEAR(std::abs(g.fourier(v, d) - direct / 8.0), 0.0, 1e-14);
    }
}

TEST(Lattice, OpenBoundaryHasNoGrid) {
    EXPECT_THROW(momentum_grid(LatticeSpec::chain(4, 0.1, 1.0, Boundary::open)), domain_error);
}

TEST(Lattice, ValidationRejectsBadInput) {
    EXPECT_THROW(LatticeSpec::chain(4, -0.1, 1.0).validate(), domain_error);
    EXPECT_THROW(LatticeSpec::chain(4, 0.1, 0.0).validate(), domain_error);
    EXPECT_THROW(LatticeSpec::chain(0, 0.1, 1.0).validate(), domain_error);
    EXPECT_THROW(boundary_from_string("twisted"), domain_error);
}

TEST(Lattice, StiffnessMatchesSmallKExpansion) {
    for (int d : {1, 2, 3}) {
        LatticeSpec s = LatticeSpec::cubic(d, 4, 0.1, 1.0);
        std::vector<double> k(static_cast<std::size_t>(d), 1e-3);
        double k2 = d * 1e-6;
        EXPECT_NEAR((1.0 - structure_factor(s, k)) / k2, stiffness(s), 1e-6);
    }
}
