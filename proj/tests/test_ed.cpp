#include <gtest/gtest.h>

#include <numeric>

#include "hubbard/ed.hpp"

using namespace hubbard;
using namespace hubbard::ed;

namespace {
LatticeSpec ring(int L, double J) { return LatticeSpec::chain(L, J, 1.0); }

// Fock vector translated by one site.
Eigen::VectorXcd translated(const FockBasis& basis, const Eigen::VectorXcd& psi) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
    std::vector<Occupation> t(static_cast<std::size_t>(basis.sites()));
    for (std::size_t s = 0; s < basis.size(); ++s) {
        translate(basis.state(s), t);
        out[static_cast<Eigen::Index>(basis.index(t))] = psi[static_cast<Eigen::Index>(s)];
    }
    return out;
}

double binomial(int n, int k) { return std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)); }
}  // namespace

TEST(EdBasis, DimensionsAndEnumeration) {
    EXPECT_EQ(fock_dimension(9, 9), 24310u);
    EXPECT_EQ(fock_dimension(2, 2), 3u);
    for (int L = 2; L <= 7; ++L) {
        FockBasis basis(L, L);
        EXPECT_EQ(basis.size(), fock_dimension(L, L));
        for (std::size_t i = 0; i < basis.size(); ++i) {
            auto n = basis.state(i);
            EXPECT_EQ(std::accumulate(n.begin(), n.end(), 0), L);
            ASSERT_EQ(basis.index(n), i);
        }
        auto orbits = translation_orbits(basis);
        std::size_t total = 0;
        for (const auto& s : momentum_sectors(orbits, L)) total += s.size();
        EXPECT_EQ(total, basis.size());
    }
}

TEST(EdBasis, TwoSiteSectors) {
    FockBasis basis(2, 2);
    auto sectors = momentum_sectors(translation_orbits(basis), 2);
    EXPECT_EQ(sectors[0].size(), 2u);
    EXPECT_EQ(sectors[1].size(), 1u);
}

TEST(EdBasis, UniformStateOnlyAtZeroMomentum) {
    FockBasis basis(6, 6);
    auto orbits = translation_orbits(basis);
    std::vector<Occupation> ones(6, 1);
    auto r = orbits.orbit_of[basis.index(ones)];
    EXPECT_EQ(orbits.period[r], 1);
    auto sectors = momentum_sectors(orbits, 6);
    EXPECT_GE(sectors[0].position[r], 0);
    for (int K = 1; K < 6; ++K) EXPECT_EQ(sectors[static_cast<std::size_t>(K)].position[r], -1);
}

TEST(EdBasis, BudgetIsEnforced) {
    EXPECT_THROW(FockBasis(12, 12, 1000), budget_error);
    EXPECT_THROW((dense_eigensystem<double>(Eigen::MatrixXd::Identity(20, 20), true, 10)), budget_error);
}

TEST(EdSectors, EigenvectorsCarryTheirMomentum) {
    ChainSystem sys(ring(5, 0.3), 5);
    for (int K : {0, 1, 2}) {
        auto st = lowest_states(sys, K, 1).front();
        Eigen::VectorXcd psi = expand_sector(sys.basis(), sys.orbits(), sys.sector(K), st.vector);
        EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
        cplx phase = std::polar(1.0, sys.sector(K).momentum());
        EXPECT_NEAR((translated(sys.basis(), psi) - phase * psi).norm(), 0.0, 1e-10);
        // H commutes with translations, so H psi stays in the same sector and equals E psi.
        Eigen::VectorXcd Hpsi = fock_hamiltonian(sys.spec(), sys.basis()).cast<cplx>() * psi;
        EXPECT_NEAR((Hpsi - st.energy * psi).norm(), 0.0, 1e-9);
    }
}

TEST(EdSectors, MatricesAreHermitianAndRealWhereExpected) {
    ChainSystem sys(ring(6, 0.2), 6);
    for (int K = 0; K < 6; ++K) {
        Eigen::MatrixXcd H(sys.hamiltonian(K));
        EXPECT_NEAR((H - H.adjoint()).norm(), 0.0, 1e-14);
        if (sys.sector(K).real()) {
            EXPECT_TRUE(is_real(sys.hamiltonian(K), 1e-14));
        }
    }
}

// The plain Fock-space spectrum is the oracle for the momentum-resolved one.
TEST(EdSectors, UnionOfSectorSpectraIsTheFullSpectrum) {
    ChainSystem sys(ring(6, 0.15), 6);
    SpectrumOptions opt;
    opt.moments = false;
    auto spec = full_spectrum(sys, opt);
    std::vector<double> merged;
    for (const auto& s : spec.sectors) merged.insert(merged.end(), s.energies.begin(), s.energies.end());
    std::sort(merged.begin(), merged.end());
    auto fock = dense_eigensystem<double>(Eigen::MatrixXd(fock_hamiltonian(sys.spec(), sys.basis())), false);
    ASSERT_EQ(merged.size(), static_cast<std::size_t>(fock.values.size()));
    for (std::size_t i = 0; i < merged.size(); ++i) EXPECT_NEAR(merged[i], fock.values[static_cast<Eigen::Index>(i)], 1e-12);
}

TEST(EdSolvers, LanczosAgreesWithDense) {
    ChainSystem sys(ring(8, 0.1), 8);
    LanczosOptions opt;
    opt.dense_below = 0;
    auto lz = lowest_states(sys, 0, 3, opt);
    auto dense = dense_eigensystem<double>(Eigen::MatrixXd(sys.hamiltonian(0).real()), false);
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(lz[static_cast<std::size_t>(i)].energy, dense.values[i], 1e-10);
        EXPECT_LT(lz[static_cast<std::size_t>(i)].residual, 1e-8);
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            EXPECT_NEAR(std::abs(lz[static_cast<std::size_t>(i)].vector.dot(lz[static_cast<std::size_t>(j)].vector)), i == j ? 1.0 : 0.0, 1e-10);
}

TEST(EdSolvers, GroundEnergyDecreasesWithHopping) {
    ChainSystem sys(ring(6, 0.0), 6);
    double prev = ground_state(sys).energy;
    EXPECT_NEAR(prev, 0.0, 1e-14);
    for (double J : {0.02, 0.05, 0.1, 0.2}) {
        double e = ground_state(sys.with_hopping(J)).energy;
        EXPECT_LT(e, prev);
        prev = e;
    }
}

TEST(EdObservables, MottLimitHasOneParticlePerSite) {
    ChainSystem sys(ring(6, 0.0), 6);
    auto g = ground_state(sys);
    auto o = finalize(sys.observables(0)(g.vector), {6}, true);
    EXPECT_NEAR(o.p[1], 1.0, 1e-12);
    EXPECT_NEAR(o.p[0], 0.0, 1e-12);
}

TEST(EdObservables, WeakInteractionGivesBinomialOccupations) {
    const int L = 5;
    ChainSystem sys(LatticeSpec::chain(L, 1.0, 1e-7), L);
    auto o = finalize(sys.observables(0)(ground_state(sys).vector), {L}, true);
    for (int n = 0; n <= L; ++n)
        EXPECT_NEAR(o.p[static_cast<std::size_t>(n)], binomial(L, n) * std::pow(1.0 / L, n) * std::pow(1.0 - 1.0 / L, L - n), 1e-6);
}

TEST(EdObservables, SectorMomentsMatchFockMoments) {
    ChainSystem sys(ring(6, 0.2), 6);
    auto g = ground_state(sys);
    auto a = finalize(sys.observables(0)(g.vector), {6}, true);
    auto psi = expand_sector(sys.basis(), sys.orbits(), sys.sector(0), g.vector);
    auto b = finalize(fock_moments(sys.spec(), sys.basis(), psi), {6}, true);
    double total = 0.0;
    for (std::size_t n = 0; n < a.p.size(); ++n) {
        EXPECT_NEAR(a.p[n], b.p[n], 1e-12);
        total += a.p[n];
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    for (std::size_t s = 1; s < 6; ++s) {
        EXPECT_NEAR(std::abs(a.obdm[s] - b.obdm[s]), 0.0, 1e-12);
        EXPECT_NEAR(a.parity_correlation[s], b.parity_correlation[s], 1e-12);
        EXPECT_NEAR(a.parity_correlation[s], a.parity_correlation[6 - s], 1e-12);
        EXPECT_NEAR(a.number_correlation[s], a.number_correlation[6 - s], 1e-12);
    }
    double sumP = std::accumulate(a.momentum.begin(), a.momentum.end(), 0.0);
    EXPECT_NEAR(sumP, 1.0, 1e-12);
}

TEST(EdThermal, LowAndHighTemperatureLimits) {
    ChainSystem sys(ring(5, 0.1), 5);
    auto spec = full_spectrum(sys);
    auto g = finalize(sys.observables(0)(ground_state(sys).vector), {5}, true);
    auto cold = thermal_moments(spec, 1e-3);
    EXPECT_NEAR(cold.p[0], g.p[0], 1e-10);
    // Infinite temperature weighs every Fock state equally.
    std::vector<double> flat(6, 0.0);
    for (std::size_t i = 0; i < sys.basis().size(); ++i)
        for (auto n : sys.basis().state(i)) flat[n] += 1.0 / (5.0 * sys.basis().size());
    auto hot = thermal_moments(spec, 1e8);
    for (std::size_t n = 0; n < 6; ++n) EXPECT_NEAR(hot.p[n], flat[n], 1e-6);
    EXPECT_THROW(thermal_moments(spec, 0.0), domain_error);
}

TEST(EdThermal, TemperatureFitInvertsThermalOccupation) {
    ChainSystem sys(ring(5, 0.1), 5);
    auto spec = full_spectrum(sys);
    double target = thermal_moments(spec, 0.37).p[0];
    EXPECT_NEAR(fit_temperature(spec, 0, target, 0.05, 5.0), 0.37, 1e-8);
}

TEST(EdQuench, StartsInTheMottState) {
    ChainSystem sys(ring(6, 0.1), 6);
    QuenchSolution q(sys);
    auto m = q.at(0.0).normalized();
    EXPECT_NEAR(m.p[1], 1.0, 1e-12);
    EXPECT_NEAR(q.overlaps().squaredNorm(), 1.0, 1e-12);
}

TEST(EdQuench, DiagonalEnsembleIsTheTimeAverage) {
    ChainSystem sys(ring(5, 0.15), 5);
    QuenchSolution q(sys);
    auto de = q.diagonal_ensemble();
    const int samples = 20000;
    const double horizon = 4000.0;
    double p0 = 0.0;
    for (int i = 0; i < samples; ++i) p0 += q.at(horizon * (i + 0.5) / samples).normalized().p[0];
    EXPECT_NEAR(p0 / samples, de.p[0], 1e-3);
}

TEST(EdTilt, NoFieldLeavesGroundStateIntact) {
    auto spec = LatticeSpec::chain(6, 0.1, 1.0, Boundary::open);
    FockBasis basis(6, 6);
    auto g = fock_ground_state(spec, basis);
    auto r = tilt_evolution(spec, basis, g.vector, PulseProfile::window(0.0, 1.0));
    EXPECT_LT(r.p_exc, 1e-10);
    EXPECT_LT(r.energy_drift, 1e-10);
}

TEST(EdTilt, FieldExcitesAndConservesNorm) {
    auto spec = LatticeSpec::chain(6, 0.1, 1.0, Boundary::open);
    FockBasis basis(6, 6);
    auto g = fock_ground_state(spec, basis);
    auto r = tilt_evolution(spec, basis, g.vector, PulseProfile::window(0.3, 2.0));
    EXPECT_GT(r.p_exc, 0.0);
    EXPECT_LT(r.norm_drift, 1e-8);
}

TEST(EdBand, FitRecoversSyntheticDispersion) {
    const int L = 8;
    double g = 0.5, v = 0.3, k = 2.0 * std::numbers::pi / L;
    auto fit = lowest_band_fit(-1.0, -1.0 + g, -1.0 + std::sqrt(g * g + k * k * v * v), L);
    EXPECT_NEAR(fit.gap, g, 1e-14);
    EXPECT_NEAR(fit.v_eff, v, 1e-12);
    EXPECT_THROW(lowest_band_fit(0.0, 0.5, 0.4, L), numeric_error);
    EXPECT_NEAR(analytic_v_eff(0.1, 1.0), 0.5 * std::sqrt(0.29), 1e-15);
}
