#include <gtest/gtest.h>

#include "hubbard/floquet.hpp"

using namespace hubbard;

TEST(Floquet, UncoupledExponentIsFreeRotation) {
    for (double U : {0.3, 0.77, 1.4}) {
        auto r = monodromy_exponent(FloquetDrive::chain(1.0, U, 0.0, 0.0));
        EXPECT_NEAR(r.sin2_pinu, std::pow(std::sin(std::numbers::pi * U), 2), 1e-10);
        EXPECT_FALSE(r.resonant);
    }
}

// The monodromy is the oracle for the truncated Hill determinant.
TEST(Floquet, DeterminantMatchesMonodromy) {
    for (double J : {0.02, 0.05, 0.1})
        for (double U : {0.35, 0.8, 1.3, 1.75})
            for (double k : {0.0, 1.1}) {
                auto d = FloquetDrive::chain(1.0, U, J, k);
                EXPECT_NEAR(determinant_relation(d).sin2_pinu, monodromy_exponent(d).sin2_pinu, 1e-6)
                    << "J=" << J << " U=" << U;
            }
}

TEST(Floquet, DeterminantConvergesInTruncation) {
    auto d = FloquetDrive::chain(1.0, 0.6, 0.08, 0.3);
    EXPECT_LT(determinant_relation(d).convergence, 1e-8);
    HillOptions plain;
    plain.tail_correction = false;
    plain.require_convergence = false;
    EXPECT_GT(determinant_relation(d, plain).convergence, determinant_relation(d).convergence);
}

TEST(Floquet, ExpansionAgreesAtSmallCoupling) {
    for (double U : {0.4, 0.7, 1.3}) {
        auto d = FloquetDrive::chain(1.0, U, 0.03, 0.0);
        double s = monodromy_exponent(d).sin2_pinu;
        EXPECT_NEAR(resonance_expansion(d), s, 1e-6);
    }
    EXPECT_THROW(resonance_expansion(FloquetDrive::chain(1.0, 1.005, 0.03, 0.0)), domain_error);
}

TEST(Floquet, FirstBandCentredAtDriveFrequency) {
    auto d = FloquetDrive::chain(1.0, 1.0, 0.05, 0.0);
    auto scan = resonance_scan(d, 0.8, 1.2, 41);
    ASSERT_EQ(scan.bands.size(), 1u);
    auto predicted = predicted_bands(d)[0];
    EXPECT_NEAR(scan.bands[0].center(), predicted.center(), 0.05 * predicted.width());
    EXPECT_NEAR(scan.bands[0].width() / predicted.width(), 1.0, 0.1);
}

TEST(Floquet, GrowthRateMatchesTrajectory) {
    auto d = FloquetDrive::chain(1.0, 1.0, 0.05, 0.0);
    auto r = monodromy_exponent(d);
    ASSERT_TRUE(r.resonant);
    auto traj = floquet_trajectory(d, Eigen::Vector3cd(1.0, 0.3, -0.2), 20.0);
    double t1 = traj[traj.size() / 2].first, t2 = traj.back().first;
    double slope = std::log(traj.back().second / traj[traj.size() / 2].second) / (t2 - t1);
    EXPECT_NEAR(slope / r.growth_rate, 1.0, 0.05);
}

TEST(Floquet, FermionicModesStayBounded) {
    for (double U : {0.5, 1.0, 2.0}) {
        auto d = FloquetDrive::chain(1.0, U, 0.1, 0.0);
        EXPECT_LE(fermionic_monodromy_bound(d), 1.0 + 1e-8);
    }
}

TEST(Floquet, InvalidDrivesAreRejected) {
    EXPECT_THROW(monodromy_exponent(FloquetDrive::chain(0.0, 1.0, 0.1, 0.0)), domain_error);
    EXPECT_THROW(monodromy_exponent(FloquetDrive::chain(1.0, -1.0, 0.1, 0.0)), domain_error);
    EXPECT_THROW(resonance_scan(FloquetDrive::chain(1.0, 1.0, 0.1, 0.0), 1.0, 0.5, 10), domain_error);
}
