#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "colavoid/orbital.hpp"
#include "colavoid/random.hpp"
#include "oracles.hpp"

using namespace colavoid;

namespace {

const GravityModel kEarth{};

// Smallest signed difference between two angles, degrees.
double angle_diff(double a, double b) {
    double d = std::fmod(a - b, 360.0);
    if (d > 180.0) d -= 360.0;
    if (d < -180.0) d += 360.0;
    return d;
}

OrbitalElements random_leo(Rng& rng) {
    OrbitalElements el;
    el.a = kEarth.r_earth + uniform(rng, 400.0, 600.0);
    el.e = uniform(rng, 0.01, 0.11);
    el.i = uniform(rng, 75.0, 90.0);
    el.raan = uniform(rng, 45.0, 90.0);
    el.argp = uniform(rng, 30.0, 60.0);
    el.mean_anomaly = uniform(rng, 0.0, 360.0);
    return el;
}

} // namespace

TEST(ElementsToEci, CircularEquatorialAtNode) {
    const EciState x = elements_to_eci({7000.0, 0.0, 0.0, 0.0, 0.0, 0.0});
    EXPECT_NEAR(x.position[0], 7000.0, 1e-9);
    EXPECT_NEAR(x.position[1], 0.0, 1e-9);
    EXPECT_NEAR(x.position[2], 0.0, 1e-9);
    EXPECT_NEAR(x.velocity.norm(), std::sqrt(kEarth.mu / 7000.0), 1e-12);
}

TEST(ElementsToEci, RoundTripReferenceOrbit) {
    const OrbitalElements el{6778.137, 0.01, 80.0, 60.0, 45.0, 120.0};
    const OrbitalElements back = eci_to_elements(elements_to_eci(el));
    EXPECT_NEAR(back.a, el.a, 1e-7);
    EXPECT_NEAR(back.e, el.e, 1e-10);
    EXPECT_NEAR(angle_diff(back.i, el.i), 0.0, 1e-8);
    EXPECT_NEAR(angle_diff(back.raan, el.raan), 0.0, 1e-8);
    EXPECT_NEAR(angle_diff(back.argp, el.argp), 0.0, 1e-8);
    EXPECT_NEAR(angle_diff(back.mean_anomaly, el.mean_anomaly), 0.0, 1e-8);
}

TEST(ElementsToEci, RoundTripRandomBox) {
    Rng rng(11);
    for (int k = 0; k < 200; ++k) {
        const OrbitalElements el = random_leo(rng);
        const OrbitalElements back = eci_to_elements(elements_to_eci(el));
        EXPECT_NEAR(back.a, el.a, 1e-6);
        EXPECT_NEAR(back.e, el.e, 1e-10);
        EXPECT_NEAR(angle_diff(back.i, el.i), 0.0, 1e-8);
        EXPECT_NEAR(angle_diff(back.raan, el.raan), 0.0, 1e-8);
        EXPECT_NEAR(angle_diff(back.argp, el.argp), 0.0, 1e-7);
        EXPECT_NEAR(angle_diff(back.mean_anomaly, el.mean_anomaly), 0.0, 1e-7);
    }
}

TEST(ElementsToEci, RejectsHyperbolic) {
    EXPECT_THROW(elements_to_eci({7000.0, 1.2, 10.0, 0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(EciToElements, CircularState) {
    const EciState x{Vec3(7000.0, 0.0, 0.0), Vec3(0.0, std::sqrt(kEarth.mu / 7000.0), 0.0)};
    const OrbitalElements el = eci_to_elements(x);
    EXPECT_NEAR(el.a, 7000.0, 1e-9);
    EXPECT_NEAR(el.e, 0.0, 1e-9);
}

TEST(EciToElements, RejectsRectilinear) {
    const EciState x{Vec3(7000.0, 0.0, 0.0), Vec3(1.0, 0.0, 0.0)};
    EXPECT_THROW(eci_to_elements(x), std::invalid_argument);
}

TEST(SolveKepler, CircularIsIdentity) { EXPECT_DOUBLE_EQ(solve_kepler(1.3, 0.0), 1.3); }

TEST(SolveKepler, HalfPeriodSymmetry) { EXPECT_NEAR(solve_kepler(kPi, 0.5), kPi, 1e-14); }

TEST(SolveKepler, ResidualVanishes) {
    const double E = solve_kepler(0.5, 0.3);
    EXPECT_NEAR(E - 0.3 * std::sin(E), 0.5, 1e-14);
    Rng rng(3);
    for (int k = 0; k < 1000; ++k) {
        const double M = uniform(rng, -10.0, 10.0);
        const double e = uniform(rng, 0.0, 0.99);
        const double Ek = solve_kepler(M, e);
        EXPECT_NEAR(Ek - e * std::sin(Ek), M, 1e-12);
    }
}

TEST(SolveKepler, RejectsOpenOrbits) { EXPECT_THROW(solve_kepler(1.0, 1.0), std::invalid_argument); }

TEST(Propagate, ZeroStepIsIdentity) {
    const EciState x = elements_to_eci({6878.0, 0.05, 80.0, 50.0, 40.0, 10.0});
    const EciState y = propagate(x, 0.0);
    EXPECT_NEAR((y.position - x.position).norm(), 0.0, 1e-12);
    EXPECT_NEAR((y.velocity - x.velocity).norm(), 0.0, 1e-15);
}

TEST(Propagate, CircularPeriodClosure) {
    const EciState x = elements_to_eci({6878.137, 0.0, 85.0, 60.0, 0.0, 33.0});
    const EciState y = propagate(x, orbital_period(6878.137));
    EXPECT_LT((y.position - x.position).norm(), 1e-6);
}

TEST(Propagate, ForwardThenBackIsIdentity) {
    Rng rng(5);
    for (int k = 0; k < 50; ++k) {
        const EciState x = elements_to_eci(random_leo(rng));
        const EciState y = propagate(propagate(x, 72.0 * 3600.0), -72.0 * 3600.0);
        EXPECT_LT((y.position - x.position).norm(), 1e-6);
    }
}

TEST(Propagate, ComposesOverSplitSteps) {
    const EciState x = elements_to_eci({6900.0, 0.08, 78.0, 70.0, 50.0, 200.0});
    const EciState once = propagate(x, 5000.0);
    const EciState twice = propagate(propagate(x, 2000.0), 3000.0);
    EXPECT_LT((once.position - twice.position).norm(), 1e-8);
}

TEST(Propagate, MatchesNumericalIntegratorOneHour) {
    Rng rng(17);
    for (int k = 0; k < 20; ++k) {
        const EciState x = elements_to_eci(random_leo(rng));
        const EciState kepler = propagate(x, 3600.0);
        const EciState numeric = oracle::integrate_two_body(x, 3600.0);
        EXPECT_LT((kepler.position - numeric.position).norm(), 1e-5);
    }
}

TEST(Propagate, ConservesEnergyAndMomentum) {
    const EciState x = elements_to_eci({6950.0, 0.1, 82.0, 55.0, 35.0, 300.0});
    const EciState y = propagate(x, 12345.0);
    EXPECT_NEAR(specific_energy(y), specific_energy(x), 1e-10);
    EXPECT_LT((angular_momentum(y) - angular_momentum(x)).norm(), 1e-8);
}

TEST(AlongTrack, UnitVelocityDirection) {
    const Vec3 u1 = along_track_unit({Vec3(7000, 0, 0), Vec3(0, 7.5, 0)});
    EXPECT_NEAR((u1 - Vec3(0, 1, 0)).norm(), 0.0, 1e-15);
    const Vec3 u2 = along_track_unit({Vec3(7000, 0, 0), Vec3(3, 4, 0)});
    EXPECT_NEAR((u2 - Vec3(0.6, 0.8, 0)).norm(), 0.0, 1e-15);
    Rng rng(2);
    for (int k = 0; k < 20; ++k) {
        EXPECT_NEAR(along_track_unit(elements_to_eci(random_leo(rng))).squaredNorm(), 1.0, 1e-14);
    }
}

TEST(RtnFrame, OrthonormalRightHanded) {
    const RtnFrame f = rtn_frame(elements_to_eci({6900.0, 0.05, 80.0, 60.0, 45.0, 90.0}));
    const Eigen::Matrix3d m = f.to_eci();
    EXPECT_LT((m.transpose() * m - Eigen::Matrix3d::Identity()).norm(), 1e-14);
    EXPECT_NEAR(m.determinant(), 1.0, 1e-14);
}

TEST(Validate, RejectsOriginAndNonFinite) {
    EXPECT_THROW(validate(EciState{}), std::invalid_argument);
    EXPECT_THROW(validate({Vec3(NAN, 0, 0), Vec3(0, 1, 0)}), std::invalid_argument);
}
