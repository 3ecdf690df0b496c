#include "colavoid/conjunction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "colavoid/random.hpp"
#include "quadrature.hpp"

namespace colavoid {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
// Gaussian mass beyond this many sigma is below 1e-30.
constexpr double kWindowSigmas = 12.0;

// Phi(hi) - Phi(lo) for lo <= hi, evaluated on the side that avoids cancellation.
double normal_interval(double lo, double hi) {
    if (lo >= 0.0) return 0.5 * (std::erfc(lo * kInvSqrt2) - std::erfc(hi * kInvSqrt2));
    if (hi <= 0.0) return 0.5 * (std::erfc(-hi * kInvSqrt2) - std::erfc(-lo * kInvSqrt2));
    return 1.0 - 0.5 * std::erfc(hi * kInvSqrt2) - 0.5 * std::erfc(-lo * kInvSqrt2);
}

} // namespace

Eigen::Matrix<double, 3, 2> EncounterGeometry::basis() const {
    Eigen::Matrix<double, 3, 2> b;
    b.col(0) = e1;
    b.col(1) = e2;
    return b;
}

Eigen::Vector2d EncounterGeometry::projected_miss() const {
    return {e1.dot(miss_vector), e2.dot(miss_vector)};
}

void validate_covariance(const CovarianceMatrix& cov) {
    if (!cov.allFinite()) throw std::invalid_argument("covariance has non-finite entries");
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::invalid_argument("covariance is not symmetric");
    }
    const Eigen::Matrix3d pos = cov.topLeftCorner<3, 3>();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(pos, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-12 * scale) {
        throw std::invalid_argument("position covariance is not positive semi-definite");
    }
}

EncounterGeometry encounter_geometry(const EciState& chief, const EciState& deputy) {
    EncounterGeometry g;
    g.miss_vector = deputy.position - chief.position;
    g.relative_velocity = deputy.velocity - chief.velocity;
    const double speed = g.relative_velocity.norm();
    if (!(speed > 0.0)) {
        throw std::invalid_argument("zero relative velocity: encounter plane undefined");
    }
    const Vec3 u = g.relative_velocity / speed;
    // Cross with the coordinate axis least aligned with u.
    Eigen::Index axis = 0;
    u.cwiseAbs().minCoeff(&axis);
    const Vec3 ref = Vec3::Unit(axis);
    g.e1 = u.cross(ref).normalized();
    g.e2 = u.cross(g.e1);
    return g;
}

Eigen::Matrix2d combined_plane_covariance(const CovarianceMatrix& sigma_c,
                                          const CovarianceMatrix& sigma_d,
                                          const EncounterGeometry& geom) {
    const Eigen::Matrix3d combined = sigma_c.topLeftCorner<3, 3>() + sigma_d.topLeftCorner<3, 3>();
    const Eigen::Matrix<double, 3, 2> b = geom.basis();
    Eigen::Matrix2d c = b.transpose() * combined * b;
    c(0, 1) = c(1, 0) = 0.5 * (c(0, 1) + c(1, 0));
    return c;
}

double gaussian_disk_probability(const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov,
                                 double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
    const Eigen::Vector2d var = eig.eigenvalues().cwiseMax(kPlaneVarianceFloor);
    // Principal frame: axis 0 carries the smaller variance (eigenvalues ascend).
    const Eigen::Vector2d m = eig.eigenvectors().transpose() * mean;
    const double sx = std::sqrt(var[0]);
    const double sy = std::sqrt(var[1]);
    const double mx = m[0];
    const double my = m[1];

    // x = R sin(theta) keeps the chord half-length R cos(theta) smooth at the rim.
    const double lo = std::max(-radius, mx - kWindowSigmas * sx);
    const double hi = std::min(radius, mx + kWindowSigmas * sx);
    if (lo >= hi) return 0.0;
    const double theta_lo = std::asin(std::clamp(lo / radius, -1.0, 1.0));
    const double theta_hi = std::asin(std::clamp(hi / radius, -1.0, 1.0));

    auto integrand = [&](double theta) {
        const double x = radius * std::sin(theta);
        const double chord = radius * std::cos(theta);
        const double zx = (x - mx) / sx;
        const double density = kInvSqrt2Pi / sx * std::exp(-0.5 * zx * zx);
        return chord * density * normal_interval((-chord - my) / sy, (chord - my) / sy);
    };
    const double pc = detail::adaptive_integrate(integrand, theta_lo, theta_hi,
                                                 kFosterAbsTolerance);
    return std::clamp(pc, 0.0, 1.0);
}

double collision_probability(const EciState& chief, const EciState& deputy,
                             const CovarianceMatrix& sigma_c, const CovarianceMatrix& sigma_d,
                             const HardbodyRadii& radii) {
    if (!(radii.r_c > 0.0 && radii.r_d > 0.0)) {
        throw std::invalid_argument("hardbody radii must be positive");
    }
    const EncounterGeometry geom = encounter_geometry(chief, deputy);
    return gaussian_disk_probability(geom.projected_miss(),
                                     combined_plane_covariance(sigma_c, sigma_d, geom),
                                     radii.combined_km());
}

double collision_probability(const MdpState& s) {
    return collision_probability(s.chief, s.deputy, s.sigma_c, s.sigma_d, s.radii());
}

SamplingEstimate pc_sampling_oracle(const MdpState& s, std::size_t n, std::uint64_t seed) {
    if (n < 1000) throw std::invalid_argument("pc_sampling_oracle needs at least 1000 samples");
    const EncounterGeometry geom = encounter_geometry(s.chief, s.deputy);
    const Eigen::Matrix3d combined = s.sigma_c.topLeftCorner<3, 3>() + s.sigma_d.topLeftCorner<3, 3>();
    const Eigen::Matrix3d factor = covariance_factor<3>(combined);
    const double radius = s.radii().combined_km();
    const double r2 = radius * radius;

    Rng rng(seed);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const Vec3 rel = sample_gaussian<3>(geom.miss_vector, factor, rng);
        const double u = geom.e1.dot(rel);
        const double v = geom.e2.dot(rel);
        if (u * u + v * v < r2) ++hits;
    }
    SamplingEstimate est;
    est.hits = hits;
    est.samples = n;
    est.probability = static_cast<double>(hits) / static_cast<double>(n);
    est.standard_error =
        std::sqrt(est.probability * (1.0 - est.probability) / static_cast<double>(n));
    return est;
}

} // namespace colavoid
