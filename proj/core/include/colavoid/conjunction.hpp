#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "colavoid/types.hpp"

namespace colavoid {

// Relative geometry at closest approach. The plane basis spans the encounter
// plane (normal to the relative velocity).
struct EncounterGeometry {
    Vec3 miss_vector;       // deputy - chief position, km
    Vec3 relative_velocity; // deputy - chief velocity, km/s
    Vec3 e1;
    Vec3 e2;

    Eigen::Matrix<double, 3, 2> basis() const;
    Eigen::Vector2d projected_miss() const;
};

// Eigenvalues of the plane covariance are floored here (km^2).
inline constexpr double kPlaneVarianceFloor = 1e-12;
inline constexpr double kFosterAbsTolerance = 1e-12;

// Throws std::invalid_argument unless symmetric (1e-12 relative) with a PSD position block.
void validate_covariance(const CovarianceMatrix& cov);

EncounterGeometry encounter_geometry(const EciState& chief, const EciState& deputy);

Eigen::Matrix2d combined_plane_covariance(const CovarianceMatrix& sigma_c,
                                          const CovarianceMatrix& sigma_d,
                                          const EncounterGeometry& geom);

// Integral of N(mean, cov) over the disk of the given radius centred at the origin.
double gaussian_disk_probability(const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov,
                                 double radius);

double collision_probability(const EciState& chief, const EciState& deputy,
                             const CovarianceMatrix& sigma_c, const CovarianceMatrix& sigma_d,
                             const HardbodyRadii& radii);
double collision_probability(const MdpState& s);

struct SamplingEstimate {
    double probability = 0.0;
    double standard_error = 0.0;
    std::size_t hits = 0;
    std::size_t samples = 0;
};

// Monte Carlo estimate of Pc: samples the combined 3D relative position and counts
// encounter-plane projections inside the combined hardbody radius. Requires n >= 1000.
SamplingEstimate pc_sampling_oracle(const MdpState& s, std::size_t n, std::uint64_t seed);

} // namespace colavoid
