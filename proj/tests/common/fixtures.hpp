#pragma once

#include <cstdint>
#include <vector>

#include "colavoid/conjunction.hpp"
#include "colavoid/mdp.hpp"
#include "colavoid/scenario.hpp"

namespace colavoid::fixture {

// Decision states (t > 0) whose Pc exceeds the threshold, drawn from generated encounters.
inline std::vector<MdpState> unsafe_states(std::size_t want, std::uint64_t master_seed,
                                           double pc_threshold = 1e-5) {
    std::vector<MdpState> out;
    const GeneratorConfig cfg;
    for (std::uint64_t i = 0; out.size() < want; ++i) {
        const Encounter e = generate_from_seed(
            derive_seed(master_seed, Stream::Encounter, i), cfg, pc_threshold);
        for (std::size_t k = 0; k < e.epochs.size() && out.size() < want; ++k) {
            if (e.epochs[k].t > 0 && e.pc[k] > pc_threshold) out.push_back(e.epochs[k]);
        }
    }
    return out;
}

// A two-object state with exactly controllable Pc: perpendicular crossing, isotropic
// position covariance, miss along an encounter-plane axis.
inline MdpState crossing_state(int t, double miss_km, double sigma_km, double radius_m = 5.0) {
    MdpState s;
    s.t = t;
    s.chief = elements_to_eci({6878.137, 0.0, 80.0, 60.0, 0.0, 0.0});
    const Vec3 v = s.chief.velocity;
    const Vec3 n = angular_momentum(s.chief).normalized();
    s.deputy = {s.chief.position + miss_km * s.chief.position.normalized(), v.norm() * n};
    s.sigma_c.topLeftCorner<3, 3>() = 0.5 * sigma_km * sigma_km * Eigen::Matrix3d::Identity();
    s.sigma_d.topLeftCorner<3, 3>() = 0.5 * sigma_km * sigma_km * Eigen::Matrix3d::Identity();
    s.r_c = radius_m;
    s.r_d = radius_m;
    return s;
}

} // namespace colavoid::fixture
