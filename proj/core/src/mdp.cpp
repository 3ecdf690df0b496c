#include "colavoid/mdp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "colavoid/conjunction.hpp"

namespace colavoid {

namespace {

constexpr double kMpsToKmps = 1e-3;

// Zero position/velocity cross terms let the 6x6 factor split into two 3x3 blocks.
CovarianceMatrix state_factor(const CovarianceMatrix& cov) {
    if (cov.topRightCorner<3, 3>().isZero(0.0) && cov.bottomLeftCorner<3, 3>().isZero(0.0)) {
        CovarianceMatrix f = CovarianceMatrix::Zero();
        const Eigen::Matrix3d pos = cov.topLeftCorner<3, 3>();
        const Eigen::Matrix3d vel = cov.bottomRightCorner<3, 3>();
        if (!pos.isZero(0.0)) f.topLeftCorner<3, 3>() = covariance_factor<3>(pos);
        if (!vel.isZero(0.0)) f.bottomRightCorner<3, 3>() = covariance_factor<3>(vel);
        return f;
    }
    return covariance_factor<6>(cov);
}

EciState sample_state(const EciState& mean, const CovarianceMatrix& cov, Rng& rng) {
    if (cov.isZero(0.0)) return mean;
    return from_vec6(sample_gaussian<6>(to_vec6(mean), state_factor(cov), rng));
}

} // namespace

std::string_view to_string(Action a) { return a == Action::Wait ? "wait" : "maneuver"; }

std::string_view to_string(ThrustDirection d) {
    return d == ThrustDirection::Along ? "along" : "anti_along";
}

void TransitionParams::validate() const {
    if (!(p_obs >= 0.0 && p_obs <= 1.0)) throw std::invalid_argument("p_obs must lie in [0,1]");
    if (!(k_c >= 0.0 && k_c < 1.0)) throw std::invalid_argument("k_c must lie in [0,1)");
    if (!(k_d_lower >= 0.0 && k_d_lower <= k_d_upper && k_d_upper < 1.0)) {
        throw std::invalid_argument("k_d bounds must satisfy 0 <= lower <= upper < 1");
    }
}

void RewardParams::validate() const {
    if (!(r_crash < 0.0)) throw std::invalid_argument("r_crash must be negative");
    if (!(pc_threshold > 0.0 && pc_threshold < 1.0)) {
        throw std::invalid_argument("pc_threshold must lie in (0,1)");
    }
    if (!(delta_v_step > 0.0)) throw std::invalid_argument("delta_v_step must be positive");
    if (max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
}

void validate(const MdpState& s) {
    if (s.t < 0 || s.t % kEpochStepHours != 0) {
        throw std::invalid_argument("state time must be a non-negative multiple of 8 hours, got " +
                                    std::to_string(s.t));
    }
    validate(s.chief);
    validate(s.deputy);
    validate_covariance(s.sigma_c);
    validate_covariance(s.sigma_d);
    if (!(s.r_c > 0.0 && s.r_d > 0.0)) throw std::invalid_argument("hardbody radii must be positive");
}

MdpState transition(const MdpState& s, Action /*a*/, const TransitionParams& params, Rng& rng) {
    if (s.t <= 0) throw std::invalid_argument("transition from a terminal state (t = 0)");
    MdpState next = s;
    next.t = s.t - kEpochStepHours;
    next.chief = sample_state(s.chief, s.sigma_c, rng);
    next.deputy = sample_state(s.deputy, s.sigma_d, rng);
    next.sigma_c = s.sigma_c * (1.0 - params.k_c);
    const double k_d = uniform(rng, params.k_d_lower, params.k_d_upper);
    if (uniform(rng, 0.0, 1.0) < params.p_obs) {
        next.sigma_d = s.sigma_d * (1.0 - k_d);
    }
    return next;
}

double reward(const MdpState& s, Action a, const RewardParams& params, const GravityModel& g) {
    const double pc = collision_probability(s);
    if (s.t == 0) {
        if (a == Action::Maneuver) throw std::invalid_argument("maneuver is not legal at t = 0");
        return pc > params.pc_threshold ? params.r_crash : 0.0;
    }
    if (a == Action::Wait) return 0.0;
    // No burn is required when the risk is already below threshold.
    if (pc <= params.pc_threshold) return 0.0;
    return -cost_to_maneuver(s, params, g).delta_v;
}

EciState apply_thrust(const EciState& chief, double t_hours, ThrustDirection direction,
                      double dv_mps, const GravityModel& g) {
    if (!(t_hours > 0.0)) throw std::invalid_argument("apply_thrust requires t > 0");
    const double dt = t_hours * kSecondsPerHour;
    EciState burn = propagate(chief, -dt, g);
    const double sign = direction == ThrustDirection::Along ? 1.0 : -1.0;
    burn.velocity += sign * dv_mps * kMpsToKmps * along_track_unit(burn);
    return propagate(burn, dt, g);
}

ManeuverPlan cost_to_maneuver(const MdpState& s, const RewardParams& params,
                              const GravityModel& g) {
    if (s.t <= 0) throw std::invalid_argument("cost_to_maneuver requires t > 0");
    const double pc0 = collision_probability(s);
    if (!(pc0 > params.pc_threshold)) {
        throw std::invalid_argument("cost_to_maneuver requires Pc above threshold");
    }
    const double dt = s.t * kSecondsPerHour;
    const EciState burn = propagate(s.chief, -dt, g);
    const Vec3 unit = along_track_unit(burn);

    auto pc_after = [&](ThrustDirection dir, std::int64_t steps) {
        const double sign = dir == ThrustDirection::Along ? 1.0 : -1.0;
        EciState thrusted = burn;
        thrusted.velocity += sign * static_cast<double>(steps) * params.delta_v_step *
                             kMpsToKmps * unit;
        return collision_probability(propagate(thrusted, dt, g), s.deputy, s.sigma_c, s.sigma_d,
                                     s.radii());
    };

    ManeuverPlan plan;
    const double pc_along = pc_after(ThrustDirection::Along, 1);
    const double pc_anti = pc_after(ThrustDirection::AntiAlong, 1);
    plan.direction = pc_along > pc_anti ? ThrustDirection::AntiAlong : ThrustDirection::Along;
    plan.final_pc = std::min(pc_along, pc_anti);
    plan.steps = 1;
    while (plan.final_pc >= params.pc_threshold) {
        if (plan.steps >= params.max_steps) {
            throw std::runtime_error("cost_to_maneuver exceeded " +
                                     std::to_string(params.max_steps) + " thrust steps");
        }
        ++plan.steps;
        plan.final_pc = pc_after(plan.direction, plan.steps);
    }
    plan.delta_v = static_cast<double>(plan.steps) * params.delta_v_step;
    return plan;
}

} // namespace colavoid
