#pragma once

#include <cstdint>

#include "colavoid/orbital.hpp"
#include "colavoid/random.hpp"
#include "colavoid/types.hpp"

namespace colavoid {

inline constexpr int kEpochStepHours = 8;
inline constexpr int kHorizonHours = 72;

// Forward (planning-time) covariance update. Defaults follow the MCTS hyperparameter table.
struct TransitionParams {
    double p_obs = 0.5;
    double k_c = 0.05;
    double k_d_lower = 0.05;
    double k_d_upper = 0.3;

    void validate() const;
};

// Sign convention: rewards are <= 0. Maneuver cost is reported in m/s as a positive
// magnitude; the reward is its negation.
struct RewardParams {
    double r_crash = -0.5;
    double pc_threshold = 1e-5;
    double delta_v_step = 2e-5; // m/s
    std::int64_t max_steps = 1'000'000;

    void validate() const;
};

enum class ThrustDirection { Along, AntiAlong };

std::string_view to_string(ThrustDirection d);

void validate(const MdpState& s);

// Samples s' ~ T(s, a). The action does not enter the covariance model.
MdpState transition(const MdpState& s, Action a, const TransitionParams& params, Rng& rng);

double reward(const MdpState& s, Action a, const RewardParams& params,
              const GravityModel& g = {});

// Back-propagates the TCA chief state by t hours, burns dv (m/s) along or against the
// velocity, and propagates back to the TCA epoch.
EciState apply_thrust(const EciState& chief, double t_hours, ThrustDirection direction,
                      double dv_mps, const GravityModel& g = {});

struct ManeuverPlan {
    double delta_v = 0.0; // m/s, steps * delta_v_step
    std::int64_t steps = 0;
    ThrustDirection direction = ThrustDirection::Along;
    double final_pc = 0.0;
};

// Smallest multiple of delta_v_step in the better of the two along-track directions that
// brings Pc below the threshold. Requires Pc(s) > threshold and s.t > 0.
ManeuverPlan cost_to_maneuver(const MdpState& s, const RewardParams& params,
                              const GravityModel& g = {});

} // namespace colavoid
