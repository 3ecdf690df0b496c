#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "colavoid/mdp.hpp"
#include "colavoid/planners.hpp"
#include "colavoid/scenario.hpp"

namespace colavoid::cli {

// The thirteen planners compared in the evaluation: four MCTS variants and nine cutoffs.
std::vector<std::string> default_policies();

struct RunConfig {
    std::uint64_t master_seed = 1;
    std::size_t encounter_count = 1000;
    GeneratorConfig generator;
    TransitionParams transition;
    RewardParams reward;
    MctsConfig mcts; // heuristic and horizon come from each policy spec
    std::vector<std::string> policies = default_policies();
    std::string plan_policy = "mcts:full:ucb1";
    double grid_step = 0.01;

    void validate() const;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat "dotted.key = value" lines; '#' starts a comment. Keys not given keep defaults.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

} // namespace colavoid::cli
