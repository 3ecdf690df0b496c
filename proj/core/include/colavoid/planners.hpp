#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "colavoid/mdp.hpp"
#include "colavoid/random.hpp"
#include "colavoid/scenario.hpp"
#include "colavoid/types.hpp"

namespace colavoid {

// Value and visit statistics keyed by (hours to TCA, action) instead of full state.
class TimeActionTable {
public:
    bool visited(int t) const { return rows_.count(t) != 0; }
    // Creates the (t, Wait) and (t, Maneuver) entries with Q = 0, N = 0.
    void initialize(int t);

    double q(int t, Action a) const;
    std::int64_t n(int t, Action a) const;
    std::int64_t n_sum(int t) const;

    // N += 1 then Q += (value - Q) / N.
    void update(int t, Action a, double value);

    std::vector<std::pair<int, Action>> keys() const;
    std::vector<int> times() const;
    std::int64_t total_visits() const;

private:
    struct Row {
        std::array<double, 2> q{0.0, 0.0};
        std::array<std::int64_t, 2> n{0, 0};
    };
    const Row& row(int t) const;
    std::map<int, Row> rows_;
};

enum class Heuristic { Ucb1, StochasticDepth };

std::string_view to_string(Heuristic h);
Heuristic heuristic_from_string(std::string_view s);

struct MctsConfig {
    int n_sim_max = 200;
    double gamma = 0.95;
    double c = 0.8;
    Heuristic heuristic = Heuristic::Ucb1;
    int t_maxdepth = 0; // 0 = full horizon, 8 = limited horizon

    void validate() const;
};

Action ucb1_explore(const TimeActionTable& table, int t, double c);
Action stochastic_depth_explore(const TimeActionTable& table, int t, double c, Rng& rng);

struct PlannerContext {
    TransitionParams transition;
    RewardParams reward;
    GravityModel gravity;
};

// Value of the terminal node at t = cfg.t_maxdepth.
double terminal_value(const MdpState& s, const MctsConfig& cfg, const RewardParams& rparams,
                      const GravityModel& g = {});

// One rollout from s. A first visit to a time row initializes it and returns 0.
double simulate_recursion(const MdpState& s, TimeActionTable& table, const MctsConfig& cfg,
                          const PlannerContext& ctx, Rng& rng);

struct MctsDecision {
    Action action = Action::Wait;
    TimeActionTable table;
};

// Requires s.t > cfg.t_maxdepth. Ties go to Wait.
MctsDecision mcts_search(const MdpState& s, const MctsConfig& cfg, const PlannerContext& ctx,
                         Rng& rng);
Action mcts_plan(const MdpState& s, const MctsConfig& cfg, const PlannerContext& ctx, Rng& rng);

Action rule_based_action(const MdpState& s, int t_cutoff, double pc_threshold);

// A decision rule queried once per epoch. `pc` is the precomputed Pc of `s`.
class Policy {
public:
    virtual ~Policy() = default;
    virtual std::string label() const = 0;
    virtual Action decide(const MdpState& s, double pc, const PlannerContext& ctx,
                          Rng& rng) const = 0;
};

class RuleBasedPolicy final : public Policy {
public:
    explicit RuleBasedPolicy(int t_cutoff);
    std::string label() const override;
    Action decide(const MdpState& s, double pc, const PlannerContext& ctx, Rng& rng) const override;
    int t_cutoff() const { return t_cutoff_; }

private:
    int t_cutoff_;
};

// Limited-horizon variants fall back to the threshold rule once t <= t_maxdepth.
class MctsPolicy final : public Policy {
public:
    explicit MctsPolicy(MctsConfig cfg, std::string label = {});
    std::string label() const override;
    Action decide(const MdpState& s, double pc, const PlannerContext& ctx, Rng& rng) const override;
    const MctsConfig& config() const { return cfg_; }

private:
    MctsConfig cfg_;
    std::string label_;
};

class AlwaysWaitPolicy final : public Policy {
public:
    std::string label() const override { return "always_wait"; }
    Action decide(const MdpState&, double, const PlannerContext&, Rng&) const override {
        return Action::Wait;
    }
};

// Default label for an MCTS configuration, e.g. "mcts_full_sd".
std::string mcts_label(const MctsConfig& cfg);

// Parses "rule:<t_cutoff>", "mcts:<full|limited>:<ucb1|sd>" or "always_wait".
std::unique_ptr<Policy> make_policy(const std::string& spec, const MctsConfig& base = {});

struct EpisodeOutcome {
    double total_reward = 0.0;
    bool maneuvered = false;
    std::optional<int> maneuver_time; // hours
    double delta_v_spent = 0.0;       // m/s
    double final_pc = 0.0;
    bool mitigated = false;
};

// Feeds the encounter's epochs to the policy from the horizon down. A maneuver ends the
// episode with its cost; otherwise the t = 0 Pc decides between r_crash and 0.
// A maneuver requested while Pc is at or below the threshold needs no burn and the
// episode continues.
EpisodeOutcome run_sequence(const Encounter& e, const Policy& policy, const PlannerContext& ctx,
                            Rng& rng);

} // namespace colavoid
