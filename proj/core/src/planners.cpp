#include "colavoid/planners.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "colavoid/conjunction.hpp"

namespace colavoid {

namespace {

std::size_t index(Action a) { return static_cast<std::size_t>(a); }

// Argmax over the two actions; Wait wins ties.
Action pick(double wait_value, double maneuver_value) {
    return maneuver_value > wait_value ? Action::Maneuver : Action::Wait;
}

} // namespace

void TimeActionTable::initialize(int t) { rows_.try_emplace(t); }

const TimeActionTable::Row& TimeActionTable::row(int t) const {
    auto it = rows_.find(t);
    if (it == rows_.end()) {
        throw std::out_of_range("time-action table has no row for t = " + std::to_string(t));
    }
    return it->second;
}

double TimeActionTable::q(int t, Action a) const { return row(t).q[index(a)]; }

std::int64_t TimeActionTable::n(int t, Action a) const { return row(t).n[index(a)]; }

std::int64_t TimeActionTable::n_sum(int t) const {
    const Row& r = row(t);
    return r.n[0] + r.n[1];
}

void TimeActionTable::update(int t, Action a, double value) {
    auto it = rows_.find(t);
    if (it == rows_.end()) {
        throw std::out_of_range("update of uninitialized row t = " + std::to_string(t));
    }
    Row& r = it->second;
    const std::size_t k = index(a);
    r.n[k] += 1;
    r.q[k] += (value - r.q[k]) / static_cast<double>(r.n[k]);
}

std::vector<std::pair<int, Action>> TimeActionTable::keys() const {
    std::vector<std::pair<int, Action>> out;
    out.reserve(rows_.size() * 2);
    for (const auto& [t, r] : rows_) {
        for (Action a : kActions) out.emplace_back(t, a);
    }
    return out;
}

std::vector<int> TimeActionTable::times() const {
    std::vector<int> out;
    out.reserve(rows_.size());
    for (const auto& [t, r] : rows_) out.push_back(t);
    return out;
}

std::int64_t TimeActionTable::total_visits() const {
    std::int64_t total = 0;
    for (const auto& [t, r] : rows_) total += r.n[0] + r.n[1];
    return total;
}

std::string_view to_string(Heuristic h) { return h == Heuristic::Ucb1 ? "ucb1" : "sd"; }

Heuristic heuristic_from_string(std::string_view s) {
    if (s == "ucb1") return Heuristic::Ucb1;
    if (s == "sd" || s == "stochastic_depth") return Heuristic::StochasticDepth;
    throw std::invalid_argument("unknown exploration heuristic '" + std::string(s) + "'");
}

void MctsConfig::validate() const {
    if (n_sim_max < 1) throw std::invalid_argument("n_sim_max must be at least 1");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0,1]");
    if (!std::isfinite(c)) throw std::invalid_argument("exploration constant must be finite");
    if (t_maxdepth != 0 && t_maxdepth != kEpochStepHours) {
        throw std::invalid_argument("t_maxdepth must be 0 or 8");
    }
}

Action ucb1_explore(const TimeActionTable& table, int t, double c) {
    const double n_sum = static_cast<double>(table.n_sum(t));
    auto score = [&](Action a) {
        const auto n = table.n(t, a);
        if (n == 0) return std::numeric_limits<double>::infinity();
        return table.q(t, a) + c * std::sqrt(std::log(n_sum) / static_cast<double>(n));
    };
    return pick(score(Action::Wait), score(Action::Maneuver));
}

Action stochastic_depth_explore(const TimeActionTable& table, int t, double c, Rng& rng) {
    const auto n_sum = table.n_sum(t);
    if (n_sum == 0) return uniform(rng, 0.0, 1.0) < 0.5 ? Action::Wait : Action::Maneuver;
    const double wait_share =
        static_cast<double>(table.n(t, Action::Wait)) / static_cast<double>(n_sum);
    return wait_share > c ? Action::Maneuver : Action::Wait;
}

double terminal_value(const MdpState& s, const MctsConfig& cfg, const RewardParams& rparams,
                      const GravityModel& g) {
    if (cfg.t_maxdepth == 0) return reward(s, Action::Wait, rparams, g);
    const double pc = collision_probability(s);
    if (pc > rparams.pc_threshold) return -cost_to_maneuver(s, rparams, g).delta_v;
    return 0.0;
}

double simulate_recursion(const MdpState& s, TimeActionTable& table, const MctsConfig& cfg,
                          const PlannerContext& ctx, Rng& rng) {
    if (!table.visited(s.t)) {
        table.initialize(s.t);
        return 0.0;
    }
    if (s.t <= cfg.t_maxdepth) return terminal_value(s, cfg, ctx.reward, ctx.gravity);

    const Action a = cfg.heuristic == Heuristic::Ucb1
                         ? ucb1_explore(table, s.t, cfg.c)
                         : stochastic_depth_explore(table, s.t, cfg.c, rng);
    double q = 0.0;
    bool absorbed = false;
    if (a == Action::Maneuver) {
        // A burn ends the encounter; below threshold there is nothing to burn for.
        const double pc = collision_probability(s);
        if (pc > ctx.reward.pc_threshold) {
            q = -cost_to_maneuver(s, ctx.reward, ctx.gravity).delta_v;
            absorbed = true;
        }
    }
    if (!absorbed) {
        const MdpState next = transition(s, a, ctx.transition, rng);
        q = cfg.gamma * simulate_recursion(next, table, cfg, ctx, rng);
    }
    table.update(s.t, a, q);
    return q;
}

MctsDecision mcts_search(const MdpState& s, const MctsConfig& cfg, const PlannerContext& ctx,
                         Rng& rng) {
    cfg.validate();
    if (s.t <= cfg.t_maxdepth) {
        throw std::invalid_argument("mcts_plan requires t > t_maxdepth");
    }
    MctsDecision d;
    for (int i = 0; i < cfg.n_sim_max; ++i) simulate_recursion(s, d.table, cfg, ctx, rng);
    d.action = pick(d.table.q(s.t, Action::Wait), d.table.q(s.t, Action::Maneuver));
    return d;
}

Action mcts_plan(const MdpState& s, const MctsConfig& cfg, const PlannerContext& ctx, Rng& rng) {
    return mcts_search(s, cfg, ctx, rng).action;
}

Action rule_based_action(const MdpState& s, int t_cutoff, double pc_threshold) {
    if (s.t > 0 && s.t <= t_cutoff && collision_probability(s) > pc_threshold) {
        return Action::Maneuver;
    }
    return Action::Wait;
}

RuleBasedPolicy::RuleBasedPolicy(int t_cutoff) : t_cutoff_(t_cutoff) {
    if (t_cutoff <= 0) throw std::invalid_argument("t_cutoff must be positive");
}

std::string RuleBasedPolicy::label() const { return "rule_" + std::to_string(t_cutoff_); }

Action RuleBasedPolicy::decide(const MdpState& s, double pc, const PlannerContext& ctx,
                               Rng&) const {
    if (s.t > 0 && s.t <= t_cutoff_ && pc > ctx.reward.pc_threshold) return Action::Maneuver;
    return Action::Wait;
}

std::string mcts_label(const MctsConfig& cfg) {
    return std::string("mcts_") + (cfg.t_maxdepth == 0 ? "full_" : "limited_") +
           std::string(to_string(cfg.heuristic));
}

MctsPolicy::MctsPolicy(MctsConfig cfg, std::string label)
    : cfg_(cfg), label_(label.empty() ? mcts_label(cfg) : std::move(label)) {
    cfg_.validate();
}

std::string MctsPolicy::label() const { return label_; }

Action MctsPolicy::decide(const MdpState& s, double pc, const PlannerContext& ctx,
                          Rng& rng) const {
    if (s.t <= 0) return Action::Wait;
    if (s.t <= cfg_.t_maxdepth) {
        return pc > ctx.reward.pc_threshold ? Action::Maneuver : Action::Wait;
    }
    return mcts_plan(s, cfg_, ctx, rng);
}

std::unique_ptr<Policy> make_policy(const std::string& spec, const MctsConfig& base) {
    if (spec == "always_wait") return std::make_unique<AlwaysWaitPolicy>();
    if (spec.rfind("rule:", 0) == 0) {
        const std::string value = spec.substr(5);
        std::size_t used = 0;
        int cutoff = 0;
        try {
            cutoff = std::stoi(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != value.size() || value.empty() || cutoff <= 0 || cutoff % kEpochStepHours != 0) {
            throw std::invalid_argument("bad policy spec '" + spec +
                                        "': cutoff must be a positive multiple of 8");
        }
        return std::make_unique<RuleBasedPolicy>(cutoff);
    }
    if (spec.rfind("mcts:", 0) == 0) {
        const std::string rest = spec.substr(5);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) {
            throw std::invalid_argument("bad policy spec '" + spec + "': expected mcts:<horizon>:<heuristic>");
        }
        const std::string horizon = rest.substr(0, colon);
        MctsConfig cfg = base;
        if (horizon == "full") {
            cfg.t_maxdepth = 0;
        } else if (horizon == "limited") {
            cfg.t_maxdepth = kEpochStepHours;
        } else {
            throw std::invalid_argument("bad policy spec '" + spec + "': horizon must be full or limited");
        }
        try {
            cfg.heuristic = heuristic_from_string(rest.substr(colon + 1));
        } catch (const std::invalid_argument& ex) {
            throw std::invalid_argument("bad policy spec '" + spec + "': " + ex.what());
        }
        return std::make_unique<MctsPolicy>(cfg);
    }
    throw std::invalid_argument("unknown policy spec '" + spec + "'");
}

EpisodeOutcome run_sequence(const Encounter& e, const Policy& policy, const PlannerContext& ctx,
                            Rng& rng) {
    const bool have_pc = e.pc.size() == e.epochs.size();
    EpisodeOutcome out;
    std::optional<double> final_pc;
    for (std::size_t k = 0; k < e.epochs.size(); ++k) {
        const MdpState& s = e.epochs[k];
        const double pc = have_pc ? e.pc[k] : collision_probability(s);
        if (s.t == 0) {
            final_pc = pc;
            break;
        }
        if (policy.decide(s, pc, ctx, rng) != Action::Maneuver) continue;
        if (!(pc > ctx.reward.pc_threshold)) continue;
        const ManeuverPlan plan = cost_to_maneuver(s, ctx.reward, ctx.gravity);
        out.maneuvered = true;
        out.maneuver_time = s.t;
        out.delta_v_spent = plan.delta_v;
        out.total_reward = -plan.delta_v;
        out.final_pc = plan.final_pc;
        out.mitigated = true;
        return out;
    }
    if (!final_pc) throw std::invalid_argument("encounter is missing its t = 0 epoch");
    out.final_pc = *final_pc;
    out.mitigated = !(*final_pc > ctx.reward.pc_threshold);
    out.total_reward = out.mitigated ? 0.0 : ctx.reward.r_crash;
    return out;
}

} // namespace colavoid
