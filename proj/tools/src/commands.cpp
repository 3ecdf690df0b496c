#include "colavoid_cli/commands.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "colavoid/conjunction.hpp"
#include "colavoid/encounter_io.hpp"
#include "colavoid/eval.hpp"
#include "colavoid/planners.hpp"

namespace colavoid::cli {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "' for reading");
    return in;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw DataError("failed writing '" + path + "'");
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

PlannerContext context(const RunConfig& cfg) {
    PlannerContext ctx;
    ctx.transition = cfg.transition;
    ctx.reward = cfg.reward;
    return ctx;
}

} // namespace

void cmd_generate(const RunConfig& cfg, const std::string& out_path, unsigned jobs,
                  std::ostream& log) {
    cfg.validate();
    const auto encounters = generate_encounters(cfg.master_seed, cfg.encounter_count, cfg.generator,
                                                cfg.reward.pc_threshold, jobs);
    auto out = open_out(out_path);
    write_encounters_jsonl(out, encounters);
    finish(out, out_path);

    std::array<std::size_t, 3> by_class{};
    // Pc at t = 0: [1e-1, 1], [1e-2, 1e-1), ..., [1e-5, 1e-4), below 1e-5.
    std::array<std::size_t, 6> bins{};
    for (const auto& e : encounters) {
        by_class[static_cast<std::size_t>(e.classification)] += 1;
        const double pc = e.pc_at(0);
        std::size_t b = 5;
        for (std::size_t k = 0; k < 5; ++k) {
            if (pc >= std::pow(10.0, -1.0 - static_cast<double>(k))) {
                b = k;
                break;
            }
        }
        bins[b] += 1;
    }
    const double n = static_cast<double>(encounters.size());
    log << "wrote " << encounters.size() << " encounters to " << out_path << "\n";
    log << "safe " << by_class[0] << "  unsafe " << by_class[1] << "  trivial " << by_class[2]
        << "\n";
    const std::size_t decided = by_class[0] + by_class[1];
    if (decided > 0) {
        log << "safe share of non-trivial: "
            << fixed(static_cast<double>(by_class[0]) / static_cast<double>(decided), 3) << "\n";
    }
    static const char* labels[] = {"Pc >= 1e-1", "1e-2 <= Pc < 1e-1", "1e-3 <= Pc < 1e-2",
                                   "1e-4 <= Pc < 1e-3", "1e-5 <= Pc < 1e-4", "Pc < 1e-5"};
    log << "Pc at t = 0 (proportion of total):\n";
    for (std::size_t k = 0; k < bins.size(); ++k) {
        log << "  " << labels[k] << "  " << fixed(static_cast<double>(bins[k]) / n, 4) << "\n";
    }
}

void cmd_evaluate(const RunConfig& cfg, const std::string& encounters_path,
                  const std::string& out_prefix, unsigned jobs, std::ostream& log) {
    cfg.validate();
    if (cfg.policies.empty()) throw ConfigError("invalid config: policy list is empty");
    std::vector<std::unique_ptr<Policy>> policies;
    for (const auto& spec : cfg.policies) policies.push_back(make_policy(spec, cfg.mcts));

    auto in = open_in(encounters_path);
    const auto encounters = read_encounters_jsonl(in);
    if (encounters.empty()) throw DataError("'" + encounters_path + "' holds no encounters");

    const PlannerContext ctx = context(cfg);
    std::vector<EvaluationReport> reports;
    for (const auto& p : policies) {
        reports.push_back(evaluate(*p, encounters, ctx, cfg.master_seed, jobs));
        log << "evaluated " << reports.back().policy_id << "\n";
    }

    const std::string csv_path = out_prefix + ".csv";
    const std::string jsonl_path = out_prefix + ".jsonl";
    auto csv = open_out(csv_path);
    write_reports_csv(csv, reports);
    finish(csv, csv_path);
    auto jsonl = open_out(jsonl_path);
    write_reports_jsonl(jsonl, reports);
    finish(jsonl, jsonl_path);
    write_reports_csv(log, reports);
}

void cmd_plan(const RunConfig& cfg, const std::string& state_path, std::ostream& out) {
    cfg.validate();
    auto in = open_in(state_path);
    std::stringstream buf;
    buf << in.rdbuf();
    const MdpState s = mdp_state_from_json(buf.str());
    try {
        validate(s);
    } catch (const std::invalid_argument& ex) {
        throw DataError(std::string("state record: ") + ex.what());
    }
    if (s.t == 0) {
        out << "no decision (terminal)\n";
        return;
    }
    const PlannerContext ctx = context(cfg);
    const double pc = collision_probability(s);
    out << "t " << s.t << "  pc " << format_number(pc) << "\n";

    const auto policy = make_policy(cfg.plan_policy, cfg.mcts);
    Rng rng(derive_seed(cfg.master_seed, Stream::Policy, 0));
    const auto* mcts = dynamic_cast<const MctsPolicy*>(policy.get());
    if (mcts == nullptr || s.t <= mcts->config().t_maxdepth) {
        out << "policy " << policy->label() << "\n";
        out << "action " << to_string(policy->decide(s, pc, ctx, rng)) << "\n";
        return;
    }
    const MctsDecision d = mcts_search(s, mcts->config(), ctx, rng);
    out << "policy " << policy->label() << "\n";
    out << "action " << to_string(d.action) << "\n";
    out << "t,action,q,n\n";
    for (const auto& [t, a] : d.table.keys()) {
        out << t << ',' << to_string(a) << ',' << format_number(d.table.q(t, a)) << ','
            << d.table.n(t, a) << "\n";
    }
}

void cmd_report(const RunConfig& cfg, const std::string& reports_path,
                const std::string& out_prefix, std::ostream& log) {
    cfg.validate();
    auto in = open_in(reports_path);
    std::vector<EvaluationReport> reports;
    try {
        reports = read_reports_jsonl(in);
    } catch (const std::runtime_error& ex) {
        throw DataError(reports_path + ": " + ex.what());
    }
    if (reports.size() < 2) throw DataError("'" + reports_path + "' needs at least two reports");
    CrossoverResult result;
    try {
        result = crossover(reports, cfg.grid_step);
    } catch (const std::invalid_argument& ex) {
        throw DataError(reports_path + ": " + ex.what());
    }

    const std::string grid_path = out_prefix + "_crossover.csv";
    const std::string points_path = out_prefix + "_crossover_points.csv";
    auto grid = open_out(grid_path);
    write_crossover_csv(grid, result);
    finish(grid, grid_path);
    auto points = open_out(points_path);
    write_crossover_points_csv(points, result);
    finish(points, points_path);

    log << "best policy at p_safe = 0: " << result.grid.front().best_policy << "\n";
    for (const auto& p : result.points) {
        log << "crossover at p_safe = " << fixed(p.p_safe, 6) << ": " << p.from << " -> " << p.to
            << "\n";
    }
    log << "best policy at p_safe = 1: " << result.grid.back().best_policy << "\n";
}

} // namespace colavoid::cli
