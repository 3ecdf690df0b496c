#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "colavoid/planners.hpp"
#include "colavoid/scenario.hpp"

namespace colavoid {

// Per-policy metrics. Costs are positive delta-v magnitudes in m/s. A metric whose class
// has no encounters is absent rather than zero.
struct EvaluationReport {
    std::string policy_id;
    std::optional<double> cost_per_safe;
    std::optional<double> cost_per_unsafe;
    std::optional<double> p_success;
    std::size_t n_safe = 0;
    std::size_t n_unsafe = 0;
    // Standard errors (normal approximation).
    std::optional<double> se_cost_per_safe;
    std::optional<double> se_cost_per_unsafe;
    std::optional<double> se_p_success;

    bool operator==(const EvaluationReport&) const = default;
};

struct EvaluationRun {
    EvaluationReport report;
    std::vector<std::optional<EpisodeOutcome>> outcomes; // aligned with input; empty for Trivial
};

// Episode i uses derive_seed(master_seed, Stream::Policy, i). Trivial encounters are skipped.
EvaluationRun evaluate_detailed(const Policy& policy, const std::vector<Encounter>& encounters,
                                const PlannerContext& ctx, std::uint64_t master_seed,
                                unsigned jobs = 1);
EvaluationReport evaluate(const Policy& policy, const std::vector<Encounter>& encounters,
                          const PlannerContext& ctx, std::uint64_t master_seed, unsigned jobs = 1);

// Builds a report from per-encounter outcomes; classes come from the encounters.
EvaluationReport summarize(const std::string& policy_id, const std::vector<Encounter>& encounters,
                           const std::vector<std::optional<EpisodeOutcome>>& outcomes);

// p_safe * cost_per_safe + (1 - p_safe) * cost_per_unsafe.
double estimated_cost(double p_safe, const EvaluationReport& report);

// Sum in fixed pairwise order, independent of how the values were produced.
double pairwise_sum(const std::vector<double>& v);

struct GridPoint {
    double p_safe = 0.0;
    double cost = 0.0;
    std::string best_policy;
};

// Point where the lower envelope switches from one policy to another.
struct CrossoverPoint {
    double p_safe = 0.0;
    std::string from;
    std::string to;
};

struct CrossoverResult {
    std::vector<GridPoint> grid;
    std::vector<CrossoverPoint> points;
};

// Grid runs 0, step, 2 step, ..., 1. Ties go to the earlier report.
CrossoverResult crossover(const std::vector<EvaluationReport>& reports, double grid_step);

void write_reports_csv(std::ostream& out, const std::vector<EvaluationReport>& reports);
void write_reports_jsonl(std::ostream& out, const std::vector<EvaluationReport>& reports);
std::vector<EvaluationReport> read_reports_jsonl(std::istream& in);
void write_crossover_csv(std::ostream& out, const CrossoverResult& result);
void write_crossover_points_csv(std::ostream& out, const CrossoverResult& result);

// Shortest round-trip decimal form; used for every number the reports emit.
std::string format_number(double v);

} // namespace colavoid
