#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>

#include "colavoid/eval.hpp"
#include "colavoid/planners.hpp"
#include "colavoid/scenario.hpp"

using namespace colavoid;

namespace {

EvaluationReport row(const std::string& id, double safe, double unsafe, double p = 1.0) {
    EvaluationReport r;
    r.policy_id = id;
    r.cost_per_safe = safe;
    r.cost_per_unsafe = unsafe;
    r.p_success = p;
    r.n_safe = 100;
    r.n_unsafe = 100;
    return r;
}

// Costs per safe / unsafe encounter and p_success as published for the thirteen planners.
std::vector<EvaluationReport> published_rows() {
    return {
        row("mcts_full_sd", 0.01095, 0.01182, 0.999),
        row("mcts_full_ucb1", 0.01112, 0.01344, 0.998),
        row("mcts_limited_sd", 0.01043, 0.01546, 0.982),
        row("mcts_limited_ucb1", 0.01071, 0.01357, 0.994),
        row("rule_72", 0.01109, 0.01173, 1.0),
        row("rule_64", 0.01134, 0.01244, 0.999),
        row("rule_56", 0.01166, 0.01333, 0.999),
        row("rule_48", 0.01213, 0.01428, 0.998),
        row("rule_40", 0.01252, 0.01539, 0.996),
        row("rule_32", 0.01332, 0.01626, 0.993),
        row("rule_24", 0.01471, 0.01844, 0.989),
        row("rule_16", 0.01691, 0.02383, 0.978),
        row("rule_8", 0.01842, 0.03656, 0.939),
    };
}

// Intersection of two affine cost lines in p_safe.
double intersect(const EvaluationReport& a, const EvaluationReport& b) {
    const double da = *a.cost_per_safe - *a.cost_per_unsafe;
    const double db = *b.cost_per_safe - *b.cost_per_unsafe;
    return (*b.cost_per_unsafe - *a.cost_per_unsafe) / (da - db);
}

// Brute-force argmin at one p_safe.
std::string best_at(const std::vector<EvaluationReport>& rs, double p) {
    std::string best;
    double cost = INFINITY;
    for (const auto& r : rs) {
        const double c = p * *r.cost_per_safe + (1.0 - p) * *r.cost_per_unsafe;
        if (c < cost) {
            cost = c;
            best = r.policy_id;
        }
    }
    return best;
}

} // namespace

TEST(EstimatedCost, EndpointsAndMidpoint) {
    const EvaluationReport r = row("x", 0.01095, 0.01182);
    EXPECT_EQ(estimated_cost(1.0, r), 0.01095);
    EXPECT_EQ(estimated_cost(0.0, r), 0.01182);
    EXPECT_NEAR(estimated_cost(0.5, r), 0.011385, 1e-15);
}

TEST(EstimatedCost, AffineInPSafe) {
    const EvaluationReport r = row("x", 0.25, 0.75);
    // Dyadic values keep the arithmetic exact.
    for (double p : {0.0, 0.125, 0.25, 0.5, 0.625, 1.0}) {
        EXPECT_EQ(estimated_cost(p, r), p * 0.25 + (1.0 - p) * 0.75);
    }
    for (double p1 : {0.0, 0.25, 0.5}) {
        for (double p2 : {0.5, 0.75, 1.0}) {
            const double lambda = 0.25;
            EXPECT_EQ(estimated_cost(lambda * p1 + (1 - lambda) * p2, r),
                      lambda * estimated_cost(p1, r) + (1 - lambda) * estimated_cost(p2, r));
        }
    }
}

TEST(EstimatedCost, RejectsMissingMetricsAndBadWeight) {
    EvaluationReport r = row("x", 0.1, 0.2);
    EXPECT_THROW(estimated_cost(1.5, r), std::invalid_argument);
    EXPECT_THROW(estimated_cost(-0.1, r), std::invalid_argument);
    r.cost_per_safe.reset();
    EXPECT_THROW(estimated_cost(0.5, r), std::invalid_argument);
}

TEST(Crossover, PublishedPair) {
    const std::vector<EvaluationReport> rs{row("rule_72", 0.01109, 0.01173),
                                           row("mcts_limited_sd", 0.01043, 0.01546)};
    const CrossoverResult c = crossover(rs, 0.01);
    ASSERT_EQ(c.points.size(), 1u);
    EXPECT_NEAR(c.points[0].p_safe, 0.00373 / (0.00373 + 0.00066), 1e-12);
    EXPECT_NEAR(c.points[0].p_safe, 0.849658, 1e-6);
    EXPECT_EQ(c.points[0].from, "rule_72");
    EXPECT_EQ(c.points[0].to, "mcts_limited_sd");
}

TEST(Crossover, PublishedThirteenPolicyEnvelope) {
    const auto rs = published_rows();
    const CrossoverResult c = crossover(rs, 0.01);
    ASSERT_EQ(c.points.size(), 2u);
    EXPECT_EQ(c.points[0].from, "rule_72");
    EXPECT_EQ(c.points[0].to, "mcts_full_sd");
    EXPECT_NEAR(c.points[0].p_safe, intersect(rs[4], rs[0]), 1e-12);
    EXPECT_NEAR(c.points[0].p_safe, 0.391304, 1e-6);
    EXPECT_EQ(c.points[1].from, "mcts_full_sd");
    EXPECT_EQ(c.points[1].to, "mcts_limited_sd");
    EXPECT_NEAR(c.points[1].p_safe, intersect(rs[0], rs[2]), 1e-12);
    EXPECT_NEAR(c.points[1].p_safe, 0.875, 1e-9);

    ASSERT_EQ(c.grid.size(), 101u);
    for (const auto& g : c.grid) {
        EXPECT_EQ(g.best_policy, best_at(rs, g.p_safe)) << "p_safe " << g.p_safe;
        double lowest = INFINITY;
        for (const auto& r : rs) lowest = std::min(lowest, estimated_cost(g.p_safe, r));
        EXPECT_NEAR(g.cost, lowest, 1e-15);
    }
    EXPECT_EQ(c.grid.front().p_safe, 0.0);
    EXPECT_EQ(c.grid.back().p_safe, 1.0);
}

TEST(Crossover, IdenticalReportsNeverSwitch) {
    const std::vector<EvaluationReport> rs{row("a", 0.1, 0.2), row("b", 0.1, 0.2)};
    const CrossoverResult c = crossover(rs, 0.05);
    EXPECT_TRUE(c.points.empty());
    for (const auto& g : c.grid) EXPECT_EQ(g.best_policy, "a");
}

TEST(Crossover, DominatedPolicyNeverBest) {
    const std::vector<EvaluationReport> rs{row("cheap_safe", 0.1, 0.5), row("dominated", 0.4, 0.6),
                                           row("cheap_unsafe", 0.5, 0.1)};
    const CrossoverResult c = crossover(rs, 0.001);
    for (const auto& g : c.grid) EXPECT_NE(g.best_policy, "dominated");
    ASSERT_EQ(c.points.size(), 1u);
    EXPECT_NEAR(c.points[0].p_safe, 0.5, 1e-12);
}

TEST(Crossover, GridIncludesOneForAwkwardSteps) {
    const std::vector<EvaluationReport> rs{row("a", 0.1, 0.2), row("b", 0.2, 0.1)};
    const CrossoverResult c = crossover(rs, 0.3);
    EXPECT_EQ(c.grid.back().p_safe, 1.0);
    EXPECT_THROW(crossover(rs, 0.0), std::invalid_argument);
    EXPECT_THROW(crossover({rs[0]}, 0.1), std::invalid_argument);
}

TEST(PairwiseSum, OrderFixedAndAccurate) {
    std::vector<double> v(1000, 0.1);
    EXPECT_NEAR(pairwise_sum(v), 100.0, 1e-12);
    EXPECT_EQ(pairwise_sum({}), 0.0);
}

TEST(Reports, JsonlRoundTripWithAbsentMetrics) {
    std::vector<EvaluationReport> rs = published_rows();
    EvaluationReport empty;
    empty.policy_id = "no_safe";
    empty.cost_per_unsafe = 0.3;
    empty.p_success = 0.5;
    empty.se_cost_per_unsafe = 0.01;
    empty.se_p_success = 0.1;
    empty.n_unsafe = 4;
    rs.push_back(empty);
    std::stringstream buf;
    write_reports_jsonl(buf, rs);
    const auto back = read_reports_jsonl(buf);
    ASSERT_EQ(back.size(), rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) EXPECT_EQ(back[i], rs[i]);
}

TEST(Reports, CsvLayout) {
    std::stringstream buf;
    EvaluationReport r = row("rule_8", 0.5, 0.25, 0.75);
    r.cost_per_safe.reset();
    r.n_safe = 0;
    write_reports_csv(buf, {r});
    std::string header, line;
    std::getline(buf, header);
    std::getline(buf, line);
    EXPECT_EQ(header,
              "policy_id,cost_per_safe,cost_per_unsafe,p_success,n_safe,n_unsafe,se_cost_per_safe,"
              "se_cost_per_unsafe,se_p_success");
    EXPECT_EQ(line, "rule_8,,0.25,0.75,0,100,,,");
}

TEST(Reports, ReaderRejectsGarbage) {
    std::stringstream buf("{\"policy_id\": 3}\n");
    EXPECT_THROW(read_reports_jsonl(buf), std::runtime_error);
}

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1e-5), "1e-05");
    const double x = 0.011385000000000001;
    EXPECT_EQ(std::stod(format_number(x)), x);
}

TEST(Evaluate, AlwaysWaitAndLongestCutoff) {
    const auto encounters = generate_encounters(3, 300, GeneratorConfig{}, 1e-5);
    const PlannerContext ctx;
    const EvaluationReport wait = evaluate(AlwaysWaitPolicy(), encounters, ctx, 1);
    ASSERT_GT(wait.n_safe, 0u);
    ASSERT_GT(wait.n_unsafe, 0u);
    EXPECT_EQ(*wait.cost_per_safe, 0.0);
    EXPECT_EQ(*wait.cost_per_unsafe, 0.0);
    EXPECT_EQ(*wait.p_success, 0.0);

    // Restrict to encounters already flagged at the first message.
    std::vector<Encounter> flagged;
    for (const auto& e : encounters) {
        if (e.classification == EncounterClass::Unsafe && e.pc.front() > 1e-5) flagged.push_back(e);
    }
    ASSERT_FALSE(flagged.empty());
    const EvaluationReport first = evaluate(RuleBasedPolicy(72), flagged, ctx, 1);
    EXPECT_EQ(*first.p_success, 1.0);
    EXPECT_GT(*first.cost_per_unsafe, 0.0);
}

TEST(Evaluate, CountsMatchAndDeterministicAcrossJobs) {
    const auto encounters = generate_encounters(4, 200, GeneratorConfig{}, 1e-5);
    std::size_t safe = 0, unsafe = 0;
    for (const auto& e : encounters) {
        safe += e.classification == EncounterClass::Safe;
        unsafe += e.classification == EncounterClass::Unsafe;
    }
    const PlannerContext ctx;
    MctsConfig cfg;
    cfg.n_sim_max = 20;
    cfg.heuristic = Heuristic::StochasticDepth;
    const MctsPolicy mcts(cfg);
    const EvaluationReport a = evaluate(mcts, encounters, ctx, 9, 1);
    const EvaluationReport b = evaluate(mcts, encounters, ctx, 9, 3);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.n_safe, safe);
    EXPECT_EQ(a.n_unsafe, unsafe);
    EXPECT_GE(*a.p_success, 0.0);
    EXPECT_LE(*a.p_success, 1.0);
}
