#include <benchmark/benchmark.h>

#include "colavoid/conjunction.hpp"
#include "colavoid/mdp.hpp"
#include "colavoid/planners.hpp"
#include "colavoid/scenario.hpp"

using namespace colavoid;

namespace {

// First generated encounter whose epoch at t = 72 is above threshold.
const Encounter& flagged_encounter() {
    static const Encounter e = [] {
        GeneratorConfig cfg;
        const RewardParams rp;
        for (std::uint64_t seed = 1;; ++seed) {
            Encounter c = generate_from_seed(seed, cfg, rp.pc_threshold);
            if (c.classification != EncounterClass::Trivial && c.pc_at(72) > rp.pc_threshold) return c;
        }
    }();
    return e;
}

} // namespace

static void BM_CollisionProbability(benchmark::State& state) {
    const MdpState& s = flagged_encounter().at(72);
    for (auto _ : state) benchmark::DoNotOptimize(collision_probability(s));
}
BENCHMARK(BM_CollisionProbability);

static void BM_Propagate72h(benchmark::State& state) {
    const EciState x = flagged_encounter().truth_chief;
    for (auto _ : state) benchmark::DoNotOptimize(propagate(x, 72.0 * 3600.0));
}
BENCHMARK(BM_Propagate72h);

static void BM_CostToManeuver(benchmark::State& state) {
    const MdpState& s = flagged_encounter().at(72);
    const RewardParams rp;
    for (auto _ : state) benchmark::DoNotOptimize(cost_to_maneuver(s, rp).delta_v);
}
BENCHMARK(BM_CostToManeuver);

static void BM_GenerateEncounter(benchmark::State& state) {
    GeneratorConfig cfg;
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(generate_from_seed(++seed, cfg, 1e-5).pc.size());
}
BENCHMARK(BM_GenerateEncounter);

static void BM_MctsPlan(benchmark::State& state) {
    const MdpState& s = flagged_encounter().at(72);
    MctsConfig cfg;
    cfg.n_sim_max = static_cast<int>(state.range(0));
    cfg.heuristic = Heuristic::Ucb1;
    const PlannerContext ctx;
    Rng rng(7);
    for (auto _ : state) benchmark::DoNotOptimize(mcts_plan(s, cfg, ctx, rng));
}
BENCHMARK(BM_MctsPlan)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
