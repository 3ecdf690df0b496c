#include <string>

#include <gtest/gtest.h>

#include "colavoid_cli/run_config.hpp"

using namespace colavoid;
using namespace colavoid::cli;

TEST(RunConfig, DefaultsValidateAndListThirteenPolicies) {
    const RunConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_EQ(cfg.policies.size(), 13u);
    EXPECT_EQ(cfg.policies.front(), "mcts:full:sd");
    EXPECT_EQ(cfg.policies.back(), "rule:8");
}

TEST(RunConfig, SerializeParseRoundTrip) {
    RunConfig cfg;
    cfg.master_seed = 987654321987654321ull;
    cfg.encounter_count = 77;
    cfg.generator.sigma_d_prior.mean = Vec3(1.5, 20.25, 3.0);
    cfg.generator.measured_tca = false;
    cfg.reward.delta_v_step = 1e-3;
    cfg.mcts.c = 0.3;
    cfg.policies = {"rule:24", "mcts:limited:sd"};
    cfg.grid_step = 0.05;
    const std::string text = serialize_config(cfg);
    const RunConfig back = parse_config(text);
    EXPECT_EQ(serialize_config(back), text);
    EXPECT_EQ(back.master_seed, cfg.master_seed);
    EXPECT_EQ(back.generator.sigma_d_prior.mean, cfg.generator.sigma_d_prior.mean);
    EXPECT_FALSE(back.generator.measured_tca);
    EXPECT_EQ(back.policies, cfg.policies);
}

TEST(RunConfig, CommentsAndPartialOverrides) {
    const RunConfig cfg = parse_config("# comment\n\nmaster_seed = 5  # trailing\nmcts.gamma=0.9\n");
    EXPECT_EQ(cfg.master_seed, 5u);
    EXPECT_EQ(cfg.mcts.gamma, 0.9);
    EXPECT_EQ(cfg.encounter_count, RunConfig{}.encounter_count);
}

TEST(RunConfig, RejectsUnknownDuplicateAndMalformed) {
    EXPECT_THROW(parse_config("no_such_key = 1\n"), ConfigError);
    EXPECT_THROW(parse_config("master_seed = 1\nmaster_seed = 2\n"), ConfigError);
    EXPECT_THROW(parse_config("master_seed 1\n"), ConfigError);
    EXPECT_THROW(parse_config("mcts.gamma = fast\n"), ConfigError);
    EXPECT_THROW(parse_config("generator.sigma_c.mean = 1, 2\n"), ConfigError);
    EXPECT_THROW(parse_config("generator.measured_tca = yes\n"), ConfigError);
    try {
        parse_config("master_seed = 1\n\nbogus = 3\n");
        FAIL();
    } catch (const ConfigError& ex) {
        EXPECT_NE(std::string(ex.what()).find("line 3"), std::string::npos);
    }
}

TEST(RunConfig, ValidationCatchesBadValues) {
    EXPECT_THROW(parse_config("mcts.gamma = 2\n").validate(), ConfigError);
    EXPECT_THROW(parse_config("policies = rule:8, rule:8\n").validate(), ConfigError);
    EXPECT_THROW(parse_config("policies = rule:9\n").validate(), ConfigError);
    EXPECT_THROW(parse_config("plan.policy = best\n").validate(), ConfigError);
    EXPECT_THROW(parse_config("report.grid_step = 0\n").validate(), ConfigError);
    EXPECT_THROW(parse_config("encounter_count = 0\n").validate(), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/colavoid.cfg"), ConfigError);
}
