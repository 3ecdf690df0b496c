#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "colavoid/encounter_io.hpp"
#include "colavoid_cli/commands.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    unsigned jobs = 1;
};

void add_common(CLI::App* cmd, CommonOptions& opt, const std::string& default_out) {
    opt.out = default_out;
    cmd->add_option("--config", opt.config_path, "Run configuration (dotted key = value)");
    cmd->add_option("--seed", opt.seed, "Override master_seed");
    cmd->add_option("--out", opt.out, "Output path or prefix")->capture_default_str();
    cmd->add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

colavoid::cli::RunConfig load(const CommonOptions& opt) {
    colavoid::cli::RunConfig cfg;
    if (!opt.config_path.empty()) cfg = colavoid::cli::load_config(opt.config_path);
    if (opt.seed) cfg.master_seed = *opt.seed;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conjunction avoidance planning: encounter generation, policy evaluation, reports"};
    app.require_subcommand(1);

    CommonOptions gen_opt, eval_opt, plan_opt, report_opt;
    std::string eval_input, plan_input, report_input;
    bool print_config = false;

    auto* gen = app.add_subcommand("generate", "Generate an encounter set");
    add_common(gen, gen_opt, "encounters.jsonl");
    gen->add_flag("--print-config", print_config, "Print the effective config and exit");

    auto* eval = app.add_subcommand("evaluate", "Evaluate the configured policies");
    add_common(eval, eval_opt, "reports");
    eval->add_option("encounters", eval_input, "Encounter file from generate")->required();

    auto* plan = app.add_subcommand("plan", "Run one decision on a single state record");
    add_common(plan, plan_opt, "");
    plan->add_option("state", plan_input, "State record (JSON)")->required();

    auto* report = app.add_subcommand("report", "Crossover analysis of evaluate output");
    add_common(report, report_opt, "reports");
    report->add_option("reports", report_input, "Report file (<prefix>.jsonl) from evaluate")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    namespace cli = colavoid::cli;
    try {
        if (gen->parsed()) {
            const auto cfg = load(gen_opt);
            if (print_config) {
                cfg.validate();
                std::cout << cli::serialize_config(cfg);
                return 0;
            }
            cli::cmd_generate(cfg, gen_opt.out, gen_opt.jobs, std::cout);
        } else if (eval->parsed()) {
            cli::cmd_evaluate(load(eval_opt), eval_input, eval_opt.out, eval_opt.jobs, std::cout);
        } else if (plan->parsed()) {
            cli::cmd_plan(load(plan_opt), plan_input, std::cout);
        } else if (report->parsed()) {
            cli::cmd_report(load(report_opt), report_input, report_opt.out, std::cout);
        }
    } catch (const cli::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const colavoid::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
