#pragma once

#include <iosfwd>
#include <string>

#include "colavoid_cli/run_config.hpp"

namespace colavoid::cli {

// Each command validates the config before doing any work. Bad input data raises
// colavoid::DataError, bad configuration ConfigError.

// Writes cfg.encounter_count encounters to out_path and prints the class summary.
void cmd_generate(const RunConfig& cfg, const std::string& out_path, unsigned jobs,
                  std::ostream& log);

// Evaluates every configured policy; writes <out_prefix>.csv and <out_prefix>.jsonl.
void cmd_evaluate(const RunConfig& cfg, const std::string& encounters_path,
                  const std::string& out_prefix, unsigned jobs, std::ostream& log);

// Runs one decision on a single state record and dumps the time-action table.
void cmd_plan(const RunConfig& cfg, const std::string& state_path, std::ostream& out);

// Crossover analysis of an evaluate run; writes <out_prefix>_crossover.csv and
// <out_prefix>_crossover_points.csv.
void cmd_report(const RunConfig& cfg, const std::string& reports_path,
                const std::string& out_prefix, std::ostream& log);

} // namespace colavoid::cli
