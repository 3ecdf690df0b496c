#include "colavoid_cli/run_config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "colavoid/eval.hpp"

namespace colavoid::cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    }
    return out;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
    Int out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("key '" + key + "': expected true or false, got '" + v + "'");
}

Vec3 to_vec3(const std::string& key, const std::string& v) {
    const auto parts = split_list(v);
    if (parts.size() != 3) throw ConfigError("key '" + key + "': expected three comma-separated numbers");
    return {to_double(key, parts[0]), to_double(key, parts[1]), to_double(key, parts[2])};
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i];
    }
    return out;
}

std::string vec3_text(const Vec3& v) {
    return format_number(v[0]) + ", " + format_number(v[1]) + ", " + format_number(v[2]);
}

struct Field {
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string& key, const std::string& value)> set;
};

template <class Access>
Field real(Access access) {
    return {[access](const RunConfig& c) { return format_number(access(const_cast<RunConfig&>(c))); },
            [access](RunConfig& c, const std::string& k, const std::string& v) {
                access(c) = to_double(k, v);
            }};
}

template <class Int, class Access>
Field integer(Access access) {
    return {[access](const RunConfig& c) { return std::to_string(access(const_cast<RunConfig&>(c))); },
            [access](RunConfig& c, const std::string& k, const std::string& v) {
                access(c) = to_int<Int>(k, v);
            }};
}

template <class Access>
Field vec3(Access access) {
    return {[access](const RunConfig& c) { return vec3_text(access(const_cast<RunConfig&>(c))); },
            [access](RunConfig& c, const std::string& k, const std::string& v) {
                access(c) = to_vec3(k, v);
            }};
}

void add_range(std::vector<std::pair<std::string, Field>>& f, const std::string& name,
               Range& (*access)(RunConfig&)) {
    f.emplace_back(name + ".min", real([access](RunConfig& c) -> double& { return access(c).min; }));
    f.emplace_back(name + ".max", real([access](RunConfig& c) -> double& { return access(c).max; }));
}

// Ordered key table: serialization follows this order.
const std::vector<std::pair<std::string, Field>>& fields() {
    static const std::vector<std::pair<std::string, Field>> table = [] {
        std::vector<std::pair<std::string, Field>> f;
        f.emplace_back("master_seed", integer<std::uint64_t>([](RunConfig& c) -> std::uint64_t& { return c.master_seed; }));
        f.emplace_back("encounter_count", integer<std::size_t>([](RunConfig& c) -> std::size_t& { return c.encounter_count; }));

        add_range(f, "generator.altitude", [](RunConfig& c) -> Range& { return c.generator.elements.altitude; });
        add_range(f, "generator.e", [](RunConfig& c) -> Range& { return c.generator.elements.e; });
        add_range(f, "generator.i", [](RunConfig& c) -> Range& { return c.generator.elements.i; });
        add_range(f, "generator.raan", [](RunConfig& c) -> Range& { return c.generator.elements.raan; });
        add_range(f, "generator.argp", [](RunConfig& c) -> Range& { return c.generator.elements.argp; });
        add_range(f, "generator.mean_anomaly", [](RunConfig& c) -> Range& { return c.generator.elements.mean_anomaly; });
        f.emplace_back("generator.sigma_c.mean", vec3([](RunConfig& c) -> Vec3& { return c.generator.sigma_c_prior.mean; }));
        f.emplace_back("generator.sigma_c.spread", vec3([](RunConfig& c) -> Vec3& { return c.generator.sigma_c_prior.spread; }));
        f.emplace_back("generator.sigma_d.mean", vec3([](RunConfig& c) -> Vec3& { return c.generator.sigma_d_prior.mean; }));
        f.emplace_back("generator.sigma_d.spread", vec3([](RunConfig& c) -> Vec3& { return c.generator.sigma_d_prior.spread; }));
        add_range(f, "generator.hardbody", [](RunConfig& c) -> Range& { return c.generator.hardbody; });
        f.emplace_back("generator.deputy_offset_sigma", real([](RunConfig& c) -> double& { return c.generator.deputy_offset_sigma; }));
        f.emplace_back("generator.p_obs", real([](RunConfig& c) -> double& { return c.generator.p_obs; }));
        f.emplace_back("generator.k_c", real([](RunConfig& c) -> double& { return c.generator.k_c; }));
        f.emplace_back("generator.k_d_lower", real([](RunConfig& c) -> double& { return c.generator.k_d_lower; }));
        f.emplace_back("generator.k_d_upper", real([](RunConfig& c) -> double& { return c.generator.k_d_upper; }));
        f.emplace_back("generator.measured_tca",
                       Field{[](const RunConfig& c) { return std::string(c.generator.measured_tca ? "true" : "false"); },
                             [](RunConfig& c, const std::string& k, const std::string& v) {
                                 c.generator.measured_tca = to_bool(k, v);
                             }});

        f.emplace_back("transition.p_obs", real([](RunConfig& c) -> double& { return c.transition.p_obs; }));
        f.emplace_back("transition.k_c", real([](RunConfig& c) -> double& { return c.transition.k_c; }));
        f.emplace_back("transition.k_d_lower", real([](RunConfig& c) -> double& { return c.transition.k_d_lower; }));
        f.emplace_back("transition.k_d_upper", real([](RunConfig& c) -> double& { return c.transition.k_d_upper; }));

        f.emplace_back("reward.r_crash", real([](RunConfig& c) -> double& { return c.reward.r_crash; }));
        f.emplace_back("reward.pc_threshold", real([](RunConfig& c) -> double& { return c.reward.pc_threshold; }));
        f.emplace_back("reward.delta_v_step", real([](RunConfig& c) -> double& { return c.reward.delta_v_step; }));
        f.emplace_back("reward.max_steps", integer<std::int64_t>([](RunConfig& c) -> std::int64_t& { return c.reward.max_steps; }));

        f.emplace_back("mcts.n_sim_max", integer<int>([](RunConfig& c) -> int& { return c.mcts.n_sim_max; }));
        f.emplace_back("mcts.gamma", real([](RunConfig& c) -> double& { return c.mcts.gamma; }));
        f.emplace_back("mcts.c", real([](RunConfig& c) -> double& { return c.mcts.c; }));

        f.emplace_back("policies",
                       Field{[](const RunConfig& c) { return join(c.policies); },
                             [](RunConfig& c, const std::string&, const std::string& v) {
                                 c.policies = split_list(v);
                             }});
        f.emplace_back("plan.policy",
                       Field{[](const RunConfig& c) { return c.plan_policy; },
                             [](RunConfig& c, const std::string&, const std::string& v) { c.plan_policy = v; }});
        f.emplace_back("report.grid_step", real([](RunConfig& c) -> double& { return c.grid_step; }));
        return f;
    }();
    return table;
}

} // namespace

std::vector<std::string> default_policies() {
    return {"mcts:full:sd", "mcts:full:ucb1", "mcts:limited:sd", "mcts:limited:ucb1",
            "rule:72",      "rule:64",        "rule:56",         "rule:48",
            "rule:40",      "rule:32",        "rule:24",         "rule:16",
            "rule:8"};
}

void RunConfig::validate() const {
    try {
        generator.validate();
        transition.validate();
        reward.validate();
        mcts.validate();
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(std::string("invalid config: ") + ex.what());
    }
    if (generator.epoch_step != kEpochStepHours || generator.horizon != kHorizonHours) {
        throw ConfigError("invalid config: generator epochs must match the 8 h / 72 h decision grid");
    }
    if (encounter_count < 1) throw ConfigError("invalid config: encounter_count must be at least 1");
    if (!(grid_step > 0.0 && grid_step <= 1.0)) {
        throw ConfigError("invalid config: report.grid_step must lie in (0,1]");
    }
    std::set<std::string> labels;
    for (const auto& spec : policies) {
        std::string label;
        try {
            label = make_policy(spec, mcts)->label();
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(std::string("invalid config: ") + ex.what());
        }
        if (!labels.insert(label).second) {
            throw ConfigError("invalid config: duplicate policy '" + spec + "'");
        }
    }
    try {
        make_policy(plan_policy, mcts);
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(std::string("invalid config: plan.policy: ") + ex.what());
    }
}

RunConfig parse_config(std::string_view text) {
    std::map<std::string, const Field*> by_key;
    for (const auto& [k, f] : fields()) by_key[k] = &f;

    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        auto it = by_key.find(key);
        if (it == by_key.end()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        if (!seen.insert(key).second) {
            throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        it->second->set(cfg, key, value);
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& ex) {
        throw ConfigError(path + ": " + ex.what());
    }
}

std::string serialize_config(const RunConfig& cfg) {
    std::string out;
    for (const auto& [k, f] : fields()) out += k + " = " + f.get(cfg) + "\n";
    return out;
}

} // namespace colavoid::cli
