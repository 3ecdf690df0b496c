#include "colavoid/eval.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "colavoid/parallel.hpp"

namespace colavoid {

namespace {

double pairwise_sum_range(const double* v, std::size_t n) {
    if (n == 0) return 0.0;
    if (n == 1) return v[0];
    const std::size_t half = n / 2;
    return pairwise_sum_range(v, half) + pairwise_sum_range(v + half, n - half);
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    MeanSe out;
    out.mean = pairwise_sum(v) / n;
    if (v.size() < 2) return out;
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - out.mean) * (v[i] - out.mean);
    out.se = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
    return out;
}

std::string optional_number(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
}

nlohmann::json optional_json(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> json_optional(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

struct Line {
    double at_zero; // cost_per_unsafe
    double slope;   // cost_per_safe - cost_per_unsafe
    double at(double p) const { return at_zero + slope * p; }
};

} // namespace

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum_range(v.data(), v.size()); }

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

EvaluationReport summarize(const std::string& policy_id, const std::vector<Encounter>& encounters,
                           const std::vector<std::optional<EpisodeOutcome>>& outcomes) {
    if (outcomes.size() != encounters.size()) {
        throw std::invalid_argument("outcome count does not match encounter count");
    }
    std::vector<double> safe_cost, unsafe_cost, unsafe_success;
    for (std::size_t i = 0; i < encounters.size(); ++i) {
        const EncounterClass c = encounters[i].classification;
        if (c == EncounterClass::Trivial) continue;
        if (!outcomes[i]) throw std::invalid_argument("missing outcome for a non-trivial encounter");
        if (c == EncounterClass::Safe) {
            safe_cost.push_back(outcomes[i]->delta_v_spent);
        } else {
            unsafe_cost.push_back(outcomes[i]->delta_v_spent);
            unsafe_success.push_back(outcomes[i]->mitigated ? 1.0 : 0.0);
        }
    }
    EvaluationReport r;
    r.policy_id = policy_id;
    r.n_safe = safe_cost.size();
    r.n_unsafe = unsafe_cost.size();
    if (!safe_cost.empty()) {
        const MeanSe m = mean_and_se(safe_cost);
        r.cost_per_safe = m.mean;
        r.se_cost_per_safe = m.se;
    }
    if (!unsafe_cost.empty()) {
        const MeanSe m = mean_and_se(unsafe_cost);
        r.cost_per_unsafe = m.mean;
        r.se_cost_per_unsafe = m.se;
        const double p = pairwise_sum(unsafe_success) / static_cast<double>(unsafe_success.size());
        r.p_success = p;
        r.se_p_success = std::sqrt(p * (1.0 - p) / static_cast<double>(unsafe_success.size()));
    }
    return r;
}

EvaluationRun evaluate_detailed(const Policy& policy, const std::vector<Encounter>& encounters,
                                const PlannerContext& ctx, std::uint64_t master_seed,
                                unsigned jobs) {
    ctx.transition.validate();
    ctx.reward.validate();
    EvaluationRun run;
    run.outcomes.resize(encounters.size());
    parallel_for(encounters.size(), jobs, [&](std::size_t i) {
        if (encounters[i].classification == EncounterClass::Trivial) return;
        Rng rng(derive_seed(master_seed, Stream::Policy, i));
        run.outcomes[i] = run_sequence(encounters[i], policy, ctx, rng);
    });
    run.report = summarize(policy.label(), encounters, run.outcomes);
    return run;
}

EvaluationReport evaluate(const Policy& policy, const std::vector<Encounter>& encounters,
                          const PlannerContext& ctx, std::uint64_t master_seed, unsigned jobs) {
    return evaluate_detailed(policy, encounters, ctx, master_seed, jobs).report;
}

double estimated_cost(double p_safe, const EvaluationReport& report) {
    if (!(p_safe >= 0.0 && p_safe <= 1.0)) throw std::invalid_argument("p_safe must lie in [0,1]");
    if (!report.cost_per_safe || !report.cost_per_unsafe) {
        throw std::invalid_argument("report '" + report.policy_id + "' lacks a per-class cost");
    }
    return p_safe * *report.cost_per_safe + (1.0 - p_safe) * *report.cost_per_unsafe;
}

CrossoverResult crossover(const std::vector<EvaluationReport>& reports, double grid_step) {
    if (reports.size() < 2) throw std::invalid_argument("crossover needs at least two reports");
    if (!(grid_step > 0.0 && grid_step <= 1.0)) {
        throw std::invalid_argument("grid_step must lie in (0,1]");
    }
    std::vector<Line> lines;
    lines.reserve(reports.size());
    for (const auto& r : reports) {
        const double at_zero = estimated_cost(0.0, r);
        lines.push_back({at_zero, estimated_cost(1.0, r) - at_zero});
    }

    auto best_at = [&](double p) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < lines.size(); ++k) {
            if (lines[k].at(p) < lines[best].at(p)) best = k;
        }
        return best;
    };

    CrossoverResult out;
    const auto steps = static_cast<std::size_t>(std::floor(1.0 / grid_step + 1e-9));
    for (std::size_t k = 0; k <= steps; ++k) {
        const double p = std::min(1.0, static_cast<double>(k) * grid_step);
        const std::size_t b = best_at(p);
        out.grid.push_back({p, lines[b].at(p), reports[b].policy_id});
    }
    if (out.grid.back().p_safe < 1.0) {
        const std::size_t b = best_at(1.0);
        out.grid.push_back({1.0, lines[b].at(1.0), reports[b].policy_id});
    }

    // Walk the lower envelope from p = 0. At a shared minimum the smaller slope owns the
    // interval to the right.
    std::size_t cur = best_at(0.0);
    for (std::size_t k = 0; k < lines.size(); ++k) {
        if (lines[k].at(0.0) == lines[cur].at(0.0) && lines[k].slope < lines[cur].slope) cur = k;
    }
    double p0 = 0.0;
    for (;;) {
        std::optional<std::size_t> next;
        double p_next = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < lines.size(); ++k) {
            if (!(lines[k].slope < lines[cur].slope)) continue;
            const double p = (lines[k].at_zero - lines[cur].at_zero) /
                             (lines[cur].slope - lines[k].slope);
            if (p < p0) continue;
            if (p < p_next || (p == p_next && lines[k].slope < lines[*next].slope)) {
                p_next = p;
                next = k;
            }
        }
        if (!next || p_next > 1.0) break;
        out.points.push_back({p_next, reports[cur].policy_id, reports[*next].policy_id});
        cur = *next;
        p0 = p_next;
    }
    return out;
}

void write_reports_csv(std::ostream& out, const std::vector<EvaluationReport>& reports) {
    out << "policy_id,cost_per_safe,cost_per_unsafe,p_success,n_safe,n_unsafe,"
           "se_cost_per_safe,se_cost_per_unsafe,se_p_success\n";
    for (const auto& r : reports) {
        out << r.policy_id << ',' << optional_number(r.cost_per_safe) << ','
            << optional_number(r.cost_per_unsafe) << ',' << optional_number(r.p_success) << ','
            << r.n_safe << ',' << r.n_unsafe << ',' << optional_number(r.se_cost_per_safe) << ','
            << optional_number(r.se_cost_per_unsafe) << ',' << optional_number(r.se_p_success)
            << '\n';
    }
}

void write_reports_jsonl(std::ostream& out, const std::vector<EvaluationReport>& reports) {
    for (const auto& r : reports) {
        nlohmann::ordered_json j;
        j["policy_id"] = r.policy_id;
        j["cost_per_safe"] = optional_json(r.cost_per_safe);
        j["cost_per_unsafe"] = optional_json(r.cost_per_unsafe);
        j["p_success"] = optional_json(r.p_success);
        j["n_safe"] = r.n_safe;
        j["n_unsafe"] = r.n_unsafe;
        j["se_cost_per_safe"] = optional_json(r.se_cost_per_safe);
        j["se_cost_per_unsafe"] = optional_json(r.se_cost_per_unsafe);
        j["se_p_success"] = optional_json(r.se_p_success);
        out << j.dump() << '\n';
    }
}

std::vector<EvaluationReport> read_reports_jsonl(std::istream& in) {
    std::vector<EvaluationReport> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            EvaluationReport r;
            r.policy_id = j.at("policy_id").get<std::string>();
            r.cost_per_safe = json_optional(j, "cost_per_safe");
            r.cost_per_unsafe = json_optional(j, "cost_per_unsafe");
            r.p_success = json_optional(j, "p_success");
            r.n_safe = j.at("n_safe").get<std::size_t>();
            r.n_unsafe = j.at("n_unsafe").get<std::size_t>();
            r.se_cost_per_safe = json_optional(j, "se_cost_per_safe");
            r.se_cost_per_unsafe = json_optional(j, "se_cost_per_unsafe");
            r.se_p_success = json_optional(j, "se_p_success");
            out.push_back(std::move(r));
        } catch (const nlohmann::json::exception& ex) {
            throw std::runtime_error("report line " + std::to_string(line_no) + ": " + ex.what());
        }
    }
    return out;
}

void write_crossover_csv(std::ostream& out, const CrossoverResult& result) {
    out << "p_safe,cost,best_policy\n";
    for (const auto& g : result.grid) {
        out << format_number(g.p_safe) << ',' << format_number(g.cost) << ',' << g.best_policy
            << '\n';
    }
}

void write_crossover_points_csv(std::ostream& out, const CrossoverResult& result) {
    out << "p_safe,from,to\n";
    for (const auto& p : result.points) {
        out << format_number(p.p_safe) << ',' << p.from << ',' << p.to << '\n';
    }
}

} // namespace colavoid
