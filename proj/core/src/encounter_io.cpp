#include "colavoid/encounter_io.hpp"

#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

namespace colavoid {

namespace {

using json = nlohmann::ordered_json;

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

json state_json(const EciState& x) {
    json j;
    j["r"] = vec_json(x.position);
    j["v"] = vec_json(x.velocity);
    return j;
}

json cov_json(const CovarianceMatrix& c) {
    json a = json::array();
    for (int i = 0; i < 6; ++i) {
        for (int k = 0; k < 6; ++k) a.push_back(c(i, k));
    }
    return a;
}

// Field access with the dotted path in every error message.
const json& field(const json& j, const std::string& path, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw DataError("missing field '" + path + key + "'");
    }
    return j.at(key);
}

double number(const json& j, const std::string& name) {
    if (!j.is_number()) throw DataError("field '" + name + "' must be a number");
    return j.get<double>();
}

Vec3 vec_from(const json& j, const std::string& name) {
    if (!j.is_array() || j.size() != 3) throw DataError("field '" + name + "' must be a 3-array");
    return {number(j[0], name), number(j[1], name), number(j[2], name)};
}

EciState state_from(const json& j, const std::string& name) {
    return {vec_from(field(j, name + ".", "r"), name + ".r"),
            vec_from(field(j, name + ".", "v"), name + ".v")};
}

CovarianceMatrix cov_from(const json& j, const std::string& name) {
    if (!j.is_array() || j.size() != 36) {
        throw DataError("field '" + name + "' must hold 36 row-major values");
    }
    CovarianceMatrix c;
    for (int i = 0; i < 6; ++i) {
        for (int k = 0; k < 6; ++k) c(i, k) = number(j[static_cast<std::size_t>(6 * i + k)], name);
    }
    return c;
}

int hours_from(const json& j, const std::string& name) {
    if (!j.is_number_integer()) throw DataError("field '" + name + "' must be an integer");
    return j.get<int>();
}

json mdp_json(const MdpState& s) {
    json j;
    j["t"] = s.t;
    j["chief"] = state_json(s.chief);
    j["deputy"] = state_json(s.deputy);
    j["sigma_c"] = cov_json(s.sigma_c);
    j["sigma_d"] = cov_json(s.sigma_d);
    j["r_c"] = s.r_c;
    j["r_d"] = s.r_d;
    return j;
}

MdpState mdp_from(const json& j, const std::string& prefix) {
    MdpState s;
    s.t = hours_from(field(j, prefix, "t"), prefix + "t");
    s.chief = state_from(field(j, prefix, "chief"), prefix + "chief");
    s.deputy = state_from(field(j, prefix, "deputy"), prefix + "deputy");
    s.sigma_c = cov_from(field(j, prefix, "sigma_c"), prefix + "sigma_c");
    s.sigma_d = cov_from(field(j, prefix, "sigma_d"), prefix + "sigma_d");
    s.r_c = number(field(j, prefix, "r_c"), prefix + "r_c");
    s.r_d = number(field(j, prefix, "r_d"), prefix + "r_d");
    return s;
}

} // namespace

void write_encounters_jsonl(std::ostream& out, const std::vector<Encounter>& encounters) {
    for (const auto& e : encounters) {
        if (e.pc.size() != e.epochs.size()) {
            throw std::invalid_argument("encounter must be classified before it is written");
        }
        json j;
        j["format"] = kEncounterFormat;
        j["seed"] = e.seed;
        j["class"] = to_string(e.classification);
        j["truth_chief"] = state_json(e.truth_chief);
        j["truth_deputy"] = state_json(e.truth_deputy);
        json epochs = json::array();
        for (std::size_t k = 0; k < e.epochs.size(); ++k) {
            json s = mdp_json(e.epochs[k]);
            s["pc"] = e.pc[k];
            epochs.push_back(std::move(s));
        }
        j["epochs"] = std::move(epochs);
        out << j.dump() << '\n';
    }
    if (!out) throw std::runtime_error("failed writing encounter records");
}

std::vector<Encounter> read_encounters_jsonl(std::istream& in) {
    std::vector<Encounter> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = "encounter line " + std::to_string(line_no) + ": ";
        try {
            const json j = json::parse(line);
            const json& fmt = field(j, "", "format");
            if (!fmt.is_string() || fmt.get<std::string>() != kEncounterFormat) {
                throw DataError("unsupported format '" + (fmt.is_string() ? fmt.get<std::string>() : fmt.dump()) +
                                "', expected '" + std::string(kEncounterFormat) + "'");
            }
            Encounter e;
            const json& seed = field(j, "", "seed");
            if (!seed.is_number_unsigned() && !seed.is_number_integer()) {
                throw DataError("field 'seed' must be an unsigned integer");
            }
            e.seed = seed.get<std::uint64_t>();
            const json& cls = field(j, "", "class");
            if (!cls.is_string()) throw DataError("field 'class' must be a string");
            try {
                e.classification = encounter_class_from_string(cls.get<std::string>());
            } catch (const std::invalid_argument& ex) {
                throw DataError(ex.what());
            }
            e.truth_chief = state_from(field(j, "", "truth_chief"), "truth_chief");
            e.truth_deputy = state_from(field(j, "", "truth_deputy"), "truth_deputy");
            const json& epochs = field(j, "", "epochs");
            if (!epochs.is_array() || epochs.empty()) throw DataError("field 'epochs' must be a non-empty array");
            for (std::size_t k = 0; k < epochs.size(); ++k) {
                const std::string prefix = "epochs[" + std::to_string(k) + "].";
                e.epochs.push_back(mdp_from(epochs[k], prefix));
                e.pc.push_back(number(field(epochs[k], prefix, "pc"), prefix + "pc"));
            }
            out.push_back(std::move(e));
        } catch (const DataError& ex) {
            throw DataError(where + ex.what());
        } catch (const nlohmann::json::exception& ex) {
            throw DataError(where + ex.what());
        }
    }
    return out;
}

std::string mdp_state_to_json(const MdpState& s) { return mdp_json(s).dump(); }

MdpState mdp_state_from_json(std::string_view text) {
    try {
        return mdp_from(json::parse(text), "");
    } catch (const nlohmann::json::exception& ex) {
        throw DataError(std::string("state record: ") + ex.what());
    }
}

} // namespace colavoid
