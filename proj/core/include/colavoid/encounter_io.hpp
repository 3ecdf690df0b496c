#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "colavoid/scenario.hpp"
#include "colavoid/types.hpp"

namespace colavoid {

// Every encounter record carries this tag; readers reject any other value.
inline constexpr std::string_view kEncounterFormat = "colavoid.encounter.v1";

// Malformed or incompatible input data (as opposed to a usage error).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One JSON object per line: format, seed, class, radii, truth states and the epoch list
// (t, chief, deputy, sigma_c, sigma_d as 36 row-major values, pc).
void write_encounters_jsonl(std::ostream& out, const std::vector<Encounter>& encounters);
std::vector<Encounter> read_encounters_jsonl(std::istream& in);

// A single decision state: {"t", "chief": {"r", "v"}, "deputy", "sigma_c", "sigma_d", "r_c", "r_d"}.
std::string mdp_state_to_json(const MdpState& s);
MdpState mdp_state_from_json(std::string_view text);

} // namespace colavoid
