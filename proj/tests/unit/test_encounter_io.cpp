#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "colavoid/encounter_io.hpp"
#include "colavoid/scenario.hpp"

using namespace colavoid;

namespace {

void expect_same(const Encounter& a, const Encounter& b) {
    EXPECT_EQ(a.seed, b.seed);
    EXPECT_EQ(a.classification, b.classification);
    EXPECT_EQ(a.truth_chief, b.truth_chief);
    EXPECT_EQ(a.truth_deputy, b.truth_deputy);
    EXPECT_EQ(a.pc, b.pc);
    ASSERT_EQ(a.epochs.size(), b.epochs.size());
    for (std::size_t k = 0; k < a.epochs.size(); ++k) {
        EXPECT_EQ(a.epochs[k].t, b.epochs[k].t);
        EXPECT_EQ(a.epochs[k].chief, b.epochs[k].chief);
        EXPECT_EQ(a.epochs[k].deputy, b.epochs[k].deputy);
        EXPECT_EQ(a.epochs[k].sigma_c, b.epochs[k].sigma_c);
        EXPECT_EQ(a.epochs[k].sigma_d, b.epochs[k].sigma_d);
        EXPECT_EQ(a.epochs[k].r_c, b.epochs[k].r_c);
        EXPECT_EQ(a.epochs[k].r_d, b.epochs[k].r_d);
    }
}

std::string one_record() {
    std::stringstream buf;
    write_encounters_jsonl(buf, {generate_from_seed(42, GeneratorConfig{}, 1e-5)});
    return buf.str();
}

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
    const auto pos = s.find(from);
    if (pos != std::string::npos) s.replace(pos, from.size(), to);
    return s;
}

} // namespace

TEST(EncounterIo, RoundTripIsExact) {
    const auto encounters = generate_encounters(8, 25, GeneratorConfig{}, 1e-5);
    std::stringstream buf;
    write_encounters_jsonl(buf, encounters);
    const auto back = read_encounters_jsonl(buf);
    ASSERT_EQ(back.size(), encounters.size());
    for (std::size_t i = 0; i < back.size(); ++i) expect_same(encounters[i], back[i]);
}

TEST(EncounterIo, RejectsOtherFormatTag) {
    std::stringstream buf(replace_once(one_record(), "colavoid.encounter.v1", "colavoid.encounter.v0"));
    try {
        read_encounters_jsonl(buf);
        FAIL() << "expected DataError";
    } catch (const DataError& ex) {
        EXPECT_NE(std::string(ex.what()).find("unsupported format"), std::string::npos);
        EXPECT_NE(std::string(ex.what()).find("line 1"), std::string::npos);
    }
}

TEST(EncounterIo, NamesMissingField) {
    std::stringstream buf(replace_once(one_record(), "\"pc\":", "\"pc_missing\":"));
    try {
        read_encounters_jsonl(buf);
        FAIL() << "expected DataError";
    } catch (const DataError& ex) {
        EXPECT_NE(std::string(ex.what()).find("epochs[0].pc"), std::string::npos) << ex.what();
    }
}

TEST(EncounterIo, RejectsMalformedJsonAndUnknownClass) {
    std::stringstream bad("{not json}\n");
    EXPECT_THROW(read_encounters_jsonl(bad), DataError);
    const std::string rec = one_record();
    const auto cls = rec.find("\"class\":\"");
    ASSERT_NE(cls, std::string::npos);
    std::string broken = rec;
    const auto start = cls + 9;
    broken.replace(start, rec.find('"', start) - start, "lethal");
    std::stringstream in(broken);
    EXPECT_THROW(read_encounters_jsonl(in), DataError);
}

TEST(EncounterIo, UnclassifiedEncounterNotWritten) {
    Encounter e = generate_from_seed(1, GeneratorConfig{}, 1e-5);
    e.pc.clear();
    std::stringstream buf;
    EXPECT_THROW(write_encounters_jsonl(buf, {e}), std::invalid_argument);
}

TEST(StateRecord, RoundTrip) {
    const Encounter e = generate_from_seed(3, GeneratorConfig{}, 1e-5);
    const MdpState& s = e.epochs[2];
    const MdpState back = mdp_state_from_json(mdp_state_to_json(s));
    EXPECT_EQ(back.t, s.t);
    EXPECT_EQ(back.chief, s.chief);
    EXPECT_EQ(back.sigma_d, s.sigma_d);
    EXPECT_EQ(back.r_d, s.r_d);
    EXPECT_THROW(mdp_state_from_json("{\"t\": 8}"), DataError);
    EXPECT_THROW(mdp_state_from_json("[1,2"), DataError);
}
