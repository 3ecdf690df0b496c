#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "colavoid/mdp.hpp"
#include "colavoid/orbital.hpp"
#include "colavoid/random.hpp"
#include "colavoid/types.hpp"

namespace colavoid {

struct Range {
    double min = 0.0;
    double max = 0.0;
};

// Sampling box for the chief's elements. Semi-major axis bounds are altitudes above
// the gravity model's equatorial radius; angles in degrees.
struct ElementRanges {
    Range altitude{400.0, 600.0};
    Range e{0.01, 0.11};
    Range i{75.0, 90.0};
    Range raan{45.0, 90.0};
    Range argp{30.0, 60.0};
    Range mean_anomaly{0.0, 360.0};
};

// Per-axis 1-sigma position uncertainty prior at TCA, in the object's RTN frame (m).
// Each axis is drawn from N(mean, spread) and redrawn while non-positive.
struct SigmaPrior {
    Vec3 mean = Vec3::Zero();
    Vec3 spread = Vec3::Zero();
};

struct GeneratorConfig {
    ElementRanges elements;
    // Defaults are calibrated for class balance and the late-crossing rate; see README.
    SigmaPrior sigma_c_prior{Vec3(2.5, 10.0, 2.5), Vec3(0.5, 2.0, 0.5)};
    SigmaPrior sigma_d_prior{Vec3(5.0, 50.0, 5.0), Vec3(1.0, 10.0, 1.0)};
    Range hardbody{5.0, 10.0};         // m
    double deputy_offset_sigma = 0.07; // km, per ECI axis
    // Backward covariance growth per epoch.
    double p_obs = 0.5;
    double k_c = 0.02;
    double k_d_lower = 0.05;
    double k_d_upper = 0.3;
    int epoch_step = kEpochStepHours;
    int horizon = kHorizonHours;
    // When false the t = 0 epoch carries the ground-truth states instead of a sampled
    // measurement.
    bool measured_tca = true;

    void validate() const;
};

enum class EncounterClass { Safe, Unsafe, Trivial };

std::string_view to_string(EncounterClass c);
EncounterClass encounter_class_from_string(std::string_view s);

struct Encounter {
    std::uint64_t seed = 0;
    EciState truth_chief;
    EciState truth_deputy;
    std::vector<MdpState> epochs; // t = horizon, horizon - step, ..., 0
    EncounterClass classification = EncounterClass::Trivial;
    std::vector<double> pc; // per epoch, aligned with epochs

    const MdpState& at(int t) const;
    double pc_at(int t) const;
};

EciState sample_chief(const GeneratorConfig& cfg, Rng& rng, const GravityModel& g = {});

EciState generate_deputy(const EciState& chief, const GeneratorConfig& cfg, Rng& rng);

// Builds the epoch sequence without classifying it.
Encounter generate_encounter(const EciState& chief, const EciState& deputy,
                             const GeneratorConfig& cfg, Rng& rng);

// Fills e.pc and returns the class: Trivial when no epoch t > 0 exceeds the threshold,
// otherwise Unsafe iff Pc at t = 0 is at or above it.
EncounterClass classify(Encounter& e, double pc_threshold);
EncounterClass classify_pcs(const std::vector<MdpState>& epochs, const std::vector<double>& pc,
                            double pc_threshold);

// Full pipeline for one encounter seed: chief, deputy, epochs, classification.
Encounter generate_from_seed(std::uint64_t seed, const GeneratorConfig& cfg, double pc_threshold,
                             const GravityModel& g = {});

// Encounter index i uses derive_seed(master_seed, Stream::Encounter, i).
std::vector<Encounter> generate_encounters(std::uint64_t master_seed, std::size_t count,
                                           const GeneratorConfig& cfg, double pc_threshold,
                                           unsigned jobs = 1, const GravityModel& g = {});

} // namespace colavoid
