#include "colavoid/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "colavoid/conjunction.hpp"
#include "colavoid/parallel.hpp"

namespace colavoid {

namespace {

void check_range(const Range& r, const char* name) {
    if (!(r.min <= r.max) || !std::isfinite(r.min) || !std::isfinite(r.max)) {
        throw std::invalid_argument(std::string("empty or invalid range for ") + name);
    }
}

double draw_positive(double mean, double spread, Rng& rng) {
    if (spread == 0.0) return mean;
    for (;;) {
        const double v = mean + spread * standard_normal(rng);
        if (v > 0.0) return v;
    }
}

// Diagonal RTN covariance (sigmas in m) rotated into ECI; velocity block zero.
CovarianceMatrix sample_tca_covariance(const SigmaPrior& prior, const EciState& x, Rng& rng) {
    Vec3 sigma_km;
    for (int k = 0; k < 3; ++k) sigma_km[k] = draw_positive(prior.mean[k], prior.spread[k], rng) * 1e-3;
    const Eigen::Matrix3d rot = rtn_frame(x).to_eci();
    CovarianceMatrix cov = CovarianceMatrix::Zero();
    Eigen::Matrix3d pos = rot * sigma_km.cwiseProduct(sigma_km).asDiagonal() * rot.transpose();
    cov.topLeftCorner<3, 3>() = 0.5 * (pos + pos.transpose());
    return cov;
}

EciState measure(const EciState& truth, const CovarianceMatrix& cov, Rng& rng) {
    const Eigen::Matrix3d factor = covariance_factor<3>(cov.topLeftCorner<3, 3>());
    return {sample_gaussian<3>(truth.position, factor, rng), truth.velocity};
}

} // namespace

std::string_view to_string(EncounterClass c) {
    switch (c) {
    case EncounterClass::Safe: return "safe";
    case EncounterClass::Unsafe: return "unsafe";
    case EncounterClass::Trivial: return "trivial";
    }
    return "trivial";
}

EncounterClass encounter_class_from_string(std::string_view s) {
    if (s == "safe") return EncounterClass::Safe;
    if (s == "unsafe") return EncounterClass::Unsafe;
    if (s == "trivial") return EncounterClass::Trivial;
    throw std::invalid_argument("unknown encounter class '" + std::string(s) + "'");
}

void GeneratorConfig::validate() const {
    check_range(elements.altitude, "altitude");
    check_range(elements.e, "e");
    check_range(elements.i, "i");
    check_range(elements.raan, "raan");
    check_range(elements.argp, "argp");
    check_range(elements.mean_anomaly, "mean_anomaly");
    check_range(hardbody, "hardbody");
    if (!(elements.e.min >= 0.0 && elements.e.max < 1.0)) {
        throw std::invalid_argument("eccentricity range must lie in [0,1)");
    }
    if (!(hardbody.min > 0.0)) throw std::invalid_argument("hardbody radii must be positive");
    if (!(sigma_c_prior.mean.minCoeff() > 0.0 && sigma_d_prior.mean.minCoeff() > 0.0)) {
        throw std::invalid_argument("covariance prior means must be positive");
    }
    if (sigma_c_prior.spread.minCoeff() < 0.0 || sigma_d_prior.spread.minCoeff() < 0.0) {
        throw std::invalid_argument("covariance prior spreads must be non-negative");
    }
    if (!(deputy_offset_sigma >= 0.0)) throw std::invalid_argument("deputy offset sigma must be >= 0");
    if (!(p_obs >= 0.0 && p_obs <= 1.0)) throw std::invalid_argument("p_obs must lie in [0,1]");
    if (!(k_c >= 0.0 && k_d_lower >= 0.0 && k_d_lower <= k_d_upper)) {
        throw std::invalid_argument("backward growth factors must satisfy 0 <= k_c and 0 <= k_d_lower <= k_d_upper");
    }
    if (epoch_step <= 0 || horizon <= 0 || horizon % epoch_step != 0) {
        throw std::invalid_argument("horizon must be a positive multiple of epoch_step");
    }
}

const MdpState& Encounter::at(int t) const {
    for (const auto& s : epochs) {
        if (s.t == t) return s;
    }
    throw std::out_of_range("encounter has no epoch at t = " + std::to_string(t));
}

double Encounter::pc_at(int t) const {
    for (std::size_t k = 0; k < epochs.size(); ++k) {
        if (epochs[k].t == t) return pc.at(k);
    }
    throw std::out_of_range("encounter has no epoch at t = " + std::to_string(t));
}

EciState sample_chief(const GeneratorConfig& cfg, Rng& rng, const GravityModel& g) {
    const ElementRanges& r = cfg.elements;
    OrbitalElements el;
    el.a = g.r_earth + uniform(rng, r.altitude.min, r.altitude.max);
    el.e = uniform(rng, r.e.min, r.e.max);
    el.i = uniform(rng, r.i.min, r.i.max);
    el.raan = uniform(rng, r.raan.min, r.raan.max);
    el.argp = uniform(rng, r.argp.min, r.argp.max);
    el.mean_anomaly = uniform(rng, r.mean_anomaly.min, r.mean_anomaly.max);
    return elements_to_eci(el, g);
}

EciState generate_deputy(const EciState& chief, const GeneratorConfig& cfg, Rng& rng) {
    validate(chief);
    const double speed = chief.velocity.norm();
    const Eigen::Matrix3d offset_factor =
        Eigen::Matrix3d::Identity() * cfg.deputy_offset_sigma;
    for (;;) {
        const Vec3 u_d = sample_gaussian<3>(chief.position, offset_factor, rng);
        const Vec3 r_cd = u_d - chief.position;
        Eigen::Matrix3d a;
        a.row(0) = u_d.transpose();
        a.row(1) = r_cd.transpose();
        a.row(2) = Vec3::UnitZ().transpose();
        const double z = uniform(rng, -1.0, 1.0);
        const double scale = u_d.norm() * std::max(r_cd.norm(), 1e-300);
        if (r_cd.norm() == 0.0 || std::abs(a.determinant()) < 1e-10 * scale || z == 0.0) continue;
        const Vec3 d = a.partialPivLu().solve(Vec3(0.0, 0.0, z));
        const double norm = d.norm();
        if (!(norm > 0.0) || !d.allFinite()) continue;
        return {u_d, d / norm * speed};
    }
}

Encounter generate_encounter(const EciState& chief, const EciState& deputy,
                             const GeneratorConfig& cfg, Rng& rng) {
    cfg.validate();
    Encounter e;
    e.truth_chief = chief;
    e.truth_deputy = deputy;

    const double r_c = uniform(rng, cfg.hardbody.min, cfg.hardbody.max);
    const double r_d = uniform(rng, cfg.hardbody.min, cfg.hardbody.max);
    CovarianceMatrix sigma_c = sample_tca_covariance(cfg.sigma_c_prior, chief, rng);
    CovarianceMatrix sigma_d = sample_tca_covariance(cfg.sigma_d_prior, deputy, rng);

    const int n_epochs = cfg.horizon / cfg.epoch_step + 1;
    e.epochs.resize(static_cast<std::size_t>(n_epochs));
    // Index k holds t = k * step; reversed at the end so epochs run from the horizon down.
    for (int k = 0; k < n_epochs; ++k) {
        if (k > 0) {
            sigma_c *= 1.0 + cfg.k_c;
            const double observed = uniform(rng, 0.0, 1.0);
            double k_d = 0.0;
            if (observed < cfg.p_obs) k_d = uniform(rng, cfg.k_d_lower, cfg.k_d_upper);
            sigma_d *= 1.0 + k_d;
        }
        MdpState& s = e.epochs[static_cast<std::size_t>(k)];
        s.t = k * cfg.epoch_step;
        if (k == 0 && !cfg.measured_tca) {
            s.chief = chief;
            s.deputy = deputy;
        } else {
            s.chief = measure(chief, sigma_c, rng);
            s.deputy = measure(deputy, sigma_d, rng);
        }
        s.sigma_c = sigma_c;
        s.sigma_d = sigma_d;
        s.r_c = r_c;
        s.r_d = r_d;
    }
    std::reverse(e.epochs.begin(), e.epochs.end());
    return e;
}

EncounterClass classify_pcs(const std::vector<MdpState>& epochs, const std::vector<double>& pc,
                            double pc_threshold) {
    bool raised = false;
    double final_pc = 0.0;
    bool has_final = false;
    for (std::size_t k = 0; k < epochs.size(); ++k) {
        if (epochs[k].t > 0) {
            raised = raised || pc[k] > pc_threshold;
        } else {
            final_pc = pc[k];
            has_final = true;
        }
    }
    if (!has_final) throw std::invalid_argument("encounter is missing its t = 0 epoch");
    if (!raised) return EncounterClass::Trivial;
    return final_pc >= pc_threshold ? EncounterClass::Unsafe : EncounterClass::Safe;
}

EncounterClass classify(Encounter& e, double pc_threshold) {
    e.pc.clear();
    e.pc.reserve(e.epochs.size());
    for (const auto& s : e.epochs) e.pc.push_back(collision_probability(s));
    e.classification = classify_pcs(e.epochs, e.pc, pc_threshold);
    return e.classification;
}

Encounter generate_from_seed(std::uint64_t seed, const GeneratorConfig& cfg, double pc_threshold,
                             const GravityModel& g) {
    Rng rng(seed);
    const EciState chief = sample_chief(cfg, rng, g);
    const EciState deputy = generate_deputy(chief, cfg, rng);
    Encounter e = generate_encounter(chief, deputy, cfg, rng);
    e.seed = seed;
    classify(e, pc_threshold);
    return e;
}

std::vector<Encounter> generate_encounters(std::uint64_t master_seed, std::size_t count,
                                           const GeneratorConfig& cfg, double pc_threshold,
                                           unsigned jobs, const GravityModel& g) {
    cfg.validate();
    std::vector<Encounter> out(count);
    parallel_for(count, jobs, [&](std::size_t i) {
        out[i] = generate_from_seed(derive_seed(master_seed, Stream::Encounter, i), cfg,
                                    pc_threshold, g);
    });
    return out;
}

} // namespace colavoid
