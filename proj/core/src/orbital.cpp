#include "colavoid/orbital.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace colavoid {

namespace {

constexpr double kKeplerTol = 1e-12;
constexpr int kNewtonIterations = 50;

bool finite(const Vec3& v) { return v.allFinite(); }

double wrap_two_pi(double x) {
    x = std::fmod(x, kTwoPi);
    return x < 0.0 ? x + kTwoPi : x;
}

// Generalised Kepler equation in the eccentric-anomaly difference:
//   F(dE) = dE + s (1 - cos dE) - c sin dE - dM
// with s = r0.v0 / sqrt(mu a), c = 1 - r0/a. F' = r/a > 0.
double solve_delta_e(double dm, double s, double c) {
    auto f = [&](double de) { return de + s * (1.0 - std::cos(de)) - c * std::sin(de) - dm; };
    double de = dm;
    for (int it = 0; it < kNewtonIterations; ++it) {
        const double fp = 1.0 + s * std::sin(de) - c * std::cos(de);
        const double step = f(de) / fp;
        de -= step;
        if (std::abs(step) < kKeplerTol) return de;
    }
    // |s|, |c| <= e < 1, so |F(de) - (de - dm)| < 3.
    double lo = dm - 3.0;
    double hi = dm + 3.0;
    while (hi - lo > kKeplerTol) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

Eigen::Matrix3d RtnFrame::to_eci() const {
    Eigen::Matrix3d m;
    m.col(0) = r;
    m.col(1) = t;
    m.col(2) = n;
    return m;
}

void validate(const EciState& x) {
    if (!finite(x.position) || !finite(x.velocity)) {
        throw std::invalid_argument("EciState has non-finite components");
    }
    if (x.position.norm() == 0.0) {
        throw std::invalid_argument("EciState position is at the origin");
    }
}

double wrap_degrees(double deg) {
    deg = std::fmod(deg, 360.0);
    if (deg < 0.0) deg += 360.0;
    return deg >= 360.0 ? 0.0 : deg;
}

double solve_kepler(double mean_anomaly, double e) {
    if (!(e >= 0.0 && e < 1.0)) {
        throw std::invalid_argument("solve_kepler requires 0 <= e < 1");
    }
    auto f = [&](double ea) { return ea - e * std::sin(ea) - mean_anomaly; };
    double ea = mean_anomaly;
    for (int it = 0; it < kNewtonIterations; ++it) {
        const double step = f(ea) / (1.0 - e * std::cos(ea));
        ea -= step;
        if (std::abs(step) < kKeplerTol) return ea;
    }
    double lo = mean_anomaly - 1.0;
    double hi = mean_anomaly + 1.0;
    while (hi - lo > kKeplerTol) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double specific_energy(const EciState& x, const GravityModel& g) {
    return 0.5 * x.velocity.squaredNorm() - g.mu / x.position.norm();
}

Vec3 angular_momentum(const EciState& x) { return x.position.cross(x.velocity); }

double semi_major_axis(const EciState& x, const GravityModel& g) {
    return -g.mu / (2.0 * specific_energy(x, g));
}

double orbital_period(double a, const GravityModel& g) {
    return kTwoPi * std::sqrt(a * a * a / g.mu);
}

EciState elements_to_eci(const OrbitalElements& el, const GravityModel& g) {
    if (!(el.e >= 0.0 && el.e < 1.0)) {
        throw std::invalid_argument("elements_to_eci requires 0 <= e < 1");
    }
    if (!(el.a > 0.0)) {
        throw std::invalid_argument("elements_to_eci requires a > 0");
    }
    const double ea = solve_kepler(wrap_two_pi(el.mean_anomaly * kDegToRad), el.e);
    const double cos_e = std::cos(ea);
    const double sin_e = std::sin(ea);
    const double root = std::sqrt(1.0 - el.e * el.e);

    // Perifocal coordinates.
    const double p_x = el.a * (cos_e - el.e);
    const double p_y = el.a * root * sin_e;
    const double r = el.a * (1.0 - el.e * cos_e);
    const double vscale = std::sqrt(g.mu * el.a) / r;
    const double v_x = -vscale * sin_e;
    const double v_y = vscale * root * cos_e;

    const double co = std::cos(el.raan * kDegToRad), so = std::sin(el.raan * kDegToRad);
    const double cw = std::cos(el.argp * kDegToRad), sw = std::sin(el.argp * kDegToRad);
    const double ci = std::cos(el.i * kDegToRad), si = std::sin(el.i * kDegToRad);

    const Vec3 p_hat(co * cw - so * sw * ci, so * cw + co * sw * ci, sw * si);
    const Vec3 q_hat(-co * sw - so * cw * ci, -so * sw + co * cw * ci, cw * si);

    return {p_x * p_hat + p_y * q_hat, v_x * p_hat + v_y * q_hat};
}

OrbitalElements eci_to_elements(const EciState& x, const GravityModel& g) {
    validate(x);
    const Vec3& r = x.position;
    const Vec3& v = x.velocity;
    const Vec3 h = r.cross(v);
    const double h_norm = h.norm();
    if (h_norm <= 1e-12 * r.norm() * std::max(v.norm(), 1e-300)) {
        throw std::invalid_argument("rectilinear state has no orbital plane");
    }
    const double r_norm = r.norm();
    const double energy = specific_energy(x, g);
    if (energy >= 0.0) {
        throw std::invalid_argument("eci_to_elements supports bound orbits only");
    }

    OrbitalElements el;
    el.a = -g.mu / (2.0 * energy);
    const Vec3 e_vec = v.cross(h) / g.mu - r / r_norm;
    el.e = e_vec.norm();
    el.i = std::acos(std::clamp(h.z() / h_norm, -1.0, 1.0)) * kRadToDeg;

    const Vec3 node(-h.y(), h.x(), 0.0);
    const double node_norm = node.norm();
    const bool equatorial = node_norm < 1e-12 * h_norm;
    const bool circular = el.e < 1e-11;

    double raan = 0.0;
    if (!equatorial) {
        raan = std::atan2(node.y(), node.x());
    }
    const Vec3 node_hat = equatorial ? Vec3(1.0, 0.0, 0.0) : Vec3(node / node_norm);
    const Vec3 h_hat = h / h_norm;
    // Angle measured from node_hat inside the orbital plane, in the direction of motion.
    auto in_plane_angle = [&](const Vec3& w) {
        return std::atan2(h_hat.dot(node_hat.cross(w)), node_hat.dot(w));
    };

    double argp = 0.0;
    double true_anomaly = 0.0;
    if (circular) {
        true_anomaly = in_plane_angle(r);
    } else {
        argp = in_plane_angle(e_vec);
        true_anomaly = std::atan2(h_hat.dot(e_vec.cross(r)), e_vec.dot(r));
    }
    el.e = circular ? 0.0 : el.e;

    const double ea = 2.0 * std::atan2(std::sqrt(1.0 - el.e) * std::sin(0.5 * true_anomaly),
                                       std::sqrt(1.0 + el.e) * std::cos(0.5 * true_anomaly));
    const double m = ea - el.e * std::sin(ea);

    el.raan = wrap_degrees(raan * kRadToDeg);
    el.argp = wrap_degrees(argp * kRadToDeg);
    el.mean_anomaly = wrap_degrees(m * kRadToDeg);
    return el;
}

EciState propagate(const EciState& x, double dt, const GravityModel& g) {
    validate(x);
    if (dt == 0.0) return x;
    const Vec3& r0 = x.position;
    const Vec3& v0 = x.velocity;
    const Vec3 h = r0.cross(v0);
    const double r0_norm = r0.norm();
    if (h.norm() <= 1e-12 * r0_norm * std::max(v0.norm(), 1e-300)) {
        throw std::invalid_argument("cannot propagate a rectilinear state");
    }
    const double energy = specific_energy(x, g);
    if (energy >= 0.0) {
        throw std::invalid_argument("propagate supports bound orbits only");
    }
    const double a = -g.mu / (2.0 * energy);
    const double sqrt_a = std::sqrt(a);
    const double n = std::sqrt(g.mu / (a * a * a));
    const double s = r0.dot(v0) / (std::sqrt(g.mu) * sqrt_a);
    const double c = 1.0 - r0_norm / a;

    // Strip whole revolutions so the Newton solve works on a reduced angle.
    const double dm_full = n * dt;
    const double revs = std::floor(dm_full / kTwoPi);
    const double dm = dm_full - revs * kTwoPi;
    const double dt_reduced = dt - revs * kTwoPi / n;

    const double de = solve_delta_e(dm, s, c);
    const double cos_de = std::cos(de);
    const double sin_de = std::sin(de);

    const double f = 1.0 - a / r0_norm * (1.0 - cos_de);
    const double gg = dt_reduced + (sin_de - de) / n;
    const Vec3 r1 = f * r0 + gg * v0;
    const double r1_norm = a + (r0_norm - a) * cos_de + s * a * sin_de;
    const double fdot = -std::sqrt(g.mu * a) / (r1_norm * r0_norm) * sin_de;
    const double gdot = 1.0 - a / r1_norm * (1.0 - cos_de);
    return {r1, fdot * r0 + gdot * v0};
}

Vec3 along_track_unit(const EciState& x) {
    const double speed = x.velocity.norm();
    if (!(speed > 0.0)) {
        throw std::invalid_argument("along-track direction undefined for zero velocity");
    }
    return x.velocity / speed;
}

RtnFrame rtn_frame(const EciState& x) {
    const Vec3 h = angular_momentum(x);
    if (h.norm() == 0.0) {
        throw std::invalid_argument("RTN frame undefined for a rectilinear state");
    }
    RtnFrame f;
    f.r = x.position.normalized();
    f.n = h.normalized();
    f.t = f.n.cross(f.r);
    return f;
}

} // namespace colavoid
