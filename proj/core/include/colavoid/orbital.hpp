#pragma once

#include <Eigen/Dense>

namespace colavoid {

using Vec3 = Eigen::Vector3d;

// Two-body constants. Distances in km, time in seconds.
struct GravityModel {
    double mu = 398600.4418;   // km^3/s^2
    double r_earth = 6378.137; // km
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;
inline constexpr double kSecondsPerHour = 3600.0;

// Inertial position (km) and velocity (km/s) of one object.
struct EciState {
    Vec3 position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();

    bool operator==(const EciState&) const = default;
};

// Classical Keplerian elements. Angles in degrees.
struct OrbitalElements {
    double a = 0.0;            // semi-major axis, km
    double e = 0.0;            // eccentricity
    double i = 0.0;            // inclination, [0, 180]
    double raan = 0.0;         // right ascension of ascending node, [0, 360)
    double argp = 0.0;         // argument of perigee, [0, 360)
    double mean_anomaly = 0.0; // [0, 360)
};

// Local orbital frame: radial, transverse (along-track in the circular limit), normal.
struct RtnFrame {
    Vec3 r;
    Vec3 t;
    Vec3 n;

    // Columns are (r, t, n); maps RTN components to ECI.
    Eigen::Matrix3d to_eci() const;
};

// Throws std::invalid_argument if |position| == 0 or a component is not finite.
void validate(const EciState& x);

EciState elements_to_eci(const OrbitalElements& el, const GravityModel& g = {});
OrbitalElements eci_to_elements(const EciState& x, const GravityModel& g = {});

// Solves E - e sin E = M for the eccentric anomaly (radians). Newton from E0 = M,
// bisection fallback after 50 iterations.
double solve_kepler(double mean_anomaly, double e);

// Two-body propagation by dt seconds; dt may be negative.
EciState propagate(const EciState& x, double dt, const GravityModel& g = {});

double specific_energy(const EciState& x, const GravityModel& g = {});
Vec3 angular_momentum(const EciState& x);
double semi_major_axis(const EciState& x, const GravityModel& g = {});
double orbital_period(double a, const GravityModel& g = {});

Vec3 along_track_unit(const EciState& x);
RtnFrame rtn_frame(const EciState& x);

double wrap_degrees(double deg);

} // namespace colavoid
