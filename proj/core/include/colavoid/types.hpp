#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "colavoid/orbital.hpp"

namespace colavoid {

// 6x6 state covariance. Position block in km^2, velocity block in km^2/s^2.
using CovarianceMatrix = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

inline Vec6 to_vec6(const EciState& x) {
    Vec6 v;
    v << x.position, x.velocity;
    return v;
}

inline EciState from_vec6(const Vec6& v) { return {v.head<3>(), v.tail<3>()}; }

// Radii are in meters; conversion to km happens where Pc is integrated.
struct HardbodyRadii {
    double r_c = 0.0;
    double r_d = 0.0;

    double combined_km() const { return (r_c + r_d) * 1e-3; }
};

enum class Action { Wait = 0, Maneuver = 1 };

inline constexpr Action kActions[] = {Action::Wait, Action::Maneuver};

std::string_view to_string(Action a);

// The decision state: what an operator sees in one conjunction data message.
// Both object states are expressed at the time of closest approach.
struct MdpState {
    int t = 0; // hours to closest approach, multiple of 8
    EciState chief;
    EciState deputy;
    CovarianceMatrix sigma_c = CovarianceMatrix::Zero();
    CovarianceMatrix sigma_d = CovarianceMatrix::Zero();
    double r_c = 0.0; // m
    double r_d = 0.0; // m

    HardbodyRadii radii() const { return {r_c, r_d}; }
};

} // namespace colavoid
