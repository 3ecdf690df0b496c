#pragma once

#include <array>
#include <cmath>

namespace colavoid::detail {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

// 7-point Gauss / 15-point Kronrod pair on [a, b].
template <class F>
QuadratureResult gauss_kronrod15(F&& f, double a, double b) {
    static constexpr std::array<double, 8> xk = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr std::array<double, 8> wk = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr std::array<double, 4> wg = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = fc * wk[7];
    double gauss = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xk[j];
        const double fsum = f(centre - dx) + f(centre + dx);
        kronrod += wk[j] * fsum;
        if (j % 2 == 1) gauss += wg[j / 2] * fsum;
    }
    return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

// Recursive bisection until the Kronrod error estimate meets the absolute tolerance.
template <class F>
double adaptive_integrate(F&& f, double a, double b, double abs_tol, int max_depth = 40) {
    const QuadratureResult r = gauss_kronrod15(f, a, b);
    if (r.error <= abs_tol || max_depth == 0) return r.value;
    const double mid = 0.5 * (a + b);
    return adaptive_integrate(f, a, mid, 0.5 * abs_tol, max_depth - 1) +
           adaptive_integrate(f, mid, b, 0.5 * abs_tol, max_depth - 1);
}

} // namespace colavoid::detail
