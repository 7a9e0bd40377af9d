#pragma once

#include <cmath>
#include <stdexcept>

namespace casimir {

// Dilogarithm Li_2(x) for x in [-1, 1], accurate to ~1e-15.
// Series on |x| <= 1/2, reflection / Landen transforms otherwise.
inline double dilog(double x) {
    constexpr double pi2_6 = 1.6449340668482264365;
    if (x > 1.0 || x < -1.0) throw std::domain_error("dilog: argument outside [-1, 1]");
    if (x == 1.0) return pi2_6;
    if (x == 0.0) return 0.0;
    if (x > 0.5) {
        const double y = 1.0 - x;
        return pi2_6 - std::log(x) * std::log(y) - dilog(y);
    }
    if (x < -0.5) {
        const double y = x / (x - 1.0);  // in (1/3, 1/2]
        const double l = std::log1p(-x);
        return -dilog(y) - 0.5 * l * l;
    }
    double term = x, sum = x;
    for (int k = 2; k < 80; ++k) {
        term *= x;
        const double add = term / (static_cast<double>(k) * k);
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

// Ratio I_{nu+1}(x) / I_nu(x) of modified Bessel functions of the first kind,
// by the Gauss continued fraction evaluated with the modified Lentz scheme.
// Backward-stable for all x > 0; a power series is used for tiny x.
inline double bessel_i_ratio(double nu, double x, double tol = 1e-15) {
    if (!(x > 0.0)) throw std::domain_error("bessel_i_ratio: x must be positive");
    if (x < 1e-3) {
        // I_nu(x) = (x/2)^nu/Gamma(nu+1) [1 + t/(nu+1) + t^2/(2(nu+1)(nu+2)) + ...], t = x^2/4
        const double t = 0.25 * x * x;
        const double num = 1.0 + t / (nu + 2.0) + t * t / (2.0 * (nu + 2.0) * (nu + 3.0));
        const double den = 1.0 + t / (nu + 1.0) + t * t / (2.0 * (nu + 1.0) * (nu + 2.0));
        return 0.5 * x / (nu + 1.0) * num / den;
    }
    const double tiny = 1e-300;
    double f = tiny, c = f, d = 0.0;
    for (int k = 1; k < 100000; ++k) {
        const double b = 2.0 * (nu + k) / x;
        d = b + d;
        if (d == 0.0) d = tiny;
        c = b + 1.0 / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < tol) return f;
    }
    throw std::runtime_error("bessel_i_ratio: continued fraction did not converge");
}

}  // namespace casimir
