// SPDX-License-Identifier: Apache-2.0
#include "htrmt/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <math.h>

namespace htrmt {

double log_gamma(double x)
{
    if (!(x > 0.0)) {
        throw std::domain_error("log_gamma: argument must be positive");
    }
    // lgamma_r: the reentrant form does not write the global signgam.
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

double erfcx(double x)
{
    if (x < 5.0) {
        if (x < -26.0) {
            return std::numeric_limits<double>::infinity();
        }
        // exp(x^2) with x^2 split exactly into hi + lo.
        double const hi = x * x;
        double const lo = std::fma(x, x, -hi);
        return std::exp(hi) * (1.0 + lo) * std::erfc(x);
    }
    // erfcx(x) = (1/sqrt(pi)) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    // Modified Lentz evaluation of the continued fraction.
    constexpr double tiny = 1e-300;
    double f = x;
    double C = x;
    double D = 0.0;
    for (int k = 1; k < 500; ++k) {
        double const a = 0.5 * k;
        D = x + a * D;
        if (D == 0.0) D = tiny;
        C = x + a / C;
        if (C == 0.0) C = tiny;
        D = 1.0 / D;
        double const delta = C * D;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) {
            break;
        }
    }
    return std::numbers::inv_sqrtpi / f;
}

double j0_of_2sqrt_series(double x)
{
    if (x < 0.0) {
        throw std::domain_error("j0_of_2sqrt: argument must be non-negative");
    }
    double term = 1.0;
    double sum = 1.0;
    for (int l = 1; l < 400; ++l) {
        term *= -x / (static_cast<double>(l) * l);
        sum += term;
        if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum)) && l > x) {
            break;
        }
    }
    return sum;
}

double j0_of_2sqrt(double x)
{
    if (x < 0.0) {
        throw std::domain_error("j0_of_2sqrt: argument must be non-negative");
    }
    if (x < 25.0) {
        return j0_of_2sqrt_series(x);
    }
    return std::cyl_bessel_j(0.0, 2.0 * std::sqrt(x));
}

double bessel_j(double nu, double x)
{
    return std::cyl_bessel_j(nu, x);
}

double bessel_j_prime(double nu, double x)
{
    if (nu == 0.0) {
        return -std::cyl_bessel_j(1.0, x);
    }
    if (x == 0.0) {
        // J_nu'(0) is 1/2 for nu = 1, 0 for nu > 1, unbounded for 0 < nu < 1.
        if (nu == 1.0) return 0.5;
        if (nu > 1.0) return 0.0;
        return std::numeric_limits<double>::infinity();
    }
    return nu / x * std::cyl_bessel_j(nu, x) - std::cyl_bessel_j(nu + 1.0, x);
}

}  // namespace htrmt
