// SPDX-License-Identifier: Apache-2.0
//! \file htrmt/special_functions.hpp
#pragma once

namespace htrmt {

//! ln Gamma(x) for x > 0 via upward recurrence to x >= 15 and the Stirling
//! series. Reentrant (unlike lgamma, which writes signgam).
double log_gamma(double x);

//! Scaled complementary error function exp(x^2) erfc(x).
//! Never forms exp(x^2) for large x; continued fraction beyond x = 5.
double erfcx(double x);

//! phi(x) = sum_l (-x)^l / (l!)^2 = J0(2 sqrt(x)), x >= 0.
//! Power series below x = 25, libstdc++ cylindrical Bessel above.
double j0_of_2sqrt(double x);

//! Same function evaluated only by its power series (exposed so the
//! crossover can be checked against the Bessel route).
double j0_of_2sqrt_series(double x);

//! J_nu(x) and its x-derivative for nu >= 0, x >= 0.
double bessel_j(double nu, double x);
double bessel_j_prime(double nu, double x);

}  // namespace htrmt
