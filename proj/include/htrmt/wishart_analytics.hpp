// SPDX-License-Identifier: Apache-2.0
//! \file htrmt/wishart_analytics.hpp
//! Quadrature-backed closed forms for the Gaussian ensembles.
#pragma once

#include "htrmt/quadrature.hpp"

namespace htrmt {

//! E det(1 + t^2 A^t A)^{-1/2} for an m x n standard real Gaussian A, as the
//! one-dimensional radial integral
//!   2^{1-n/2} / Gamma(n/2) int_0^inf rho^{n-1} e^{-rho^2/2}
//!       (1 + t^2 rho^2)^{-m/2} d rho.
//! `scaled` substitutes t^2 -> t^2 / n.
QuadResult wishart_real_det_integral(int n, int m, double t, bool scaled);

//! E det(1 + t^2 A^* A)^{-1} for standard complex Gaussian A:
//!   Gamma(n)^{-1} int_0^inf u^{n-1} e^{-u} (1 + t^2 u)^{-m} du.
QuadResult wishart_complex_det_integral(int n, int m, double t, bool scaled);

//! Natural logarithms of the same quantities; err_bound is absolute in the
//! logarithm. Usable where the values themselves underflow.
QuadResult wishart_real_log_det_integral(int n, int m, double t, bool scaled);
QuadResult wishart_complex_log_det_integral(int n, int m, double t, bool scaled);

//! |real(2n, 2m, sqrt(z/2)) - complex(n, m, sqrt z)|.
double lemma1_residual(int m, int n, double z);

struct SaddleData {
    double t{0.0};
    //! Positive root of t^2 z^2 + z - 1 = 0.
    double z_star{1.0};
    //! L''(z_star) for L(z) = z + ln(1 + t^2 z) - ln z.
    double second_deriv{1.0};
};

//! t = 0 gives the limit z_star = 1. Throws for t < 0.
SaddleData saddle(double t);

//! Laplace approximation of wishart_real_det_integral(n, n, t, scaled).
double steepest_descent_value(int n, double t);
double steepest_descent_log_value(int n, double t);

struct MPParams {
    double gamma{1.0};
    double sigma2{1.0};
    double a{0.0};
    double b{4.0};

    //! gamma >= 1, sigma2 > 0; a, b = sigma2 (1 -+ gamma^{-1/2})^2.
    static MPParams make(double gamma, double sigma2);
};

//! Marchenko-Pastur density on [a, b], normalized to unit mass.
double mp_density(MPParams const& p, double x);
QuadResult mp_normalization(MPParams const& p);

//! -1/2 int_a^b ln(1 + t^2 x) p(x) dx.
QuadResult mp_log_integral(double t, MPParams const& p);

//! Hard-edge Bessel kernel
//!   K(x, y) = (J(u) sqrt(y) J'(v) - J(v) sqrt(x) J'(u)) / (x - y),
//! u = 2 sqrt(x), v = 2 sqrt(y), J = J_alpha. Near the diagonal the
//! confluent limit J'(u)^2 + (1 - alpha^2 / u^2) J(u)^2 is used.
double bessel_kernel(double x, double y, double alpha);

}  // namespace htrmt
