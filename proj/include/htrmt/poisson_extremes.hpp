// SPDX-License-Identifier: Apache-2.0
//! \file htrmt/poisson_extremes.hpp
//! The Poisson point process on (0, inf) with intensity 1 / (pi x^{3/2}),
//! its Laplace-type functionals, and the extreme-value reference laws.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "htrmt/complex_branch.hpp"
#include "htrmt/rng.hpp"

namespace htrmt {

struct PoissonSample {
    double cutoff{1.0};
    //! Points above the cutoff, descending.
    std::vector<double> points;
};

//! rho(x) = 1 / (pi x^{3/2}).
double poisson_intensity(double x);

//! Expected number of points above eps: 2 / (pi sqrt(eps)).
double poisson_tail_mass(double eps);

//! Inverse transform of the normalized tail law: eps / (1 - u)^2.
double poisson_point_from_uniform(double eps, double u);

//! Poisson(mean) variate. Multiplication method below mean 10, PTRS above.
std::uint64_t sample_poisson_count(double mean, RngStream& stream);

PoissonSample sample_process(double cutoff, RngStream& stream);

//! Same draw as sample_process with the points left in generation order.
std::vector<double> sample_process_unsorted(double cutoff, RngStream& stream);

//! exp(-(2/pi) sqrt z), principal branch. Throws DomainError when Re z <= 0.
Complex poisson_det_expectation(Complex z);

//! int_a^b ((1 + z x)^{-1/2} - 1) rho(x) dx for 0 <= a < b <= inf, Re z >= 0.
Complex poisson_log_functional(Complex z, double a, double b);

//! exp(int_0^eps ((1 + z x)^{-1/2} - 1) rho(x) dx): multiplies the product
//! over simulated points to account for the points below the cutoff.
Complex truncation_correction(Complex z, double eps);

//! prod_i (1 + z x_i)^{-1/2} over the given points.
Complex truncated_product(std::vector<double> const& points, Complex z);

//! Frechet law of the rightmost point, exp(-2 / (pi sqrt x)).
double frechet_rightmost_cdf(double x);

//! Limit law of max |a_jk| / (n m) for Cauchy entries, exp(-2 / (pi x)).
double max_entry_cdf(double x);

//! CSV with header replica_id,point; one row per point.
void write_poisson_csv(std::ostream& os, std::vector<PoissonSample> const& samples);

}  // namespace htrmt
