// SPDX-License-Identifier: Apache-2.0
//! \file htrmt/quadrature.hpp
//! Adaptive Gauss-Kronrod quadrature on finite and semi-infinite intervals.
#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace htrmt {

struct QuadResult {
    double value{0.0};
    //! A-posteriori estimate from Gauss/Kronrod agreement, summed over the
    //! final partition. Not a rigorous bound.
    double err_bound{0.0};
    long evaluations{0};
};

//! Known endpoint behaviour. The integrator applies a change of variables
//! that makes the transformed integrand smooth.
enum class Singularity {
    None,
    //! f(x) ~ (x - a)^{-1/2} near the left endpoint; uses x = a + w^2.
    InverseSqrtLeft,
    //! f(x) ~ sqrt((x - a)(b - x)) or 1/sqrt(...) at both ends of a finite
    //! interval; uses x = a + (b - a)(1 - cos theta) / 2.
    SqrtVanishBoth,
};

struct QuadOptions {
    double abs_tol{1e-13};
    double rel_tol{1e-12};
    Singularity hint{Singularity::None};
    //! Length scale of the v/(1-v) map used for [a, +inf).
    double scale{1.0};
    int max_intervals{4000};
};

class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(std::string const& what, QuadResult best)
        : std::runtime_error(what), best_(best)
    {
    }
    QuadResult const& best_estimate() const { return best_; }

  private:
    QuadResult best_;
};

using ScalarFn = std::function<double(double)>;

//! Integrate f over [a, b]; b may be +infinity.
//! Throws QuadratureError carrying the best estimate if the tolerance is not
//! met within max_intervals subdivisions.
QuadResult integrate(ScalarFn const& f, double a, double b,
                     QuadOptions const& opts = {});

//! Sum of integrate() over consecutive breakpoints.
QuadResult integrate_piecewise(ScalarFn const& f,
                               std::span<double const> breakpoints,
                               QuadOptions const& opts = {});

//! Wynn epsilon extrapolation of a sequence of partial sums; returns the
//! last accelerated estimate.
double wynn_epsilon(std::span<double const> partial_sums);

}  // namespace htrmt
