// SPDX-License-Identifier: Apache-2.0
//! \file htrmt/dual_estimators.hpp
//! Unbiased Monte Carlo estimators built from the exact Gaussian-integral
//! (dual) representations of determinant expectations.
//!
//! Each estimator returns one replica value; the mean over replicas estimates
//! the same expectation as the direct spectral route:
//!
//! - cauchy_dual_single:  E det(1 + t^2/(mn)^2 A^t A)^{-1/2}, Cauchy A
//! - cauchy_dual_sparse:  E det(1 + t^2/(mb)^2 G^t G)^{-1/2}, G = Q o A
//! - general_r_dual:      E prod_i det(1 + t_i^2 A^t A)^{-1/2}
//! - complex_dual_single: E det(1 + t^2 A^* A)^{-1}, radial complex entries
//! - rademacher_dual:     E det(1 + t^2 R^t R)^{-1/2}, +-1 entries
//!
//! The general-r route costs O(r m n) per replica and its variance grows with
//! m n; it is meant for identity checks at small sizes.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "htrmt/ensembles.hpp"
#include "htrmt/quadrature.hpp"
#include "htrmt/rng.hpp"

namespace htrmt {

enum class DualRoute {
    CauchySingle,
    CauchySparse,
    GeneralR,
    ComplexSingle,
    Rademacher,
};

struct DualSampleValue {
    double value;
    DualRoute route;
};

//! Psi(y) = 2 e^{y^2/2} int_y^inf (2 pi)^{-1/2} e^{-s^2/2} ds = erfcx(y/sqrt 2).
double psi(double y);
double log_psi(double y);

DualSampleValue cauchy_dual_single(int m, int n, double t, RngStream& stream);

//! Row-wise column indices of a mask's true cells.
class RowPattern {
  public:
    explicit RowPattern(Mask const& mask);

    int rows() const { return static_cast<int>(rows_.size()); }
    int cols() const { return cols_; }
    std::vector<int> const& row(int j) const { return rows_[j]; }

  private:
    std::vector<std::vector<int>> rows_;
    int cols_;
};

//! b is the nominal nonzeros-per-column used for the t / (m b) rescaling.
DualSampleValue cauchy_dual_sparse(RowPattern const& pattern, int b, double t,
                                   RngStream& stream);
DualSampleValue cauchy_dual_sparse(Mask const& mask, int b, double t,
                                   RngStream& stream);

//! Characteristic function g(x) = E exp(i x a) of the entry law.
enum class CharFn {
    Cauchy,    //!< exp(-|x|)
    Gaussian,  //!< exp(-x^2 / 2)
};

CharFn char_fn_from_string(std::string const& id);
std::string to_string(CharFn g);
double log_char_fn(CharFn g, double x);

DualSampleValue general_r_dual(int m, int n, std::vector<double> const& ts,
                               CharFn g, RngStream& stream);

//! Density f of |a|^2 for the radial complex ensemble.
struct RadialDensity {
    std::string id;
    std::function<double(double)> density;
    //! Right end of the support (infinity when unbounded).
    double support_end{std::numeric_limits<double>::infinity()};
    //! Moments alpha_l = int x^l f(x) dx when known in closed form.
    std::function<double(int)> moment;
};

//! Built-ins: "wishart_radial" (f = e^{-x}) and "uniform_radial"
//! (|a|^2 uniform on [0, 2]).
RadialDensity radial_density_from_string(std::string const& id);

//! G(y) = int_0^inf f(x) J0(2 sqrt(x y)) dx.
QuadResult radial_G(RadialDensity const& f, double y);

//! G as used by the complex dual route: either the Wishart closed form
//! G(y) = e^{-y} or quadrature of a radial density.
class RadialKernel {
  public:
    static RadialKernel wishart();
    static RadialKernel from_density(RadialDensity f);
    static RadialKernel from_string(std::string const& id);

    bool is_exponential() const { return !density_; }
    double operator()(double y) const;

  private:
    std::optional<RadialDensity> density_;
};

DualSampleValue complex_dual_single(int m, int n, double t,
                                    RadialKernel const& g, RngStream& stream);

//! Signed estimator; no clamping.
DualSampleValue rademacher_dual(int n, double t, RngStream& stream);

//! Exact average of det(1 + t^2 R^t R)^{-1/2} over all 2^{n^2} sign matrices.
double rademacher_bruteforce(int n, double t);

}  // namespace htrmt
