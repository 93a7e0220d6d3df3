// SPDX-License-Identifier: Apache-2.0
//! \file htrmt/spectra.hpp
//! Rescaled singular spectra and determinant functionals.
#pragma once

#include <iosfwd>
#include <vector>

#include "htrmt/complex_branch.hpp"
#include "htrmt/ensembles.hpp"

namespace htrmt {

//! Eigenvalue scale applied to A^t A.
enum class Regime {
    //! (m n)^2 for dense kinds, (m b)^2 for the sparse kind.
    Extreme,
    //! n: the bulk (Marchenko-Pastur) scale of Gaussian ensembles.
    WishartGlobal,
    //! 1: raw eigenvalues, for finite-size identities in t.
    Unscaled,
};

std::string to_string(Regime regime);
Regime regime_from_string(std::string const& s);

double regime_scale(EnsembleSpec const& spec, Regime regime);

struct SpectrumSample {
    //! Rescaled eigenvalues, sorted descending, all >= 0.
    std::vector<double> lambdas;
    double scale{1.0};
    EnsembleSpec spec;
    Regime regime{Regime::Extreme};
};

//! z with Re z > 0. Built from a complex value or from real t with z = t^2.
class ShiftParam {
  public:
    static ShiftParam from_complex(Complex z);
    static ShiftParam from_t(double t);

    Complex z() const { return z_; }
    bool is_real() const { return z_.imag() == 0.0; }

  private:
    explicit ShiftParam(Complex z) : z_(z) {}
    Complex z_;
};

enum class Power { Half, One };

double power_value(Power p);

class SpectrumError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

//! lambda_i = sigma_i^2 / scale with sigma_i the singular values of the
//! matrix itself; A^t A is never formed.
SpectrumSample rescaled_spectrum(MatrixSample const& matrix, Regime regime);

//! Squared singular values of a real matrix, descending, unscaled.
std::vector<double> squared_singular_values(Eigen::MatrixXd const& a);
std::vector<double> squared_singular_values(Eigen::MatrixXcd const& a);

//! prod_i (1 + z lambda_i)^{-power} evaluated as exp(-power sum Log(...)).
Complex det_functional(std::vector<double> const& lambdas, ShiftParam z,
                       Power power);

inline Complex det_functional(SpectrumSample const& s, ShiftParam z, Power power)
{
    return det_functional(s.lambdas, z, power);
}

struct ResolventSums {
    //! sum lambda / (1 + z lambda)
    Complex s1;
    //! sum lambda^2 / (1 + z lambda)^2
    Complex s2;
};

ResolventSums weighted_resolvent_sums(std::vector<double> const& lambdas,
                                      ShiftParam z);

inline ResolventSums weighted_resolvent_sums(SpectrumSample const& s, ShiftParam z)
{
    return weighted_resolvent_sums(s.lambdas, z);
}

//! CSV: '#'-prefixed header with m, n, scale, seed; then rank,lambda_rescaled.
void write_spectrum_csv(std::ostream& os, SpectrumSample const& s);

}  // namespace htrmt
