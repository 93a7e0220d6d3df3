// SPDX-License-Identifier: Apache-2.0
#include "htrmt/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include <Eigen/SVD>

#include "htrmt/compensated_sum.hpp"

namespace htrmt {
namespace {

template<class Matrix>
std::vector<double> squared_sv_impl(Matrix const& a)
{
    if (!a.allFinite()) {
        throw SpectrumError("singular values: matrix has non-finite entries");
    }
    Eigen::BDCSVD<Matrix> svd(a);
    if (svd.info() != Eigen::Success) {
        throw SpectrumError("singular value decomposition failed");
    }
    auto const& sv = svd.singularValues();
    std::vector<double> out(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        out[i] = sv[i] * sv[i];
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

}  // namespace

std::string to_string(Regime regime)
{
    switch (regime) {
    case Regime::Extreme: return "extreme";
    case Regime::WishartGlobal: return "wishart_global";
    case Regime::Unscaled: return "unscaled";
    }
    return "?";
}

Regime regime_from_string(std::string const& s)
{
    if (s == "extreme") return Regime::Extreme;
    if (s == "wishart_global") return Regime::WishartGlobal;
    if (s == "unscaled") return Regime::Unscaled;
    throw std::invalid_argument("unknown regime '" + s + "'");
}

double regime_scale(EnsembleSpec const& spec, Regime regime)
{
    switch (regime) {
    case Regime::Extreme: {
        double const cols = spec.kind == EnsembleKind::CauchySparse
                                ? static_cast<double>(spec.b.value_or(spec.n))
                                : static_cast<double>(spec.n);
        double const mc = static_cast<double>(spec.m) * cols;
        return mc * mc;
    }
    case Regime::WishartGlobal:
        return static_cast<double>(spec.n);
    case Regime::Unscaled:
        return 1.0;
    }
    return 1.0;
}

ShiftParam ShiftParam::from_complex(Complex z)
{
    if (!(z.real() > 0.0) || !std::isfinite(z.imag())) {
        throw DomainError("shift parameter requires Re z > 0");
    }
    return ShiftParam(z);
}

ShiftParam ShiftParam::from_t(double t)
{
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError("shift parameter requires t > 0");
    }
    return ShiftParam(Complex(t * t, 0.0));
}

double power_value(Power p)
{
    return p == Power::Half ? 0.5 : 1.0;
}

std::vector<double> squared_singular_values(Eigen::MatrixXd const& a)
{
    return squared_sv_impl(a);
}

std::vector<double> squared_singular_values(Eigen::MatrixXcd const& a)
{
    return squared_sv_impl(a);
}

SpectrumSample rescaled_spectrum(MatrixSample const& matrix, Regime regime)
{
    SpectrumSample out;
    out.spec = matrix.spec;
    out.regime = regime;
    out.scale = regime_scale(matrix.spec, regime);
    out.lambdas = matrix.is_complex() ? squared_singular_values(matrix.complex())
                                      : squared_singular_values(matrix.real());
    for (double& l : out.lambdas) {
        l /= out.scale;
    }
    return out;
}

Complex det_functional(std::vector<double> const& lambdas, ShiftParam z,
                       Power power)
{
    double const p = power_value(power);
    Complex const zz = z.z();
    if (z.is_real()) {
        CompensatedSum acc;
        for (double l : lambdas) {
            acc.add(std::log1p(zz.real() * l));
        }
        return {std::exp(-p * acc.value()), 0.0};
    }
    CompensatedSum re, im;
    for (double l : lambdas) {
        Complex const lg = principal_log1p(zz * l);
        re.add(lg.real());
        im.add(lg.imag());
    }
    return std::exp(-p * Complex(re.value(), im.value()));
}

ResolventSums weighted_resolvent_sums(std::vector<double> const& lambdas,
                                      ShiftParam z)
{
    Complex const zz = z.z();
    Complex s1{0.0, 0.0};
    Complex s2{0.0, 0.0};
    for (double l : lambdas) {
        Complex const r = l / (1.0 + zz * l);
        s1 += r;
        s2 += r * r;
    }
    return {s1, s2};
}

void write_spectrum_csv(std::ostream& os, SpectrumSample const& s)
{
    os << "# m=" << s.spec.m << ",n=" << s.spec.n << ",scale="
       << std::setprecision(17) << s.scale << ",seed=" << s.spec.seed << "\n";
    os << "rank,lambda_rescaled\n";
    for (std::size_t i = 0; i < s.lambdas.size(); ++i) {
        os << (i + 1) << "," << std::setprecision(17) << s.lambdas[i] << "\n";
    }
}

}  // namespace htrmt
