// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "htrmt/spectra.hpp"

using namespace htrmt;

namespace {

MatrixSample real_sample(Eigen::MatrixXd a)
{
    MatrixSample s{std::move(a), std::nullopt, {}};
    s.spec.m = static_cast<int>(s.real().rows());
    s.spec.n = static_cast<int>(s.real().cols());
    return s;
}

}  // namespace

TEST(RescaledSpectrum, OneByOne)
{
    Eigen::MatrixXd a(1, 1);
    a << -2.5;
    auto const s = rescaled_spectrum(real_sample(a), Regime::Extreme);
    EXPECT_EQ(s.scale, 1.0);
    ASSERT_EQ(s.lambdas.size(), 1u);
    EXPECT_DOUBLE_EQ(s.lambdas[0], 6.25);
}

TEST(RescaledSpectrum, Diagonal)
{
    Eigen::MatrixXd a = Eigen::Vector3d(6.0, 3.0, 0.0).asDiagonal();
    auto const s = rescaled_spectrum(real_sample(a), Regime::Extreme);
    EXPECT_EQ(s.scale, 81.0);
    ASSERT_EQ(s.lambdas.size(), 3u);
    EXPECT_NEAR(s.lambdas[0], 36.0 / 81.0, 1e-15);
    EXPECT_NEAR(s.lambdas[1], 9.0 / 81.0, 1e-15);
    EXPECT_NEAR(s.lambdas[2], 0.0, 1e-15);
}

TEST(RescaledSpectrum, MatchesSymmetricEigensolver)
{
    EnsembleSpec spec;
    spec.m = 50;
    spec.n = 30;
    RngStream stream(21, 0);
    auto const sample = sample_matrix(spec, stream);
    auto const s = rescaled_spectrum(sample, Regime::Extreme);
    Eigen::MatrixXd const gram = sample.real().transpose() * sample.real() / s.scale;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    auto ev = eig.eigenvalues();
    std::vector<double> oracle(ev.data(), ev.data() + ev.size());
    std::sort(oracle.rbegin(), oracle.rend());
    ASSERT_EQ(s.lambdas.size(), 30u);
    for (int i = 0; i < 5; ++i) {
        EXPECT_NEAR(s.lambdas[i] / oracle[i], 1.0, 1e-8) << i;
    }
    EXPECT_TRUE(std::is_sorted(s.lambdas.rbegin(), s.lambdas.rend()));
}

TEST(RescaledSpectrum, RegimeScales)
{
    EnsembleSpec spec;
    spec.m = 8;
    spec.n = 4;
    EXPECT_EQ(regime_scale(spec, Regime::Extreme), 32.0 * 32.0);
    EXPECT_EQ(regime_scale(spec, Regime::WishartGlobal), 4.0);
    EXPECT_EQ(regime_scale(spec, Regime::Unscaled), 1.0);
    spec.kind = EnsembleKind::CauchySparse;
    spec.b = 2;
    EXPECT_EQ(regime_scale(spec, Regime::Extreme), 16.0 * 16.0);
}

TEST(RescaledSpectrum, RejectsNonFinite)
{
    Eigen::MatrixXd a = Eigen::MatrixXd::Ones(2, 2);
    a(0, 1) = std::nan("");
    EXPECT_THROW(rescaled_spectrum(real_sample(a), Regime::Extreme), SpectrumError);
}

TEST(ShiftParam, Domain)
{
    EXPECT_THROW(ShiftParam::from_complex({0.0, 1.0}), DomainError);
    EXPECT_THROW(ShiftParam::from_complex({-1.0, 0.0}), DomainError);
    EXPECT_THROW(ShiftParam::from_t(0.0), DomainError);
    EXPECT_EQ(ShiftParam::from_t(3.0).z(), Complex(9.0, 0.0));
    EXPECT_TRUE(ShiftParam::from_t(3.0).is_real());
}

TEST(DetFunctional, TrivialCases)
{
    auto const z = ShiftParam::from_t(1.0);
    EXPECT_EQ(det_functional(std::vector<double>{}, z, Power::Half), Complex(1.0, 0.0));
    EXPECT_EQ(det_functional(std::vector<double>{0.0, 0.0}, z, Power::Half), Complex(1.0, 0.0));
    EXPECT_NEAR(det_functional(std::vector<double>{3.0}, z, Power::Half).real(), 0.5, 1e-15);
    EXPECT_NEAR(det_functional(std::vector<double>{3.0}, z, Power::One).real(), 0.25, 1e-15);
}

TEST(DetFunctional, ComplexShift)
{
    auto const z = ShiftParam::from_complex({1.0, 1.0});
    Complex const v = det_functional(std::vector<double>{1.0, 1.0}, z, Power::Half);
    Complex const expected = 1.0 / Complex(2.0, 1.0);
    EXPECT_NEAR(std::abs(v - expected), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v), 1.0 / std::sqrt(5.0), 1e-15);
}

TEST(DetFunctional, ModulusAtMostOne)
{
    std::vector<double> const lambdas{0.1, 2.0, 17.0, 1e-6};
    for (Complex z : {Complex(0.01, 5.0), Complex(3.0, -2.0), Complex(1e-3, 0.0)}) {
        for (Power p : {Power::Half, Power::One}) {
            EXPECT_LE(std::abs(det_functional(lambdas, ShiftParam::from_complex(z), p)), 1.0);
        }
    }
}

TEST(ResolventSums, HandValues)
{
    auto const zero = weighted_resolvent_sums(std::vector<double>{0.0, 0.0}, ShiftParam::from_t(1.0));
    EXPECT_EQ(zero.s1, Complex(0.0, 0.0));
    EXPECT_EQ(zero.s2, Complex(0.0, 0.0));
    auto const one = weighted_resolvent_sums(std::vector<double>{1.0}, ShiftParam::from_t(1.0));
    EXPECT_NEAR(one.s1.real(), 0.5, 1e-15);
    EXPECT_NEAR(one.s2.real(), 0.25, 1e-15);
    auto const two = weighted_resolvent_sums(std::vector<double>{2.0, 0.5},
                                             ShiftParam::from_complex({2.0, 0.0}));
    EXPECT_NEAR(two.s1.real(), 0.65, 1e-15);
    EXPECT_NEAR(two.s2.real(), 0.2225, 1e-15);
}

TEST(ResolventSums, FirstSumIsLogDerivative)
{
    // d/dz det(1 + z L)^{-1/2} = -(1/2) S1 det(...)^{-1/2}
    std::vector<double> const lambdas{0.3, 1.7, 4.0};
    Complex const z{1.2, 0.4};
    double const h = 1e-6;
    auto const f = [&](Complex w) {
        return det_functional(lambdas, ShiftParam::from_complex(w), Power::Half);
    };
    Complex const fd = (f(z + h) - f(z - h)) / (2.0 * h);
    Complex const analytic = -0.5 * weighted_resolvent_sums(lambdas, ShiftParam::from_complex(z)).s1 * f(z);
    EXPECT_NEAR(std::abs(fd - analytic), 0.0, 1e-8);
}

TEST(SpectrumCsv, HeaderAndRows)
{
    Eigen::MatrixXd a = Eigen::Vector2d(2.0, 1.0).asDiagonal();
    auto const s = rescaled_spectrum(real_sample(a), Regime::Unscaled);
    std::ostringstream os;
    write_spectrum_csv(os, s);
    std::string const text = os.str();
    EXPECT_NE(text.find("rank,lambda_rescaled\n1,4\n2,1\n"), std::string::npos);
}
