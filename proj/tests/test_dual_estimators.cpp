// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "htrmt/dual_estimators.hpp"
#include "htrmt/harness.hpp"

using namespace htrmt;

namespace {

constexpr double kExpMinus2OverPi = 0.52907780826773534735;
// e E1(1) = int_0^inf e^{-u} / (1 + u) du.
constexpr double kGompertz = 0.59634736232319407434;

RouteParams params(EnsembleKind kind, int m, int n, double t)
{
    RouteParams p;
    p.ensemble.kind = kind;
    p.ensemble.m = m;
    p.ensemble.n = n;
    p.t = t;
    return p;
}

void expect_agree(Estimate const& a, Estimate const& b)
{
    auto const rep = compare(a, b, 3.0);
    EXPECT_TRUE(rep.pass) << a.route << " " << a.mean << " +- " << a.std_error << " vs "
                          << b.route << " " << b.mean << " +- " << b.std_error;
}

void expect_near_reference(Estimate const& a, double ref)
{
    EXPECT_NEAR(a.mean.real(), ref, 3.0 * a.std_error) << a.route;
}

}  // namespace

TEST(Psi, ValueAndSlopeAtZero)
{
    EXPECT_EQ(psi(0.0), 1.0);
    double const h = 1e-6;
    double const fd = (psi(h) - psi(-h)) / (2.0 * h);
    EXPECT_NEAR(fd, -std::sqrt(2.0 / std::numbers::pi), 1e-6);
}

TEST(Psi, HighPrecisionValues)
{
    EXPECT_NEAR(psi(10.0) / 0.079013388202772005889 - 1.0, 0.0, 1e-10);
    EXPECT_NEAR(psi(1.0), 0.52315658373024674336, 1e-15);
    EXPECT_NEAR(psi(0.5), 0.69923766944079613966, 1e-15);
    EXPECT_NEAR(log_psi(200.0), std::log(psi(200.0)), 1e-14);
    EXPECT_NEAR(psi(1e4) * 1e4, std::sqrt(2.0 / std::numbers::pi), 1e-8);
}

TEST(CauchyDual, ZeroShiftIsExactlyOne)
{
    RngStream s(1, 0);
    EXPECT_EQ(cauchy_dual_single(5, 3, 0.0, s).value, 1.0);
    EXPECT_EQ(cauchy_dual_single(5, 3, 0.0, s).route, DualRoute::CauchySingle);
}

TEST(CauchyDual, MatchesDirectAtOneByOne)
{
    auto const p = params(EnsembleKind::CauchyFull, 1, 1, 1.0);
    expect_agree(run_estimator("cauchy_dual", p, 1000000, 11),
                 run_estimator("direct", p, 1000000, 12));
}

TEST(CauchyDual, LargeSizeLimit)
{
    auto const p = params(EnsembleKind::CauchyFull, 1000, 1000, 1.0);
    auto const e = run_estimator("cauchy_dual", p, 10000, 13);
    EXPECT_NEAR(e.mean.real(), kExpMinus2OverPi, 0.02);
}

TEST(CauchyDualSparse, FullMaskReducesToDense)
{
    Mask const all = Mask::Constant(7, 7, true);
    for (std::uint64_t i = 0; i < 20; ++i) {
        RngStream a(2, i), b(2, i);
        EXPECT_DOUBLE_EQ(cauchy_dual_sparse(all, 7, 0.8, a).value,
                         cauchy_dual_single(7, 7, 0.8, b).value);
    }
}

TEST(CauchyDualSparse, ZeroShift)
{
    RngStream mask_stream(3, 0, StreamPurpose::Mask), s(3, 0);
    Mask const mask = sample_sparse_mask(10, 10, 3, false, mask_stream);
    EXPECT_EQ(cauchy_dual_sparse(mask, 3, 0.0, s).value, 1.0);
}

TEST(CauchyDualSparse, SparseLimit)
{
    auto p = params(EnsembleKind::CauchySparse, 256, 256, 1.0);
    p.ensemble.b = 64;
    p.ensemble.seed = 5;
    auto const e = run_estimator("cauchy_dual_sparse", p, 10000, 14);
    EXPECT_NEAR(e.mean.real(), kExpMinus2OverPi, 0.06);
}

TEST(GeneralR, ZeroShifts)
{
    RngStream s(4, 0);
    EXPECT_EQ(general_r_dual(3, 2, {0.0, 0.0}, CharFn::Cauchy, s).value, 1.0);
    EXPECT_THROW(general_r_dual(3, 2, {}, CharFn::Cauchy, s), std::invalid_argument);
}

TEST(GeneralR, SingleShiftMatchesPsiRoute)
{
    // The Psi route rescales t by 1/(mn); the general route takes raw shifts.
    auto p = params(EnsembleKind::CauchyFull, 4, 4, 0.5);
    auto const psi_route = run_estimator("cauchy_dual", p, 100000, 15);
    p.ts = {0.5 / 16.0};
    expect_agree(run_estimator("general_r_dual", p, 100000, 16), psi_route);
}

TEST(GeneralR, TwoShiftsMatchDirect)
{
    auto p = params(EnsembleKind::CauchyFull, 3, 3, 1.0);
    p.ts = {0.4 / 9.0, 0.4 / 9.0};
    p.regime = Regime::Unscaled;
    expect_agree(run_estimator("general_r_dual", p, 100000, 17),
                 run_estimator("direct", p, 100000, 18));
}

TEST(GeneralR, GaussianCharFnMatchesRealWishart)
{
    auto p = params(EnsembleKind::WishartReal, 3, 2, 1.0);
    p.ts = {0.6};
    p.regime = Regime::Unscaled;
    p.char_fn = CharFn::Gaussian;
    expect_agree(run_estimator("general_r_dual", p, 100000, 19),
                 run_estimator("direct", p, 100000, 20));
}

TEST(RadialG, WishartDensityGivesExponential)
{
    auto const f = radial_density_from_string("wishart_radial");
    for (double y : {0.5, 1.0, 2.0, 7.5}) {
        EXPECT_NEAR(radial_G(f, y).value, std::exp(-y), 1e-10) << y;
    }
}

TEST(RadialG, ZeroArgument)
{
    for (char const* id : {"wishart_radial", "uniform_radial"}) {
        EXPECT_EQ(radial_G(radial_density_from_string(id), 0.0).value, 1.0);
    }
}

TEST(RadialG, MomentSeries)
{
    auto const f = radial_density_from_string("wishart_radial");
    double series = 0.0, term = 1.0;
    for (int l = 0; l < 30; ++l) {
        if (l > 0) term *= -0.1 / l;
        series += term;
    }
    EXPECT_NEAR(radial_G(f, 0.1).value, series, 1e-9);
    EXPECT_NEAR(radial_G(f, 5e-4).value, std::exp(-5e-4), 1e-15);
}

TEST(RadialG, UniformDensityValues)
{
    auto const f = radial_density_from_string("uniform_radial");
    EXPECT_NEAR(radial_G(f, 0.5).value, 0.57672480775687338720, 1e-10);
    EXPECT_NEAR(radial_G(f, 2.0).value, -0.033021664011774568072, 1e-10);
    EXPECT_NEAR(radial_G(f, 10.0).value, 0.056238229463281828663, 1e-10);
    EXPECT_THROW(radial_density_from_string("triangle"), std::invalid_argument);
}

TEST(ComplexDual, ZeroShift)
{
    RngStream s(6, 0);
    EXPECT_EQ(complex_dual_single(3, 2, 0.0, RadialKernel::wishart(), s).value, 1.0);
    auto const uniform = RadialKernel::from_string("uniform_radial");
    EXPECT_EQ(complex_dual_single(3, 2, 0.0, uniform, s).value, 1.0);
}

TEST(ComplexDual, WishartAgainstQuadrature)
{
    auto p = params(EnsembleKind::WishartComplex, 2, 1, 0.8);
    // int_0^inf e^{-u} (1 + 0.64 u)^{-2} du
    expect_near_reference(run_estimator("complex_dual", p, 100000, 21), 0.50040745798927681637);
    p = params(EnsembleKind::WishartComplex, 1, 1, 1.0);
    expect_near_reference(run_estimator("complex_dual", p, 100000, 22), kGompertz);
}

TEST(ComplexDual, WishartMatchesDirect)
{
    auto p = params(EnsembleKind::WishartComplex, 3, 2, 0.7);
    p.regime = Regime::Unscaled;
    expect_agree(run_estimator("complex_dual", p, 100000, 23),
                 run_estimator("direct", p, 100000, 24));
}

TEST(Rademacher, OneByOne)
{
    auto const p = params(EnsembleKind::Rademacher, 1, 1, 1.3);
    expect_near_reference(run_estimator("rademacher_dual", p, 200000, 25),
                          1.0 / std::sqrt(1.0 + 1.3 * 1.3));
    RngStream s(7, 0);
    EXPECT_EQ(rademacher_dual(4, 0.0, s).value, 1.0);
}

TEST(Rademacher, MatchesBruteForce)
{
    auto const p = params(EnsembleKind::Rademacher, 3, 3, 0.5);
    expect_near_reference(run_estimator("rademacher_dual", p, 1000000, 26),
                          0.47522643874243564257);
}

TEST(RademacherBruteForce, ExactValues)
{
    EXPECT_NEAR(rademacher_bruteforce(1, 2.0), 1.0 / std::sqrt(5.0), 1e-15);
    for (int n = 1; n <= 4; ++n) EXPECT_NEAR(rademacher_bruteforce(n, 0.0), 1.0, 1e-15);
    EXPECT_NEAR(rademacher_bruteforce(2, 1.0), 0.39027346441664563631, 1e-14);
    EXPECT_NEAR(rademacher_bruteforce(2, 0.5), 0.68688672392660709553, 1e-14);
    EXPECT_NEAR(rademacher_bruteforce(3, 0.5), 0.47522643874243564257, 1e-14);
    EXPECT_THROW(rademacher_bruteforce(5, 1.0), std::invalid_argument);
}
