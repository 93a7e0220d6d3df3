// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "htrmt/ensembles.hpp"
#include "htrmt/harness.hpp"
#include "htrmt/poisson_extremes.hpp"

using namespace htrmt;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(PoissonProcess, IntensityAndTailMass)
{
    EXPECT_NEAR(poisson_intensity(1.0), 1.0 / kPi, 1e-16);
    EXPECT_NEAR(poisson_intensity(4.0), 1.0 / (8.0 * kPi), 1e-16);
    EXPECT_NEAR(poisson_tail_mass(1.0), 2.0 / kPi, 1e-16);
    EXPECT_NEAR(poisson_tail_mass(0.25), 4.0 / kPi, 1e-15);
}

TEST(PoissonProcess, InverseTransform)
{
    EXPECT_EQ(poisson_point_from_uniform(1.0, 0.75), 16.0);
    EXPECT_EQ(poisson_point_from_uniform(0.25, 0.5), 1.0);
    EXPECT_THROW(poisson_point_from_uniform(1.0, 0.0), std::invalid_argument);
    EXPECT_GT(poisson_point_from_uniform(1.0, 1.0 - 1e-12), 1e20);
}

TEST(PoissonProcess, CountSamplerMoments)
{
    RngStream s(1, 0, StreamPurpose::Test);
    for (double mean : {0.3, 3.0, 10.0, 250.0}) {
        constexpr int kN = 100000;
        double sum = 0.0, sq = 0.0;
        for (int i = 0; i < kN; ++i) {
            double const k = static_cast<double>(sample_poisson_count(mean, s));
            sum += k;
            sq += k * k;
        }
        double const m = sum / kN;
        EXPECT_NEAR(m, mean, 4.0 * std::sqrt(mean / kN)) << mean;
        EXPECT_NEAR(sq / kN - m * m, mean, 0.03 * mean + 0.01) << mean;
    }
    EXPECT_EQ(sample_poisson_count(0.0, s), 0u);
}

TEST(PoissonProcess, MeanCountAboveCutoff)
{
    constexpr int kN = 100000;
    double total = 0.0;
    for (int r = 0; r < kN; ++r) {
        RngStream s(2, r);
        total += static_cast<double>(sample_process(1.0, s).points.size());
    }
    double const mu = 2.0 / kPi;
    EXPECT_NEAR(total / kN, mu, 3.0 * std::sqrt(mu / kN));
}

TEST(PoissonProcess, PointsSortedDescendingAboveCutoff)
{
    RngStream s(3, 0);
    auto const sample = sample_process(0.001, s);
    EXPECT_EQ(sample.cutoff, 0.001);
    EXPECT_TRUE(std::is_sorted(sample.points.rbegin(), sample.points.rend()));
    for (double x : sample.points) EXPECT_GE(x, 0.001);
}

TEST(PoissonProcess, VoidProbability)
{
    constexpr int kN = 100000;
    int empty = 0;
    for (int r = 0; r < kN; ++r) {
        RngStream s(4, r);
        auto const sample = sample_process(1.0, s);
        empty += sample.points.empty() || sample.points.front() <= 4.0;
    }
    EXPECT_NEAR(static_cast<double>(empty) / kN, std::exp(-1.0 / kPi), 0.01);
}

TEST(PoissonProcess, RightmostPointLaw)
{
    constexpr int kN = 100000;
    int below = 0;
    for (int r = 0; r < kN; ++r) {
        RngStream s(5, r);
        auto const sample = sample_process(0.01, s);
        below += sample.points.empty() || sample.points.front() <= 1.0;
    }
    EXPECT_NEAR(static_cast<double>(below) / kN, frechet_rightmost_cdf(1.0), 0.01);
}

TEST(DetExpectation, ClosedForm)
{
    EXPECT_NEAR(poisson_det_expectation({1.0, 0.0}).real(), 0.52907780826773534735, 1e-15);
    EXPECT_NEAR(poisson_det_expectation({4.0, 0.0}).real(), 0.27992332720139052547, 1e-15);
    EXPECT_NEAR(std::abs(poisson_det_expectation({1e-14, 0.0}) - 1.0), 0.0, 1e-7);
    EXPECT_THROW(poisson_det_expectation({0.0, 1.0}), DomainError);
}

TEST(LogFunctional, QuadratureValues)
{
    // int_a^b ((1 + z x)^{-1/2} - 1) dx / (pi x^{3/2})
    auto const near = [](Complex a, Complex b, double tol) { EXPECT_NEAR(std::abs(a - b), 0.0, tol); };
    near(poisson_log_functional({1.0, 0.0}, 0.0, 1e-6), {-3.18309806606358838733e-4, 0.0}, 1e-16);
    near(poisson_log_functional({1.0, 1.0}, 0.0, 0.3),
         {-0.171605321785706572592, -0.151916221177620847797}, 1e-13);
    near(poisson_log_functional({2.0, 0.0}, 0.5, 3.0), {-0.231976939734081264983, 0.0}, 1e-13);
    near(poisson_log_functional({0.5, -2.0}, 2.0, std::numeric_limits<double>::infinity()),
         {-0.360836759216815257176, 0.0620476069720375362493}, 1e-13);
}

TEST(LogFunctional, FullLineIsClosedForm)
{
    double const inf = std::numeric_limits<double>::infinity();
    for (Complex z : {Complex(1.0, 0.0), Complex(1.0, 1.0), Complex(0.2, -3.0)}) {
        Complex const full = poisson_log_functional(z, 0.0, inf);
        EXPECT_NEAR(std::abs(full + 2.0 / kPi * principal_sqrt(z)), 0.0, 1e-12) << z;
    }
    double const eps = 1e-6;
    Complex const head = poisson_log_functional({1.0, 0.0}, 0.0, eps);
    Complex const tail = poisson_log_functional({1.0, 0.0}, eps, inf);
    EXPECT_LT(std::abs(head + tail + 2.0 / kPi), 1e-10);
}

TEST(TruncationCorrection, Limits)
{
    EXPECT_EQ(truncation_correction({0.0, 0.0}, 0.5), Complex(1.0, 0.0));
    EXPECT_NEAR(std::abs(truncation_correction({1.0, 0.0}, 1e-16) - 1.0), 0.0, 1e-8);
    EXPECT_NEAR(truncation_correction({1.0, 0.0}, 1e-6).real(),
                std::exp(-3.18309806606358838733e-4), 1e-15);
}

TEST(TruncatedProduct, Values)
{
    EXPECT_EQ(truncated_product({}, {2.0, 0.0}), Complex(1.0, 0.0));
    EXPECT_NEAR(truncated_product({3.0}, {1.0, 0.0}).real(), 0.5, 1e-15);
    Complex const v = truncated_product({1.0, 1.0}, {1.0, 1.0});
    EXPECT_NEAR(std::abs(v - 1.0 / Complex(2.0, 1.0)), 0.0, 1e-15);
}

TEST(TruncatedRoute, MatchesClosedForm)
{
    RouteParams p;
    p.t = 1.0;
    p.cutoff = 1e-4;
    auto const e = run_estimator("poisson_truncated", p, 50000, 6);
    auto const rep = compare_to_reference(e, poisson_det_expectation({1.0, 0.0}));
    EXPECT_TRUE(rep.pass) << e.mean << " +- " << e.std_error;
}

TEST(ExtremeLaws, FrechetCdf)
{
    EXPECT_NEAR(frechet_rightmost_cdf(4.0 / (kPi * kPi)), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(frechet_rightmost_cdf(1e16), 1.0, 1e-7);
    EXPECT_NEAR(max_entry_cdf(2.0 / kPi), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(max_entry_cdf(1e16), 1.0, 1e-15);
}

TEST(ExtremeLaws, MaxCauchyEntry)
{
    EnsembleSpec spec;
    spec.m = spec.n = 64;
    constexpr int kN = 10000;
    int below = 0;
    Eigen::MatrixXd a;
    for (int r = 0; r < kN; ++r) {
        RngStream s(7, r);
        fill_real_entries(spec, nullptr, s, a);
        below += a.cwiseAbs().maxCoeff() / (64.0 * 64.0) <= 1.0;
    }
    EXPECT_NEAR(static_cast<double>(below) / kN, max_entry_cdf(1.0), 0.02);
}

TEST(PoissonCsv, Format)
{
    std::vector<PoissonSample> samples{{1.0, {4.0, 2.0}}, {1.0, {}}, {1.0, {1.5}}};
    std::ostringstream os;
    write_poisson_csv(os, samples);
    EXPECT_EQ(os.str(), "replica_id,point\n0,4\n0,2\n2,1.5\n");
}
