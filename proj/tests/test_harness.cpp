// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "htrmt/harness.hpp"
#include "htrmt/poisson_extremes.hpp"

using namespace htrmt;

namespace {

RouteParams cauchy(int m, int n, double t)
{
    RouteParams p;
    p.ensemble.m = m;
    p.ensemble.n = n;
    p.t = t;
    return p;
}

}  // namespace

TEST(Harness, ConstantRoute)
{
    register_route("test_constant_half", [](RouteParams const&) {
        return [](RngStream&) { return Complex(0.5, 0.0); };
    });
    auto const e = run_estimator("test_constant_half", RouteParams{}, 10000, 1);
    EXPECT_EQ(e.mean, Complex(0.5, 0.0));
    EXPECT_EQ(e.std_error, 0.0);
    EXPECT_EQ(e.replicas, 10000);
    EXPECT_EQ(e.route, "test_constant_half");
}

TEST(Harness, Deterministic)
{
    auto const p = cauchy(8, 8, 0.7);
    EXPECT_EQ(run_estimator("direct", p, 5000, 42), run_estimator("direct", p, 5000, 42));
    EXPECT_NE(run_estimator("direct", p, 5000, 42).mean, run_estimator("direct", p, 5000, 43).mean);
}

TEST(Harness, IndependentOfThreadCount)
{
    auto const p = cauchy(20, 20, 1.0);
    auto const one = run_estimator("cauchy_dual", p, 3 * kBlockSize + 17, 7, 1);
    for (int threads : {2, 3, 5}) {
        EXPECT_EQ(run_estimator("cauchy_dual", p, 3 * kBlockSize + 17, 7, threads), one) << threads;
    }
}

TEST(Harness, MeanAndStandardError)
{
    // Replica i draws one uniform; mean 1/2, variance 1/12.
    register_route("test_uniform", [](RouteParams const&) {
        return [](RngStream& s) { return Complex(s.uniform_open(), 0.0); };
    });
    long const n = 200000;
    auto const e = run_estimator("test_uniform", RouteParams{}, n, 3);
    EXPECT_NEAR(e.mean.real(), 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
    EXPECT_NEAR(e.std_error, std::sqrt(1.0 / 12.0 / n), 0.02 * std::sqrt(1.0 / 12.0 / n));
}

TEST(Harness, RejectsTooFewReplicas)
{
    EXPECT_THROW(run_estimator("cauchy_dual", cauchy(2, 2, 1.0), 1, 0), std::invalid_argument);
}

TEST(Harness, ReplicaErrorNamesRouteAndReplica)
{
    register_route("test_failing", [](RouteParams const&) {
        return [](RngStream& s) -> Complex {
            (void)s;
            throw std::runtime_error("boom");
        };
    });
    try {
        run_estimator("test_failing", RouteParams{}, 100, 0, 2);
        FAIL() << "expected a failure";
    } catch (std::exception const& e) {
        std::string const msg = e.what();
        EXPECT_NE(msg.find("test_failing"), std::string::npos) << msg;
        EXPECT_NE(msg.find("replica 0"), std::string::npos) << msg;
        EXPECT_NE(msg.find("boom"), std::string::npos) << msg;
    }
}

TEST(Harness, ResolveThreads)
{
    EXPECT_EQ(resolve_threads(3), 3);
    ::setenv("HEAVYTAIL_RMT_THREADS", "5", 1);
    EXPECT_EQ(resolve_threads(0), 5);
    ::setenv("HEAVYTAIL_RMT_THREADS", "junk", 1);
    EXPECT_GE(resolve_threads(0), 1);
    ::unsetenv("HEAVYTAIL_RMT_THREADS");
}

TEST(Harness, MultiRouteSharesReplicas)
{
    MultiReplicaFn fn = [](RngStream& s, std::vector<Complex>& out) {
        double const u = s.uniform_open();
        out[0] = u;
        out[1] = 2.0 * u;
    };
    auto const est = run_replicas_multi(fn, {"u", "two_u"}, 10000, 9, 2);
    ASSERT_EQ(est.size(), 2u);
    EXPECT_NEAR(est[1].mean.real(), 2.0 * est[0].mean.real(), 1e-14);
    EXPECT_NEAR(est[1].std_error, 2.0 * est[0].std_error, 1e-14);
    EXPECT_EQ(est[1].route, "two_u");
}

TEST(Compare, ZScore)
{
    Estimate a{{1.0, 0.0}, 0.3, 100, 0, "a"};
    Estimate b{{0.0, 0.0}, 0.4, 100, 0, "b"};
    auto const r = compare(a, b);
    EXPECT_NEAR(r.z_score, 2.0, 1e-15);
    EXPECT_TRUE(r.pass);
    EXPECT_FALSE(compare(a, b, 1.5).pass);
    auto const ref = compare_to_reference(a, {0.4, 0.0});
    EXPECT_NEAR(ref.z_score, 2.0, 1e-15);
    auto const j = to_json(r);
    EXPECT_EQ(j.at("pass"), true);
    EXPECT_EQ(j.at("a").at("route"), "a");
}

TEST(Compare, EstimateJson)
{
    Estimate e{{0.25, -0.5}, 0.01, 64, 9, "direct"};
    auto const j = to_json(e);
    EXPECT_EQ(j.at("mean_re"), 0.25);
    EXPECT_EQ(j.at("mean_im"), -0.5);
    EXPECT_EQ(j.at("stderr"), 0.01);
    EXPECT_EQ(j.at("replicas"), 64);
    EXPECT_EQ(j.at("seed"), 9);
}

TEST(Routes, RegistryAndErrors)
{
    auto const ids = route_ids();
    for (char const* id : {"direct", "cauchy_dual", "cauchy_dual_sparse", "general_r_dual",
                           "complex_dual", "rademacher_dual", "corollary1",
                           "corollary1_second", "poisson_truncated"}) {
        EXPECT_NE(std::find(ids.begin(), ids.end(), id), ids.end()) << id;
    }
    EXPECT_THROW(make_route("no_such_route", RouteParams{}), UnknownRoute);
    EXPECT_THROW(make_route("cauchy_dual_sparse", cauchy(4, 4, 1.0)), InvalidSpec);
}

TEST(Routes, ParamsJsonRoundTrip)
{
    RouteParams p = cauchy(12, 6, 0.3);
    p.ensemble.kind = EnsembleKind::CauchySparse;
    p.ensemble.b = 2;
    p.ensemble.seed = 77;
    p.ts = {0.1, 0.2};
    p.z = Complex(1.0, -2.0);
    p.power = Power::One;
    p.regime = Regime::Unscaled;
    p.char_fn = CharFn::Gaussian;
    p.radial = "uniform_radial";
    p.cutoff = 1e-5;
    nlohmann::json j = p;
    EXPECT_EQ(j.get<RouteParams>(), p);
    j["bogus"] = 1;
    EXPECT_THROW(j.get<RouteParams>(), std::exception);
}

TEST(Routes, EffectivePower)
{
    RouteParams p;
    EXPECT_EQ(p.effective_power(), Power::Half);
    p.ensemble.kind = EnsembleKind::WishartComplex;
    EXPECT_EQ(p.effective_power(), Power::One);
    p.power = Power::Half;
    EXPECT_EQ(p.effective_power(), Power::Half);
    p.t = 2.0;
    EXPECT_EQ(p.shift(), Complex(4.0, 0.0));
    p.z = Complex(1.0, 1.0);
    EXPECT_EQ(p.shift(), Complex(1.0, 1.0));
}

TEST(Routes, SparseMaskFixedAcrossReplicas)
{
    EnsembleSpec spec;
    spec.kind = EnsembleKind::CauchySparse;
    spec.m = spec.n = 10;
    spec.b = 2;
    spec.seed = 3;
    auto const draw = make_spectrum_draw(spec, Regime::Extreme);
    RngStream a(1, 5), b(1, 5);
    EXPECT_EQ(draw(a), draw(b));
    EXPECT_EQ(draw(a).size(), 10u);
}

TEST(DerivativeStatistics, References)
{
    EXPECT_NEAR(corollary1_reference({1.0, 0.0}).real(), 0.33682139386414452314, 1e-15);
    EXPECT_NEAR(corollary1_second_reference({1.0, 0.0}).real(), 0.55124855295446766877, 1e-15);
}

TEST(DerivativeStatistics, StatisticDecreasesInZ)
{
    EnsembleSpec spec;
    spec.m = spec.n = 16;
    double prev = 1e9;
    for (double z : {1.0, 4.0, 16.0}) {
        auto const e = corollary1_statistic(spec, {z, 0.0}, 5000, 11);
        EXPECT_LT(e.mean.real(), prev) << z;
        EXPECT_GT(e.mean.real(), 0.0);
        prev = e.mean.real();
    }
}

TEST(TailStudy, PoissonMaxMatchesReference)
{
    TailStudyConfig c;
    c.x_grid = {0.5, 2.0, 8.0};
    c.replicas = 20000;
    c.statistic = TailStatistic::PoissonMax;
    c.cutoff = 0.05;
    c.seed = 12;
    auto const r = tail_study(c, EnsembleSpec{});
    ASSERT_EQ(r.rows.size(), 3u);
    for (auto const& row : r.rows) {
        EXPECT_NEAR(row.reference, 1.0 - frechet_rightmost_cdf(row.x), 1e-15);
        EXPECT_NEAR(row.empirical_tail, row.reference, 3.0 * row.std_error + 1e-12) << row.x;
        EXPECT_NEAR(row.empirical_C, row.empirical_tail * std::sqrt(row.x), 1e-15);
    }
}

TEST(TailStudy, Lambda1Rows)
{
    TailStudyConfig c;
    c.x_grid = {1.0, 4.0};
    c.replicas = 500;
    c.seed = 13;
    EnsembleSpec spec;
    spec.m = spec.n = 16;
    auto const r = tail_study(c, spec);
    ASSERT_EQ(r.rows.size(), 2u);
    EXPECT_GE(r.rows[0].empirical_tail, r.rows[1].empirical_tail);
    ASSERT_TRUE(r.mean_count_above_delta.has_value());
    EXPECT_GE(*r.mean_count_above_delta, r.rows[0].empirical_tail);
    EXPECT_EQ(r.values.size(), 500u);
    EXPECT_DOUBLE_EQ(r.sup_C, std::max(r.rows[0].empirical_C, r.rows[1].empirical_C));
}

TEST(TailStudy, ConfigValidation)
{
    TailStudyConfig c;
    c.x_grid = {2.0, 1.0};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.x_grid = {};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    EXPECT_EQ(tail_statistic_from_string("max_entry"), TailStatistic::MaxEntry);
    EXPECT_EQ(to_string(TailStatistic::PoissonMax), "poisson_max");
    EXPECT_THROW(tail_statistic_from_string("lambda2"), std::invalid_argument);
}

TEST(TailStudy, CsvHeader)
{
    TailStudyResult r;
    r.rows.push_back({1.0, 0.25, 0.01, 0.3, 0.25});
    std::ostringstream os;
    write_tail_csv(os, r);
    EXPECT_EQ(os.str(), "x,empirical_tail,stderr,reference,empirical_C\n1,0.25,0.01,0.29999999999999999,0.25\n");
}

TEST(KolmogorovSmirnov, Statistic)
{
    auto const r = ks_two_sample({1, 2, 3, 4, 5}, {3.5, 6, 7, 8});
    EXPECT_DOUBLE_EQ(r.statistic, 0.75);
    auto const same = ks_two_sample({1, 2, 3}, {1, 2, 3});
    EXPECT_EQ(same.statistic, 0.0);
    EXPECT_EQ(same.p_value, 1.0);
    std::vector<double> a, b;
    RngStream s(14, 0, StreamPurpose::Test);
    for (int i = 0; i < 2000; ++i) {
        a.push_back(s.normal());
        b.push_back(s.normal() + 0.3);
    }
    EXPECT_LT(ks_two_sample(a, b).p_value, 1e-6);
}
