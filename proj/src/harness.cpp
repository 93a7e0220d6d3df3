// SPDX-License-Identifier: Apache-2.0
#include "htrmt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "htrmt/poisson_extremes.hpp"

namespace htrmt {
namespace {

// Welford summary of a block; merged with Chan's formula.
struct Moments {
    long count{0};
    Complex mean{0.0, 0.0};
    double m2{0.0};  // sum |x - mean|^2

    void add(Complex x)
    {
        ++count;
        Complex const d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += std::real(d * std::conj(x - mean));
    }

    void merge(Moments const& o)
    {
        if (o.count == 0) return;
        if (count == 0) {
            *this = o;
            return;
        }
        double const na = count, nb = o.count, n = na + nb;
        Complex const d = o.mean - mean;
        mean += d * (nb / n);
        m2 += o.m2 + std::norm(d) * na * nb / n;
        count += o.count;
    }
};

struct ReplicaFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace

nlohmann::json to_json(Estimate const& e)
{
    return {{"route", e.route},       {"mean_re", e.mean.real()},
            {"mean_im", e.mean.imag()}, {"stderr", e.std_error},
            {"replicas", e.replicas}, {"seed", e.seed}};
}

int resolve_threads(int threads)
{
    if (threads > 0) return threads;
    if (char const* env = std::getenv("HEAVYTAIL_RMT_THREADS")) {
        char* end = nullptr;
        long const v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void for_each_block(long count, int threads, std::function<void(long, long)> const& body)
{
    long const blocks = (count + kBlockSize - 1) / kBlockSize;
    int const workers = static_cast<int>(std::min<long>(resolve_threads(threads), blocks));
    std::atomic<long> next{0};
    std::atomic<bool> stop{false};
    std::mutex err_mutex;
    long err_block = std::numeric_limits<long>::max();
    std::exception_ptr err;

    auto const work = [&] {
        for (;;) {
            long const blk = next.fetch_add(1);
            if (blk >= blocks || stop.load()) return;
            long const begin = blk * kBlockSize;
            long const end = std::min(count, begin + kBlockSize);
            try {
                body(begin, end);
            } catch (...) {
                std::lock_guard lock(err_mutex);
                if (blk < err_block) {
                    err_block = blk;
                    err = std::current_exception();
                }
                stop.store(true);
                return;
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (err) std::rethrow_exception(err);
}

std::vector<Estimate> run_replicas_multi(MultiReplicaFn const& fn,
                                         std::vector<std::string> const& routes,
                                         long replicas, std::uint64_t seed, int threads)
{
    if (replicas < 2) throw std::invalid_argument("run_replicas: replicas must be >= 2");
    if (routes.empty()) throw std::invalid_argument("run_replicas: no outputs");
    std::size_t const k = routes.size();
    long const blocks = (replicas + kBlockSize - 1) / kBlockSize;
    std::vector<std::vector<Moments>> summaries(blocks);
    for_each_block(replicas, threads, [&](long begin, long end) {
        std::vector<Moments> acc(k);
        std::vector<Complex> out(k);
        for (long i = begin; i < end; ++i) {
            RngStream stream(seed, static_cast<std::uint64_t>(i));
            try {
                fn(stream, out);
            } catch (std::exception const& e) {
                throw ReplicaFailure("route '" + routes.front() + "' failed at replica "
                                     + std::to_string(i) + ": " + e.what());
            }
            for (std::size_t q = 0; q < k; ++q) acc[q].add(out[q]);
        }
        summaries[begin / kBlockSize] = std::move(acc);
    });
    std::vector<Estimate> result;
    for (std::size_t q = 0; q < k; ++q) {
        Moments total;
        for (auto const& s : summaries) total.merge(s[q]);
        double const var = total.m2 / static_cast<double>(total.count - 1);
        result.push_back({total.mean, std::sqrt(var / static_cast<double>(total.count)),
                          total.count, seed, routes[q]});
    }
    return result;
}

Estimate run_replicas(ReplicaFn const& fn, long replicas, std::uint64_t seed,
                      std::string const& route, int threads)
{
    auto const multi = [&fn](RngStream& s, std::vector<Complex>& out) { out[0] = fn(s); };
    return run_replicas_multi(multi, {route}, replicas, seed, threads).front();
}

Estimate run_estimator(std::string const& route, RouteParams const& params, long replicas,
                       std::uint64_t seed, int threads)
{
    return run_replicas(make_route(route, params), replicas, seed, route, threads);
}

ComparisonReport compare(Estimate const& a, Estimate const& b, double threshold)
{
    double const diff = std::abs(a.mean - b.mean);
    double const den = std::hypot(a.std_error, b.std_error);
    double z;
    if (den > 0.0) z = diff / den;
    else z = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return {a, b, z, threshold, z <= threshold};
}

ComparisonReport compare_to_reference(Estimate const& a, Complex reference, double threshold)
{
    Estimate ref{reference, 0.0, 0, 0, "reference"};
    return compare(a, ref, threshold);
}

nlohmann::json to_json(ComparisonReport const& r)
{
    return {{"a", to_json(r.a)},
            {"b", to_json(r.b)},
            {"z_score", r.z_score},
            {"threshold", r.threshold},
            {"pass", r.pass}};
}

Estimate corollary1_statistic(EnsembleSpec const& spec, Complex z, long replicas,
                              std::uint64_t seed, int order, int threads)
{
    if (order != 1 && order != 2) throw std::invalid_argument("corollary1: order is 1 or 2");
    RouteParams p;
    p.ensemble = spec;
    p.z = ShiftParam::from_complex(z).z();
    p.regime = Regime::Extreme;
    return run_estimator(order == 1 ? "corollary1" : "corollary1_second", p, replicas, seed,
                         threads);
}

Complex corollary1_reference(Complex z)
{
    Complex const r = principal_sqrt(z);
    return 2.0 * std::numbers::inv_pi / r * poisson_det_expectation(z);
}

Complex corollary1_second_reference(Complex z)
{
    Complex const r = principal_sqrt(z);
    constexpr double ip = std::numbers::inv_pi;
    return (4.0 * ip * ip / z + 2.0 * ip / (z * r)) * poisson_det_expectation(z);
}

std::string to_string(TailStatistic s)
{
    switch (s) {
    case TailStatistic::Lambda1: return "lambda1";
    case TailStatistic::MaxEntry: return "max_entry";
    case TailStatistic::PoissonMax: return "poisson_max";
    }
    return "?";
}

TailStatistic tail_statistic_from_string(std::string const& s)
{
    if (s == "lambda1") return TailStatistic::Lambda1;
    if (s == "max_entry") return TailStatistic::MaxEntry;
    if (s == "poisson_max") return TailStatistic::PoissonMax;
    throw std::invalid_argument("unknown tail statistic '" + s + "'");
}

void TailStudyConfig::validate() const
{
    if (x_grid.empty()) throw std::invalid_argument("tail study: empty x grid");
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        if (!(x_grid[i] > 0.0)) throw std::invalid_argument("tail study: x must be > 0");
        if (i > 0 && !(x_grid[i] > x_grid[i - 1])) {
            throw std::invalid_argument("tail study: x grid must be strictly ascending");
        }
    }
    if (replicas < 2) throw std::invalid_argument("tail study: replicas must be >= 2");
    if (!(cutoff >= 0.0)) throw std::invalid_argument("tail study: cutoff must be >= 0");
}

TailStudyResult tail_study(TailStudyConfig const& config, EnsembleSpec const& spec)
{
    config.validate();
    spec.validate();
    bool const is_lambda = config.statistic == TailStatistic::Lambda1;
    if (config.statistic == TailStatistic::MaxEntry && spec.kind == EnsembleKind::WishartComplex) {
        throw InvalidSpec("max_entry statistic needs a real ensemble");
    }
    double const cutoff = config.cutoff > 0.0 ? config.cutoff : 0.5 * config.x_grid.front();

    std::shared_ptr<Mask const> mask;
    if (config.statistic != TailStatistic::PoissonMax && spec.kind == EnsembleKind::CauchySparse) {
        mask = std::make_shared<Mask const>(ensemble_mask(spec));
    }
    double const scale = regime_scale(spec, Regime::Extreme);

    std::vector<double> values(config.replicas);
    std::vector<double> counts(is_lambda ? config.replicas : 0);
    for_each_block(config.replicas, config.threads, [&](long begin, long end) {
        Eigen::MatrixXd a;
        for (long i = begin; i < end; ++i) {
            RngStream stream(config.seed, static_cast<std::uint64_t>(i));
            switch (config.statistic) {
            case TailStatistic::PoissonMax: {
                auto const pts = sample_process_unsorted(cutoff, stream);
                values[i] = pts.empty() ? 0.0 : *std::max_element(pts.begin(), pts.end());
                break;
            }
            case TailStatistic::MaxEntry: {
                fill_real_entries(spec, mask.get(), stream, a);
                values[i] = a.cwiseAbs().maxCoeff() / std::sqrt(scale);
                break;
            }
            case TailStatistic::Lambda1: {
                std::vector<double> lambdas;
                if (spec.kind == EnsembleKind::WishartComplex) {
                    lambdas = squared_singular_values(sample_matrix(spec, stream).complex());
                } else {
                    fill_real_entries(spec, mask.get(), stream, a);
                    lambdas = squared_singular_values(a);
                }
                values[i] = lambdas.front() / scale;
                counts[i] = static_cast<double>(std::count_if(
                    lambdas.begin(), lambdas.end(),
                    [&](double l) { return l / scale >= config.delta; }));
                break;
            }
            }
        }
    });

    TailStudyResult out;
    double const n = static_cast<double>(config.replicas);
    for (double x : config.x_grid) {
        auto const above = std::count_if(values.begin(), values.end(),
                                         [x](double v) { return v > x; });
        double const p = above / n;
        double const ref = config.statistic == TailStatistic::MaxEntry
                               ? 1.0 - max_entry_cdf(x)
                               : 1.0 - frechet_rightmost_cdf(x);
        double const c = p * std::sqrt(x);
        out.rows.push_back({x, p, std::sqrt(p * (1.0 - p) / n), ref, c});
        out.sup_C = std::max(out.sup_C, c);
    }
    if (is_lambda) {
        double mean = 0.0, m2 = 0.0;
        long k = 0;
        for (double c : counts) {
            ++k;
            double const d = c - mean;
            mean += d / k;
            m2 += d * (c - mean);
        }
        out.mean_count_above_delta = mean;
        out.count_std_error = std::sqrt(m2 / (n - 1.0) / n);
    }
    out.values = std::move(values);
    return out;
}

void write_tail_csv(std::ostream& os, TailStudyResult const& r)
{
    os << "x,empirical_tail,stderr,reference,empirical_C\n";
    os << std::setprecision(17);
    for (auto const& row : r.rows) {
        os << row.x << "," << row.empirical_tail << "," << row.std_error << ","
           << row.reference << "," << row.empirical_C << "\n";
    }
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b)
{
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double const na = a.size(), nb = b.size();
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double const x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    double const en = std::sqrt(na * nb / (na + nb));
    double const lambda = (en + 0.12 + 0.11 / en) * d;
    // Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}.
    double q = 0.0;
    if (lambda < 1e-3) {
        q = 1.0;
    } else {
        double sign = 1.0;
        for (int k = 1; k <= 100; ++k) {
            double const term = sign * std::exp(-2.0 * k * k * lambda * lambda);
            q += term;
            if (std::abs(term) < 1e-12 * std::abs(q)) break;
            sign = -sign;
        }
        q = std::clamp(2.0 * q, 0.0, 1.0);
    }
    return {d, q};
}

}  // namespace htrmt
