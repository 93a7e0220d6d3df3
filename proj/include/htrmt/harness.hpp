// SPDX-License-Identifier: Apache-2.0
//! \file htrmt/harness.hpp
//! Reproducible replica orchestration, estimator comparison and tail studies.
//!
//! Replica i always draws from RngStream(seed, i). Replicas are grouped in
//! fixed blocks of kBlockSize; each block is reduced sequentially and the
//! block summaries are merged in block order, so an Estimate does not depend
//! on the number of worker threads.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "htrmt/routes.hpp"

namespace htrmt {

inline constexpr long kBlockSize = 4096;

struct Estimate {
    Complex mean{0.0, 0.0};
    //! Sample standard deviation over sqrt(replicas); for complex values the
    //! deviation is sqrt(E|x - mean|^2).
    double std_error{0.0};
    long replicas{0};
    std::uint64_t seed{0};
    std::string route;

    bool operator==(Estimate const&) const = default;
};

//! {route, mean_re, mean_im, stderr, replicas, seed}.
nlohmann::json to_json(Estimate const& e);

//! threads > 0 is used as given; otherwise HEAVYTAIL_RMT_THREADS, otherwise
//! the hardware concurrency.
int resolve_threads(int threads = 0);

//! Calls body(begin, end) for every block [begin, end) of [0, count) on up to
//! `threads` workers. Exceptions are rethrown after all workers stop; the one
//! from the lowest block wins.
void for_each_block(long count, int threads,
                    std::function<void(long, long)> const& body);

Estimate run_replicas(ReplicaFn const& fn, long replicas, std::uint64_t seed,
                      std::string const& route, int threads = 0);

//! Several statistics from the same replicas; fn fills `out` (size of
//! `routes`) for each replica and one Estimate per entry is returned.
using MultiReplicaFn = std::function<void(RngStream&, std::vector<Complex>& out)>;
std::vector<Estimate> run_replicas_multi(MultiReplicaFn const& fn,
                                         std::vector<std::string> const& routes,
                                         long replicas, std::uint64_t seed,
                                         int threads = 0);

//! Throws UnknownRoute, InvalidSpec, or std::runtime_error naming the failing
//! replica.
Estimate run_estimator(std::string const& route, RouteParams const& params,
                       long replicas, std::uint64_t seed, int threads = 0);

struct ComparisonReport {
    Estimate a;
    Estimate b;
    double z_score{0.0};
    double threshold{3.0};
    bool pass{true};
};

ComparisonReport compare(Estimate const& a, Estimate const& b, double threshold = 3.0);

//! Compares against an exact value (zero standard error).
ComparisonReport compare_to_reference(Estimate const& a, Complex reference,
                                      double threshold = 3.0);

nlohmann::json to_json(ComparisonReport const& r);

//! E det(1 + z lambda)^{-1/2} S1 (order 1) or ... (S1^2 + 2 S2) (order 2),
//! over the Extreme-regime spectrum of `spec`.
Estimate corollary1_statistic(EnsembleSpec const& spec, Complex z, long replicas,
                              std::uint64_t seed, int order = 1, int threads = 0);

//! (2/pi) z^{-1/2} exp(-(2/pi) sqrt z).
Complex corollary1_reference(Complex z);
//! (4 / (pi^2 z) + 2 / (pi z^{3/2})) exp(-(2/pi) sqrt z).
Complex corollary1_second_reference(Complex z);

enum class TailStatistic {
    //! Largest rescaled eigenvalue.
    Lambda1,
    //! max |a_jk| / (n m) (b in place of n for the sparse kind).
    MaxEntry,
    //! Rightmost point of the limiting Poisson process.
    PoissonMax,
};

std::string to_string(TailStatistic s);
TailStatistic tail_statistic_from_string(std::string const& s);

struct TailStudyConfig {
    //! Strictly ascending, positive.
    std::vector<double> x_grid;
    long replicas{1000};
    TailStatistic statistic{TailStatistic::Lambda1};
    //! Threshold for the count of large eigenvalues (Lambda1 only).
    double delta{1.0};
    //! Poisson cutoff; 0 selects half the smallest grid point.
    double cutoff{0.0};
    std::uint64_t seed{0};
    int threads{0};

    void validate() const;
};

struct TailRow {
    double x;
    double empirical_tail;
    double std_error;
    double reference;
    //! empirical_tail * sqrt(x).
    double empirical_C;
};

struct TailStudyResult {
    std::vector<TailRow> rows;
    double sup_C{0.0};
    //! Mean and standard error of #{i : lambda_i >= delta}; Lambda1 only.
    std::optional<double> mean_count_above_delta;
    std::optional<double> count_std_error;
    //! The statistic for every replica, in replica order.
    std::vector<double> values;
};

TailStudyResult tail_study(TailStudyConfig const& config, EnsembleSpec const& spec);

//! Writes x,empirical_tail,stderr,reference,empirical_C.
void write_tail_csv(std::ostream& os, TailStudyResult const& r);

struct KsResult {
    double statistic;
    double p_value;
};

//! Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace htrmt
