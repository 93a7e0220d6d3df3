// SPDX-License-Identifier: Apache-2.0
//! \file htrmt/config.hpp
//! Experiment configuration files and report emission.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "htrmt/routes.hpp"

namespace htrmt {

//! Malformed or inconsistent configuration, or an unusable output path.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct TailOptions {
    std::vector<double> x_grid{1.0, 4.0, 16.0, 64.0};
    std::string statistic{"lambda1"};
    double delta{1.0};
    double cutoff{0.0};

    bool operator==(TailOptions const&) const = default;
};

struct WishartOptions {
    //! real | complex | saddle | steepest | mp | mp_norm | bessel
    std::string quantity{"real"};
    int n{1};
    int m{1};
    double t{1.0};
    bool scaled{false};
    double gamma{1.0};
    double sigma2{1.0};
    double x{1.0};
    double y{1.0};
    double alpha{0.0};

    bool operator==(WishartOptions const&) const = default;
};

struct Lemma1Options {
    std::vector<int> m{1, 2, 3, 4, 5, 6};
    std::vector<int> n{1, 2, 3, 4, 5, 6};
    std::vector<double> z{0.1, 1.0, 10.0};
    double tolerance{1e-9};

    bool operator==(Lemma1Options const&) const = default;
};

struct PoissonOptions {
    //! Number of leading replicas whose points are exported as CSV.
    long export_samples{0};
    std::string export_path;

    bool operator==(PoissonOptions const&) const = default;
};

struct ExperimentConfig {
    //! estimate | compare | poisson | tail | wishart | lemma1 | verify-all
    std::string command{"estimate"};
    std::string route{"cauchy_dual"};
    RouteParams params;
    //! compare: second route; without it the first route is compared with
    //! `reference`.
    std::optional<std::string> route_b;
    std::optional<RouteParams> params_b;
    std::optional<Complex> reference;
    long replicas{10000};
    std::uint64_t seed{0};
    double threshold{3.0};
    int threads{0};
    TailOptions tail;
    WishartOptions wishart;
    Lemma1Options lemma1;
    PoissonOptions poisson;
    //! verify-all: criterion ids to run (empty: all).
    std::vector<int> only;
    std::string output;
    //! json | csv
    std::string format{"json"};

    //! Throws ConfigError.
    void validate() const;

    bool operator==(ExperimentConfig const&) const = default;
};

void to_json(nlohmann::json& j, ExperimentConfig const& c);
//! Strict: unknown keys raise ConfigError naming the key and its path.
void from_json(nlohmann::json const& j, ExperimentConfig& c);

ExperimentConfig load_config(std::string const& path);
ExperimentConfig parse_config(std::string const& text);
void save_config(ExperimentConfig const& c, std::string const& path);

//! Version string baked in at build time (git describe).
std::string version_string();

//! Writes `report` to `path` (stdout when empty) as JSON, or as CSV when
//! format is "csv". CSV output starts with '#' metadata lines followed by
//! the table in report["table"] (header from report["columns"]) or, for
//! single estimates, one row of the estimate fields. Files are written to a
//! temporary sibling and renamed into place. Throws ConfigError if the path
//! cannot be written.
void emit_report(nlohmann::json const& report, std::string const& path,
                 std::string const& format);

}  // namespace htrmt
