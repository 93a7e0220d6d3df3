// SPDX-License-Identifier: Apache-2.0
//! \file htrmt/ensembles.hpp
//! Seeded samplers for the matrix families and the sparse 0-1 mask.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "htrmt/rng.hpp"

namespace htrmt {

enum class EnsembleKind {
    CauchyFull,
    CauchySparse,
    WishartReal,
    WishartComplex,
    Rademacher,
};

std::string to_string(EnsembleKind kind);
EnsembleKind ensemble_kind_from_string(std::string const& s);

class InvalidSpec : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

//! Which family, its shape, and the seed identifying the ensemble.
//! For CauchySparse the mask is fixed per ensemble and derived from `seed`.
struct EnsembleSpec {
    EnsembleKind kind{EnsembleKind::CauchyFull};
    int m{1};
    int n{1};
    std::optional<int> b;
    bool bernoulli_relaxed{false};
    std::uint64_t seed{0};

    //! Throws InvalidSpec on m < n, b out of range, or b on a dense kind.
    void validate() const;

    bool operator==(EnsembleSpec const&) const = default;
};

void to_json(nlohmann::json& j, EnsembleSpec const& spec);
//! Strict: unknown keys and a missing `b` for cauchy_sparse are rejected.
void from_json(nlohmann::json const& j, EnsembleSpec& spec);

using Mask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct MatrixSample {
    std::variant<Eigen::MatrixXd, Eigen::MatrixXcd> entries;
    std::optional<Mask> mask;
    EnsembleSpec spec;

    bool is_complex() const { return entries.index() == 1; }
    Eigen::MatrixXd const& real() const { return std::get<0>(entries); }
    Eigen::MatrixXcd const& complex() const { return std::get<1>(entries); }
};

//! Inverse CDF of the standard Cauchy law, tan(pi (u - 1/2)).
double cauchy_quantile(double u);

double sample_cauchy(RngStream& stream);

//! Exact mode: b distinct rows per column, uniform without replacement.
//! Relaxed mode: every cell independently Bernoulli(b / n).
Mask sample_sparse_mask(int m, int n, int b, bool bernoulli_relaxed,
                        RngStream& stream);

//! The fixed mask of a CauchySparse ensemble, drawn from its own seed.
Mask ensemble_mask(EnsembleSpec const& spec);

//! One i.i.d. draw of the matrix. Entries come from `stream`; for the sparse
//! kind the mask is ensemble_mask(spec).
MatrixSample sample_matrix(EnsembleSpec const& spec, RngStream& stream);

//! Fill an existing real buffer with a draw (avoids reallocations in
//! replica loops). `mask` must be supplied for CauchySparse.
void fill_real_entries(EnsembleSpec const& spec, Mask const* mask,
                       RngStream& stream, Eigen::MatrixXd& out);

}  // namespace htrmt
