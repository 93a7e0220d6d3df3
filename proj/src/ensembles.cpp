// SPDX-License-Identifier: Apache-2.0
#include "htrmt/ensembles.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace htrmt {

namespace {

struct KindName {
    EnsembleKind kind;
    char const* name;
};

constexpr KindName kKindNames[] = {
    {EnsembleKind::CauchyFull, "cauchy_full"},
    {EnsembleKind::CauchySparse, "cauchy_sparse"},
    {EnsembleKind::WishartReal, "wishart_real"},
    {EnsembleKind::WishartComplex, "wishart_complex"},
    {EnsembleKind::Rademacher, "rademacher"},
};

}  // namespace

std::string to_string(EnsembleKind kind)
{
    for (auto const& kn : kKindNames) {
        if (kn.kind == kind) return kn.name;
    }
    throw InvalidSpec("unknown ensemble kind");
}

EnsembleKind ensemble_kind_from_string(std::string const& s)
{
    for (auto const& kn : kKindNames) {
        if (s == kn.name) return kn.kind;
    }
    throw InvalidSpec("unknown ensemble kind '" + s + "'");
}

void EnsembleSpec::validate() const
{
    if (n < 1 || m < 1) {
        throw InvalidSpec("ensemble dimensions must be positive");
    }
    if (m < n) {
        throw InvalidSpec("ensemble requires m >= n (got m=" + std::to_string(m)
                          + ", n=" + std::to_string(n) + ")");
    }
    if (kind == EnsembleKind::CauchySparse) {
        if (!b) {
            throw InvalidSpec("cauchy_sparse requires b");
        }
        if (*b < 1 || *b > n) {
            throw InvalidSpec("b must satisfy 1 <= b <= n (got b="
                              + std::to_string(*b) + ")");
        }
    } else {
        if (b) {
            throw InvalidSpec("b is only valid for cauchy_sparse");
        }
        if (bernoulli_relaxed) {
            throw InvalidSpec("bernoulli_relaxed is only valid for cauchy_sparse");
        }
    }
}

void to_json(nlohmann::json& j, EnsembleSpec const& spec)
{
    j = nlohmann::json{{"kind", to_string(spec.kind)},
                       {"m", spec.m},
                       {"n", spec.n},
                       {"bernoulli_relaxed", spec.bernoulli_relaxed},
                       {"seed", spec.seed}};
    if (spec.b) {
        j["b"] = *spec.b;
    }
}

void from_json(nlohmann::json const& j, EnsembleSpec& spec)
{
    if (!j.is_object()) {
        throw InvalidSpec("ensemble spec must be a JSON object");
    }
    for (auto const& [key, value] : j.items()) {
        if (key != "kind" && key != "m" && key != "n" && key != "b"
            && key != "bernoulli_relaxed" && key != "seed") {
            throw InvalidSpec("unknown ensemble key '" + key + "'");
        }
    }
    EnsembleSpec out;
    try {
        out.kind = ensemble_kind_from_string(j.at("kind").get<std::string>());
        out.m = j.at("m").get<int>();
        out.n = j.at("n").get<int>();
        if (j.contains("b") && !j.at("b").is_null()) {
            out.b = j.at("b").get<int>();
        }
        out.bernoulli_relaxed = j.value("bernoulli_relaxed", false);
        out.seed = j.value("seed", std::uint64_t{0});
    } catch (nlohmann::json::exception const& e) {
        throw InvalidSpec(std::string("ensemble spec: ") + e.what());
    }
    out.validate();
    spec = out;
}

double cauchy_quantile(double u)
{
    double const v = u - 0.5;
    // tan(pi/4) rounds to 1 - 2^-53; the quartiles are exact by symmetry.
    if (std::abs(v) == 0.25) return v > 0.0 ? 1.0 : -1.0;
    return std::tan(std::numbers::pi * v);
}

double sample_cauchy(RngStream& stream)
{
    return cauchy_quantile(stream.uniform_open());
}

Mask sample_sparse_mask(int m, int n, int b, bool bernoulli_relaxed,
                        RngStream& stream)
{
    if (b < 1 || b > n) {
        throw InvalidSpec("sparse mask requires 1 <= b <= n");
    }
    if (b > m) {
        throw InvalidSpec("sparse mask requires b <= m");
    }
    Mask mask = Mask::Constant(m, n, false);
    if (bernoulli_relaxed) {
        double const p = static_cast<double>(b) / n;
        for (int k = 0; k < n; ++k) {
            for (int j = 0; j < m; ++j) {
                mask(j, k) = stream.bernoulli(p);
            }
        }
        return mask;
    }
    std::vector<int> rows(m);
    for (int k = 0; k < n; ++k) {
        std::iota(rows.begin(), rows.end(), 0);
        // Partial Fisher-Yates: the first b slots are a uniform b-subset.
        for (int i = 0; i < b; ++i) {
            auto const j = i + static_cast<int>(stream.below(m - i));
            std::swap(rows[i], rows[j]);
            mask(rows[i], k) = true;
        }
    }
    return mask;
}

Mask ensemble_mask(EnsembleSpec const& spec)
{
    spec.validate();
    if (spec.kind != EnsembleKind::CauchySparse) {
        throw InvalidSpec("ensemble_mask: only cauchy_sparse carries a mask");
    }
    RngStream stream(spec.seed, 0, StreamPurpose::Mask);
    return sample_sparse_mask(spec.m, spec.n, *spec.b, spec.bernoulli_relaxed,
                              stream);
}

void fill_real_entries(EnsembleSpec const& spec, Mask const* mask,
                       RngStream& stream, Eigen::MatrixXd& out)
{
    out.resize(spec.m, spec.n);
    switch (spec.kind) {
    case EnsembleKind::CauchyFull:
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            out.data()[i] = sample_cauchy(stream);
        }
        return;
    case EnsembleKind::CauchySparse:
        if (mask == nullptr) {
            throw InvalidSpec("cauchy_sparse draw needs its mask");
        }
        // Entries are drawn for every cell so the stream position does not
        // depend on the mask.
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            double const a = sample_cauchy(stream);
            out.data()[i] = mask->data()[i] ? a : 0.0;
        }
        return;
    case EnsembleKind::WishartReal:
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            out.data()[i] = stream.normal();
        }
        return;
    case EnsembleKind::Rademacher:
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            out.data()[i] = (stream.next_u64() >> 63) ? 1.0 : -1.0;
        }
        return;
    case EnsembleKind::WishartComplex:
        break;
    }
    throw InvalidSpec("fill_real_entries: ensemble is complex");
}

MatrixSample sample_matrix(EnsembleSpec const& spec, RngStream& stream)
{
    spec.validate();
    MatrixSample sample{Eigen::MatrixXd(), std::nullopt, spec};
    if (spec.kind == EnsembleKind::WishartComplex) {
        Eigen::MatrixXcd a(spec.m, spec.n);
        double const s = std::sqrt(0.5);
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            double const re = stream.normal();
            double const im = stream.normal();
            a.data()[i] = {s * re, s * im};
        }
        sample.entries = std::move(a);
        return sample;
    }
    Eigen::MatrixXd a;
    if (spec.kind == EnsembleKind::CauchySparse) {
        sample.mask = ensemble_mask(spec);
        fill_real_entries(spec, &*sample.mask, stream, a);
    } else {
        fill_real_entries(spec, nullptr, stream, a);
    }
    sample.entries = std::move(a);
    return sample;
}

}  // namespace htrmt
