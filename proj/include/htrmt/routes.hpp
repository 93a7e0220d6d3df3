// SPDX-License-Identifier: Apache-2.0
//! \file htrmt/routes.hpp
//! Named Monte Carlo routes: each turns parameters into a per-replica
//! sampler returning one (possibly complex) value.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "htrmt/dual_estimators.hpp"
#include "htrmt/ensembles.hpp"
#include "htrmt/spectra.hpp"

namespace htrmt {

struct RouteParams {
    EnsembleSpec ensemble;
    //! Real shift; z = t^2 unless `z` is given.
    double t{1.0};
    //! Several shifts for product functionals (general_r_dual and direct).
    std::vector<double> ts;
    std::optional<Complex> z;
    //! Defaults to 1 for complex ensembles and 1/2 otherwise.
    std::optional<Power> power;
    Regime regime{Regime::Extreme};
    CharFn char_fn{CharFn::Cauchy};
    std::string radial{"wishart_radial"};
    //! Poisson simulation cutoff.
    double cutoff{1e-8};

    bool operator==(RouteParams const&) const = default;

    Complex shift() const;
    Power effective_power() const;
};

void to_json(nlohmann::json& j, RouteParams const& p);
//! Strict: unknown keys are rejected.
void from_json(nlohmann::json const& j, RouteParams& p);

//! One replica. Must be safe to call concurrently with distinct streams.
using ReplicaFn = std::function<Complex(RngStream&)>;
using RouteFactory = std::function<ReplicaFn(RouteParams const&)>;

//! Draws one matrix of `spec` from the stream and returns its rescaled
//! spectrum. The sparse mask is fixed at construction from spec.seed.
using SpectrumFn = std::function<std::vector<double>(RngStream&)>;
SpectrumFn make_spectrum_draw(EnsembleSpec const& spec, Regime regime);

class UnknownRoute : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

//! Built-in ids:
//!   direct               prod_i det(1 + z_i lambda)^{-p} from the spectrum
//!   cauchy_dual          Psi-route, dense Cauchy
//!   cauchy_dual_sparse   Psi-route over the ensemble's fixed mask
//!   general_r_dual       product of r functionals via characteristic fn
//!   complex_dual         exponential-variable route with kernel G
//!   rademacher_dual      signed cosine-product route
//!   corollary1           det(...)^{-1/2} S1
//!   corollary1_second    det(...)^{-1/2} (S1^2 + 2 S2)
//!   poisson_truncated    product over the process above the cutoff times
//!                        the analytic correction below it
void register_route(std::string const& id, RouteFactory factory);
ReplicaFn make_route(std::string const& id, RouteParams const& params);
std::vector<std::string> route_ids();

}  // namespace htrmt
