// SPDX-License-Identifier: Apache-2.0
//! \file htrmt/acceptance.hpp
//! The end-to-end verification suite shared by `htrmt verify-all` and the
//! acceptance test binary. Seeds are fixed; every run is reproducible.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace htrmt {

struct CriterionResult {
    int id{0};
    std::string name;
    bool pass{false};
    //! Set when a report-only check deviated; the criterion still passes.
    bool warning{false};
    std::string detail;
    double seconds{0.0};
};

struct AcceptanceOptions {
    int threads{0};
    //! Criterion ids to run; empty runs all.
    std::vector<int> only;
    //! Called after each criterion finishes.
    std::function<void(CriterionResult const&)> on_result;
};

std::vector<CriterionResult> run_acceptance(AcceptanceOptions const& options);

//! "[PASS] 3 name: detail (12.3 s)".
std::string format_result(CriterionResult const& r);

nlohmann::json to_json(CriterionResult const& r);

}  // namespace htrmt
