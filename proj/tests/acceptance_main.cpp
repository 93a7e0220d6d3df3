// SPDX-License-Identifier: Apache-2.0
// Runs every acceptance criterion and prints one line per result.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "htrmt/acceptance.hpp"

int main(int argc, char** argv)
{
    htrmt::AcceptanceOptions opts;
    for (int i = 1; i < argc; ++i) opts.only.push_back(std::atoi(argv[i]));
    opts.on_result = [](htrmt::CriterionResult const& r) {
        std::printf("%s\n", htrmt::format_result(r).c_str());
        std::fflush(stdout);
    };
    auto const results = htrmt::run_acceptance(opts);
    int failed = 0;
    for (auto const& r : results) failed += r.pass ? 0 : 1;
    std::printf("%zu criteria, %d failed\n", results.size(), failed);
    return failed == 0 ? 0 : 1;
}
