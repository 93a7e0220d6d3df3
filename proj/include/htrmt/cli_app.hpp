// SPDX-License-Identifier: Apache-2.0
//! \file htrmt/cli_app.hpp
#pragma once

#include <iosfwd>

namespace htrmt {

//! Exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitVerificationFailed = 1,
    kExitConfigError = 2,
};

//! Entry point of `htrmt`. Status lines go to `err`; reports go to the
//! configured output path or to stdout.
int run_cli(int argc, char const* const* argv, std::ostream& err);

}  // namespace htrmt
