// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "htrmt/cli_app.hpp"

int main(int argc, char** argv)
{
    return htrmt::run_cli(argc, argv, std::cerr);
}
