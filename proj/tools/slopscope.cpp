// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "slopscope/report/cli.hpp"

int main(int argc, char** argv) { return slopscope::report::run_cli(argc, argv, std::cout, std::cerr); }
