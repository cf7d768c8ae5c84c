// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return exal::cli::run_command(args, std::cout, std::cerr);
}
