// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#include <iostream>
#include <string>
#include <vector>

#include "orqa/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return orqa::cli::run(args, std::cout, std::cerr);
}
