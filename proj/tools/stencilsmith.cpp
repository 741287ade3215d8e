// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "stencilsmith/cli.hpp"

int main(int argc, char** argv) {
  return stencilsmith::cli::run(argc, argv, std::cout, std::cerr);
}
