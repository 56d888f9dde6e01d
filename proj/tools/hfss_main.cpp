// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#include <iostream>

#include "hfss/cli.hpp"

int main(int argc, char** argv) {
    return hfss::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
