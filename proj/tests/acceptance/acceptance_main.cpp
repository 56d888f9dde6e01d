// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fails.
#include <iostream>
#include <string>

#include "hfss/acceptance.hpp"
#include "hfss/parallel.hpp"

int main(int argc, char** argv) {
    hfss::AcceptanceConfig cfg;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--quick") {
            cfg.quick = true;
        } else if (a == "--threads" && i + 1 < argc) {
            cfg.threads = std::stoi(argv[++i]);
        } else if (a == "--only" && i + 1 < argc) {
            cfg.only.push_back(std::stoi(argv[++i]));
        } else if (a == "--scratch" && i + 1 < argc) {
            cfg.scratch_dir = argv[++i];
        } else {
            std::cerr << "usage: acceptance [--quick] [--threads T] [--only K]... [--scratch DIR]\n";
            return 2;
        }
    }
    int failed = 0;
    hfss::run_acceptance(cfg, [&](const hfss::CriterionResult& r) {
        std::cout << hfss::format_result_line(r) << "  [" << static_cast<int>(r.seconds + 0.5) << " s]" << std::endl;
        failed += !r.pass;
    });
    return failed ? 1 : 0;
}
