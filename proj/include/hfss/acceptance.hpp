// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#pragma once

#include <functional>
#include <string>
#include <vector>

namespace hfss {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;  // measured values against their thresholds
    double seconds = 0.0;
};

struct AcceptanceConfig {
    int threads = 1;
    // Smaller ensembles and grids for smoke runs; thresholds are unchanged, so
    // statistical checks may fail in this mode.
    bool quick = false;
    std::vector<int> only;  // empty: all criteria
    std::string scratch_dir = ".";  // where criterion 13 writes its files
};

inline constexpr int acceptance_criteria = 13;

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& config,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_result_line(const CriterionResult& r);

}  // namespace hfss
