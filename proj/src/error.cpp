// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#include "hfss/error.hpp"

#include <cmath>

namespace hfss {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_input: return "invalid-inputs";
        case ErrorKind::domain_exceeded: return "domain-exceeded";
        case ErrorKind::unsupported_geometry: return "unsupported-geometry";
        case ErrorKind::too_few_scales: return "too-few-scales";
        case ErrorKind::insufficient_ensemble: return "insufficient-ensemble";
        case ErrorKind::empty_region: return "empty-region";
        case ErrorKind::too_small_grid: return "too-small-grid";
        case ErrorKind::no_local_time: return "no-local-time";
        case ErrorKind::bounds_exceeded: return "bounds-exceeded";
        case ErrorKind::bad_magic: return "bad-magic";
        case ErrorKind::truncated_payload: return "truncated-payload";
        case ErrorKind::version_mismatch: return "version-mismatch";
        case ErrorKind::io_failure: return "io-failure";
    }
    return "unknown";
}

void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 2.0))
        fail(ErrorKind::invalid_input, "alpha must lie in (0, 2], got " + std::to_string(alpha));
}

void check_hurst_component(double v) {
    if (!(v > 0.0 && v < 1.0))
        fail(ErrorKind::invalid_input, "Hurst index must lie in (0, 1), got " + std::to_string(v));
}

}  // namespace hfss
