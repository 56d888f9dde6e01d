// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#pragma once

#include <stdexcept>
#include <string>

namespace hfss {

enum class ErrorKind {
    invalid_input,
    domain_exceeded,
    unsupported_geometry,
    too_few_scales,
    insufficient_ensemble,
    empty_region,
    too_small_grid,
    no_local_time,
    bounds_exceeded,
    bad_magic,
    truncated_payload,
    version_mismatch,
    io_failure,
};

const char* to_string(ErrorKind kind);

// Every failure the library reports on purpose. Validation problems map to
// exit status 2 in the CLI; anything else escaping is an internal error.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::invalid_input, what);
}

void check_alpha(double alpha);           // (0, 2]
void check_hurst_component(double v);     // (0, 1)

}  // namespace hfss
