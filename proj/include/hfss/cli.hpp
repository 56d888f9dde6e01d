// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hfss {

// Exit statuses of the command-line front end.
inline constexpr int exit_ok = 0;
inline constexpr int exit_internal = 1;
inline constexpr int exit_validation = 2;

// Runs one subcommand; args excludes the program name. The one-line JSON
// summary goes to out, usage and diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hfss
