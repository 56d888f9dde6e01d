// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#pragma once

#include <cstddef>
#include <functional>

namespace hfss {

// Runs body(i) for i in [0, count) on up to `threads` workers. Work items are
// claimed dynamically, so callers must make each item self-contained; results
// written by item index are then independent of the worker count.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

int default_threads();

}  // namespace hfss
