// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#include "hfss/hurst.hpp"

#include <algorithm>
#include <numeric>

#include "hfss/error.hpp"

namespace hfss {

HurstVector::HurstVector(std::vector<double> h) : h_(std::move(h)) {
    require(!h_.empty(), "Hurst vector must be nonempty");
    for (double v : h_) check_hurst_component(v);
}

double HurstVector::min() const { return *std::min_element(h_.begin(), h_.end()); }

double HurstVector::sum() const { return std::accumulate(h_.begin(), h_.end(), 0.0); }

double HurstVector::metric_dimension() const {
    double q = 0.0;
    for (double v : h_) q += 1.0 / v;
    return q;
}

HurstVector HurstVector::sorted() const {
    auto s = h_;
    std::sort(s.begin(), s.end());
    return HurstVector(std::move(s));
}

}  // namespace hfss
