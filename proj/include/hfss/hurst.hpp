// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace hfss {

// Anisotropy index H = (H_1, ..., H_N), every entry in (0, 1).
class HurstVector {
public:
    HurstVector() = default;
    explicit HurstVector(std::vector<double> h);
    HurstVector(std::initializer_list<double> h) : HurstVector(std::vector<double>(h)) {}

    std::size_t size() const { return h_.size(); }
    double operator[](std::size_t l) const { return h_[l]; }
    const std::vector<double>& values() const { return h_; }

    double min() const;
    double sum() const;
    double metric_dimension() const;  // Q = sum 1/H_l
    HurstVector sorted() const;

private:
    std::vector<double> h_;
};

}  // namespace hfss
