// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace hfss {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

using cplx = std::complex<double>;

// Neumaier summation; fixed order in, fixed bits out.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class CompensatedComplexSum {
public:
    void add(cplx z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    cplx value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_, im_;
};

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1] (Newton iteration on the three-term recurrence).
QuadratureRule gauss_legendre(int order);

// Same rule mapped to [a, b].
QuadratureRule gauss_legendre(int order, double a, double b);

// Process-wide cache of rules on [-1, 1]; references stay valid.
const QuadratureRule& gauss_legendre_cached(int order);

}  // namespace hfss
