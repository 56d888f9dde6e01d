// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#pragma once

#include <array>

#include "hfss/numerics.hpp"

namespace hfss {

// Frequency-domain Lemarie-Meyer wavelet
//   psi_hat(xi) = (2 pi)^{-1/2} e^{i xi/2} b(xi),
// b(xi) = sin(pi/2 nu(3|xi|/(2 pi) - 1))   on [2pi/3, 4pi/3],
//         cos(pi/2 nu(3|xi|/(4 pi) - 1))   on [4pi/3, 8pi/3],
// with the degree-7 taper nu(x) = x^4 (35 - 84x + 70x^2 - 20x^3).
struct MeyerProfile {
    // Coefficients of nu in increasing powers of x (x^0 .. x^7).
    std::array<double, 8> taper_polynomial{0, 0, 0, 0, 35, -84, 70, -20};
    double ring_lower = two_pi / 3.0;
    double ring_upper = 4.0 * two_pi / 3.0;

    double taper(double x) const;   // nu, clamped to 0 / 1 outside [0, 1]
    double profile(double xi) const;  // b(xi), real and even
    cplx psi_hat(double xi) const;
};

const MeyerProfile& meyer();

inline constexpr double inv_sqrt_two_pi = 0.398942280401432677939946059934381868;

cplx psi_hat(double xi);

// 2^{-j/alpha} e^{-i k 2^{-j} xi} psi_hat(2^{-j} xi)
cplx psi_hat_ajk(double alpha, int j, long k, double xi);

// (int |psi_hat|^alpha)^{1/alpha} by tanh-sinh quadrature over the two
// analytic pieces of the support.
double alpha_norm_psi_hat(double alpha);

// Same quantity from a fixed Gauss-Legendre rule of the given order on each
// piece; used as an independent check.
double alpha_norm_psi_hat_gl(double alpha, int order);

// Time-domain wavelet by quadrature of the inverse transform.
double psi_time(double x, int order = 400);

}  // namespace hfss
