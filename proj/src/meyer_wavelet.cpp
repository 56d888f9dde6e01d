// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#include "hfss/meyer_wavelet.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "hfss/error.hpp"

namespace hfss {

double MeyerProfile::taper(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double acc = 0.0;
    for (int p = 7; p >= 0; --p) acc = acc * x + taper_polynomial[p];
    return acc;
}

double MeyerProfile::profile(double xi) const {
    const double a = std::abs(xi);
    if (a <= ring_lower || a >= ring_upper) return 0.0;
    const double mid = 2.0 * ring_lower;
    // Rounding can push the cosine branch a hair below zero near the outer edge.
    if (a <= mid) return std::max(0.0, std::sin(0.5 * pi * taper(a / ring_lower - 1.0)));
    return std::max(0.0, std::cos(0.5 * pi * taper(a / mid - 1.0)));
}

cplx MeyerProfile::psi_hat(double xi) const {
    const double b = profile(xi);
    if (b == 0.0) return {0.0, 0.0};
    return std::polar(inv_sqrt_two_pi * b, 0.5 * xi);
}

const MeyerProfile& meyer() {
    static const MeyerProfile profile;
    return profile;
}

cplx psi_hat(double xi) { return meyer().psi_hat(xi); }

cplx psi_hat_ajk(double alpha, int j, long k, double xi) {
    check_alpha(alpha);
    const double x = std::ldexp(xi, -j);
    const cplx base = psi_hat(x);
    if (base == cplx(0.0, 0.0)) return base;
    return std::exp2(-j / alpha) * std::polar(1.0, -static_cast<double>(k) * x) * base;
}

namespace {

// Integrate g(|xi|) over the positive half of the support, piece by piece.
template <class F>
double over_support_tanh_sinh(F&& g) {
    boost::math::quadrature::tanh_sinh<double> ts;
    const auto& m = meyer();
    const double a = m.ring_lower, b = 2.0 * m.ring_lower, c = m.ring_upper;
    return ts.integrate(g, a, b, 1e-15) + ts.integrate(g, b, c, 1e-15);
}

}  // namespace

double alpha_norm_psi_hat(double alpha) {
    check_alpha(alpha);
    const auto& m = meyer();
    const double integral = 2.0 * over_support_tanh_sinh([&](double xi) {
        return std::pow(inv_sqrt_two_pi * m.profile(xi), alpha);
    });
    return std::pow(integral, 1.0 / alpha);
}

double alpha_norm_psi_hat_gl(double alpha, int order) {
    check_alpha(alpha);
    const auto& m = meyer();
    const double edges[3] = {m.ring_lower, 2.0 * m.ring_lower, m.ring_upper};
    CompensatedSum acc;
    for (int p = 0; p < 2; ++p) {
        const auto rule = gauss_legendre(order, edges[p], edges[p + 1]);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            acc.add(rule.weights[i] * std::pow(inv_sqrt_two_pi * m.profile(rule.nodes[i]), alpha));
    }
    return std::pow(2.0 * acc.value(), 1.0 / alpha);
}

double psi_time(double x, int order) {
    // psi(x) = (2 pi)^{-1/2} int e^{i x xi} psi_hat(xi) d xi
    //        = (1/pi) int_{xi > 0} cos((x + 1/2) xi) b(xi) d xi
    const auto& m = meyer();
    const double edges[3] = {m.ring_lower, 2.0 * m.ring_lower, m.ring_upper};
    CompensatedSum acc;
    for (int p = 0; p < 2; ++p) {
        const auto rule = gauss_legendre(order, edges[p], edges[p + 1]);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double xi = rule.nodes[i];
            acc.add(rule.weights[i] * std::cos((x + 0.5) * xi) * m.profile(xi));
        }
    }
    return acc.value() / pi;
}

}  // namespace hfss
