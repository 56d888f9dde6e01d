// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#include "hfss/fractional_kernel.hpp"

#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <functional>

#include "hfss/error.hpp"
#include "hfss/meyer_wavelet.hpp"

namespace hfss {

namespace {

void check_v_alpha(double v, double alpha) {
    check_hurst_component(v);
    check_alpha(alpha);
}

// Nodes and weights (times q(eta)) of the four support pieces.
struct SpectrumRule {
    std::vector<double> eta;
    std::vector<cplx> c;
};

SpectrumRule spectrum_rule(double v, double alpha, int order) {
    const auto& m = meyer();
    const double a = m.ring_lower, b = 2.0 * m.ring_lower, e = m.ring_upper;
    const double pieces[4][2] = {{-e, -b}, {-b, -a}, {a, b}, {b, e}};
    const auto& base = gauss_legendre_cached(order);
    SpectrumRule rule;
    rule.eta.reserve(4 * order);
    rule.c.reserve(4 * order);
    for (const auto& piece : pieces) {
        const double mid = 0.5 * (piece[0] + piece[1]), half = 0.5 * (piece[1] - piece[0]);
        for (int i = 0; i < order; ++i) {
            const double eta = mid + half * base.nodes[i];
            rule.eta.push_back(eta);
            rule.c.push_back(half * base.weights[i] * fractional_spectrum(v, alpha, eta));
        }
    }
    return rule;
}

// e^{i theta} - 1 without cancellation for small theta.
inline cplx expm1i(double theta) {
    const double s = std::sin(0.5 * theta);
    return {-2.0 * s * s, std::sin(theta)};
}

}  // namespace

cplx fractional_spectrum(double v, double alpha, double eta) {
    const cplx p = psi_hat(eta);
    if (p == cplx(0.0, 0.0)) return p;
    return p * std::pow(std::abs(eta), -v - 1.0 / alpha);
}

int psi_v_order_for(double y_max) {
    // The longer piece has half-length 2pi/3; e^{i y eta} then needs roughly
    // |y| * 2pi/3 / 2 Gauss points, plus room for the smooth envelope.
    const double omega = std::abs(y_max) * (two_pi / 3.0);
    return std::max(400, static_cast<int>(std::ceil(0.6 * omega)) + 100);
}

cplx psi_v_direct(double v, double alpha, double y, int order) {
    check_v_alpha(v, alpha);
    const SpectrumRule rule = spectrum_rule(v, alpha, order);
    CompensatedComplexSum acc;
    for (std::size_t q = 0; q < rule.eta.size(); ++q) acc.add(rule.c[q] * std::polar(1.0, y * rule.eta[q]));
    return acc.value();
}

cplx psi_v_derivative_direct(double v, double alpha, double y, int order) {
    check_v_alpha(v, alpha);
    const SpectrumRule rule = spectrum_rule(v, alpha, order);
    CompensatedComplexSum acc;
    for (std::size_t q = 0; q < rule.eta.size(); ++q)
        acc.add(cplx(0.0, rule.eta[q]) * rule.c[q] * std::polar(1.0, y * rule.eta[q]));
    return acc.value();
}

FractionalTable::FractionalTable(double v, double alpha, double halfwidth, double step)
    : v_(v), alpha_(alpha), step_(step) {
    check_v_alpha(v, alpha);
    require(halfwidth > 0.0, "table half-width must be positive");
    require(step > 0.0 && step <= 0.25, "table step must lie in (0, 1/4]");
    const auto half_steps = static_cast<std::size_t>(std::ceil(halfwidth / step));
    Y_ = static_cast<double>(half_steps) * step;
    const std::size_t count = 2 * half_steps + 1;
    order_ = psi_v_order_for(Y_);
    const SpectrumRule rule = spectrum_rule(v, alpha, order_);

    f_.assign(count, 0.0);
    d1_.assign(count, 0.0);
    d2_.assign(count, 0.0);
    std::vector<double> imag(count, 0.0);
    constexpr std::size_t reseed = 64;
    for (std::size_t q = 0; q < rule.eta.size(); ++q) {
        const double eta = rule.eta[q];
        const cplx c = rule.c[q];
        const cplx rot = std::polar(1.0, step * eta);
        cplx z;
        for (std::size_t m = 0; m < count; ++m) {
            if (m % reseed == 0)
                z = c * std::polar(1.0, node(m) * eta);
            else
                z *= rot;
            f_[m] += z.real();
            imag[m] += z.imag();
            d1_[m] -= eta * z.imag();
            d2_[m] -= eta * eta * z.real();
        }
    }
    for (std::size_t m = 0; m < count; ++m) {
        max_imag_ = std::max(max_imag_, std::abs(imag[m]));
        decay5_ = std::max(decay5_, std::abs(f_[m]) * std::pow(2.0 + std::abs(node(m)), 5));
    }
}

namespace {

struct HermiteBasis {
    double h0, h1, h2, h3, h4, h5;
};

// Quintic Hermite basis on [0, 1]: value/slope/curvature at both ends.
inline HermiteBasis quintic(double u) {
    const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
    return {1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5, u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5,
            0.5 * (u2 - 3.0 * u3 + 3.0 * u4 - u5),  0.5 * (u3 - 2.0 * u4 + u5),
            -4.0 * u3 + 7.0 * u4 - 3.0 * u5,        10.0 * u3 - 15.0 * u4 + 6.0 * u5};
}

inline HermiteBasis quintic_derivative(double u) {
    const double u2 = u * u, u3 = u2 * u, u4 = u3 * u;
    return {-30.0 * u2 + 60.0 * u3 - 30.0 * u4, 1.0 - 18.0 * u2 + 32.0 * u3 - 15.0 * u4,
            0.5 * (2.0 * u - 9.0 * u2 + 12.0 * u3 - 5.0 * u4), 0.5 * (3.0 * u2 - 8.0 * u3 + 5.0 * u4),
            -12.0 * u2 + 28.0 * u3 - 15.0 * u4,  30.0 * u2 - 60.0 * u3 + 30.0 * u4};
}

}  // namespace

double FractionalTable::value(double y) const {
    const double pos = (y + Y_) / step_;
    std::size_t m = static_cast<std::size_t>(pos);
    if (m >= f_.size() - 1) m = f_.size() - 2;
    const double u = pos - static_cast<double>(m);
    const auto b = quintic(u);
    const double h = step_;
    return f_[m] * b.h0 + h * d1_[m] * b.h1 + h * h * d2_[m] * b.h2 + h * h * d2_[m + 1] * b.h3 +
           h * d1_[m + 1] * b.h4 + f_[m + 1] * b.h5;
}

double FractionalTable::derivative(double y) const {
    const double pos = (y + Y_) / step_;
    std::size_t m = static_cast<std::size_t>(pos);
    if (m >= f_.size() - 1) m = f_.size() - 2;
    const double u = pos - static_cast<double>(m);
    const auto b = quintic_derivative(u);
    const double h = step_;
    return (f_[m] * b.h0 + f_[m + 1] * b.h5) / h + d1_[m] * b.h1 + d1_[m + 1] * b.h4 +
           h * (d2_[m] * b.h2 + d2_[m + 1] * b.h3);
}

double table_halfwidth(int n, double M) { return 3.0 * M * std::ldexp(1.0, n) + 64.0; }

FractionalTable psi_v_table(double v, double alpha, double halfwidth, double step) {
    return FractionalTable(v, alpha, halfwidth, step);
}

namespace {

double psi_v_at(const FractionalTable& table, double y, DomainPolicy policy) {
    if (table.contains(y)) return table.value(y);
    if (policy == DomainPolicy::strict)
        fail(ErrorKind::domain_exceeded,
             "psi^v argument " + std::to_string(y) + " outside table [-Y, Y], Y = " +
                 std::to_string(table.halfwidth()));
    return psi_v_direct(table.v(), table.alpha(), y, psi_v_order_for(y)).real();
}

}  // namespace

double w_coeff(const FractionalTable& table, int j, long k, double x, DomainPolicy policy) {
    const double kk = static_cast<double>(k);
    const double a = psi_v_at(table, std::ldexp(x, j) - kk, policy);
    const double b = psi_v_at(table, -kk, policy);
    return std::exp2(-j * table.v()) * (a - b);
}

DecayConstants fit_decay_constants(const FractionalTable& table, double x, int j_max, int j_min, long k_max,
                                   int x_points) {
    require(j_max >= 0 && j_min <= -1 && k_max >= 0 && x_points >= 2, "decay scan: invalid ranges");
    const double v = table.v();
    DecayConstants r;
    for (int j = 0; j <= j_max; ++j)
        for (long k = -k_max; k <= k_max; ++k) {
            const double y = std::ldexp(x, j) - static_cast<double>(k);
            const double bound = std::exp2(-j * v) * (std::pow(2.0 + std::abs(y), -4.0) +
                                                      std::pow(2.0 + std::abs(static_cast<double>(k)), -4.0));
            const double ratio = std::abs(w_coeff(table, j, k, x)) / bound;
            if (ratio > r.c_pos) {
                r.c_pos = ratio;
                r.argmax_j_pos = j;
                r.argmax_k_pos = k;
            }
        }
    for (int j = j_min; j <= -1; ++j)
        for (long k = -k_max; k <= k_max; ++k) {
            const double bound = std::exp2((1.0 - v) * j) * std::pow(2.0 + std::abs(static_cast<double>(k)), -4.0);
            for (int q = 0; q < x_points; ++q) {
                const double xq = -1.0 + 2.0 * q / (x_points - 1);
                const double ratio = std::abs(w_coeff(table, j, k, xq)) / bound;
                if (ratio > r.c_neg) {
                    r.c_neg = ratio;
                    r.argmax_j_neg = j;
                    r.argmax_k_neg = k;
                }
            }
        }
    return r;
}

cplx kernel_factor(double x, double lambda, double v, double alpha) {
    if (lambda == 0.0) return {0.0, 0.0};
    return expm1i(x * lambda) * std::pow(std::abs(lambda), -v - 1.0 / alpha);
}

cplx kernel_F(std::span<const double> t, std::span<const double> lambda, const HurstVector& H,
              double alpha) {
    require(t.size() == H.size() && lambda.size() == H.size(), "kernel_F: dimension mismatch");
    cplx acc(1.0, 0.0);
    for (std::size_t l = 0; l < t.size(); ++l) acc *= kernel_factor(t[l], lambda[l], H[l], alpha);
    return acc;
}

cplx wavelet_partial_sum(const FractionalTable& table, int n, double M, double x, double xi) {
    const auto kmax = static_cast<long>(std::floor(M * std::ldexp(1.0, n + 1)));
    CompensatedComplexSum acc;
    for (int j = -n; j <= n; ++j) {
        const double theta = std::ldexp(xi, -j);
        const cplx base = psi_hat(theta);
        if (base == cplx(0.0, 0.0)) continue;
        const cplx scale = std::exp2(-j / table.alpha()) * std::conj(base);
        for (long k = -kmax; k <= kmax; ++k) {
            const double w = w_coeff(table, j, k, x);
            acc.add(w * scale * std::polar(1.0, static_cast<double>(k) * theta));
        }
    }
    return acc.value();
}

double kappa(double alpha, double v) {
    check_v_alpha(v, alpha);
    const double s = alpha * v + 1.0;
    boost::math::quadrature::tanh_sinh<double> ts;
    constexpr double tol = 1e-14;
    auto p = [alpha](double x) { return std::pow(2.0 * std::abs(std::sin(0.5 * x)), alpha); };

    // First period, written to keep the integrable singularity at 0 finite.
    double head = ts.integrate(
        [&](double x) {
            const double r = 2.0 * std::sin(0.5 * x) / x;
            return std::pow(r, alpha) * std::pow(x, alpha - s);
        },
        0.0, two_pi, tol);
    constexpr int m0 = 64;
    for (int m = 1; m < m0; ++m)
        head += ts.integrate([&](double x) { return p(x) * std::pow(x, -s); }, two_pi * m,
                             two_pi * (m + 1), tol);

    // sum_{m >= m0} int_0^{2pi} p(x) (2 pi m + x)^{-s} dx, expanded in x / (2 pi m):
    //   sum_r binom(-s, r) (2pi)^{-s-r} mu_r zeta(s + r, m0).
    double tail = 0.0, binom = 1.0;
    for (int r = 0; r < 40; ++r) {
        if (r > 0) binom *= (-s - (r - 1)) / r;
        const double mu = ts.integrate([&](double x) { return p(x) * std::pow(x, r); }, 0.0, two_pi, tol);
        const double term = binom * std::pow(two_pi, -s - r) * mu * gsl_sf_hzeta(s + r, m0);
        tail += term;
        if (std::abs(term) < 1e-18 * std::abs(tail)) break;
    }
    return 2.0 * (head + tail);
}

namespace {

// Fixed rule on [0, L] for integrands that behave like lambda^{e0 - 1} at 0
// (e0 > 0) and like P(lambda) lambda^{-s} with bounded, almost periodic P at
// infinity. The last half of [0, L] serves as the averaging window for the
// tail estimate  int_L^inf P lambda^{-s} ~ mean(P) L^{1-s} / (s - 1).
struct HalfLineRule {
    std::vector<double> nodes, weights, tail_weights;
    std::size_t window_begin = 0;
    double length = 0.0, window_length = 0.0, tail_exponent = 0.0;

    HalfLineRule(double panel, int panels, double e0, double s, int gl_order = 12) {
        tail_exponent = s;
        // First panel: lambda = panel * u^p makes the integrand ~ u^{p e0 - 1}.
        const int p = std::max(2, static_cast<int>(std::ceil(3.0 / e0)));
        const auto& g48 = gauss_legendre_cached(48);
        for (std::size_t i = 0; i < g48.nodes.size(); ++i) {
            const double u = 0.5 * (g48.nodes[i] + 1.0);
            nodes.push_back(panel * std::pow(u, p));
            weights.push_back(0.5 * g48.weights[i] * panel * p * std::pow(u, p - 1));
        }
        const auto& g = gauss_legendre_cached(gl_order);
        for (int k = 1; k < panels; ++k) {
            if (k == panels / 2) window_begin = nodes.size();
            const double a = panel * k;
            for (int i = 0; i < gl_order; ++i) {
                nodes.push_back(a + 0.5 * panel * (g.nodes[i] + 1.0));
                weights.push_back(0.5 * panel * g.weights[i]);
            }
        }
        length = panel * panels;
        window_length = length - panel * (panels / 2);
        const double tail_factor = std::pow(length, 1.0 - s) / ((s - 1.0) * window_length);
        tail_weights.assign(nodes.size(), 0.0);
        for (std::size_t i = window_begin; i < nodes.size(); ++i)
            tail_weights[i] = weights[i] * std::pow(nodes[i], s) * tail_factor;
    }

    // values[i] = integrand at nodes[i].
    double integrate(const std::vector<double>& values) const {
        CompensatedSum acc;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc.add((weights[i] + tail_weights[i]) * values[i]);
        return acc.value();
    }
};

constexpr int kPanels1d = 800;
constexpr int kPanels2d = 400;

}  // namespace

double axis_integral(double a, double alpha, double v) {
    check_v_alpha(v, alpha);
    if (a == 0.0) return 0.0;
    const double s = alpha * v + 1.0;
    const HalfLineRule rule(pi / std::abs(a), kPanels1d, alpha * (1.0 - v), s);
    std::vector<double> values(rule.nodes.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = std::pow(std::abs(expm1i(a * rule.nodes[i])), alpha) * std::pow(rule.nodes[i], -s);
    return 2.0 * rule.integrate(values);
}

double point_scale(std::span<const double> t, const HurstVector& H, double alpha) {
    require(t.size() == H.size(), "point_scale: dimension mismatch");
    check_alpha(alpha);
    double acc = 1.0;
    for (std::size_t l = 0; l < t.size(); ++l)
        acc *= std::pow(std::pow(std::abs(t[l]), alpha * H[l]) * kappa(alpha, H[l]), 1.0 / alpha);
    return acc;
}

double scale_sigma(std::span<const double> t, std::span<const double> s, const HurstVector& H,
                   double alpha) {
    require(t.size() == H.size() && s.size() == H.size(), "scale_sigma: dimension mismatch");
    check_alpha(alpha);
    const std::size_t N = t.size();
    std::size_t differing = 0, axis = 0;
    for (std::size_t l = 0; l < N; ++l)
        if (t[l] != s[l]) ++differing, axis = l;
    if (differing == 0) return 0.0;
    auto is_origin = [](std::span<const double> p) {
        return std::all_of(p.begin(), p.end(), [](double x) { return x == 0.0; });
    };
    if (is_origin(s)) return point_scale(t, H, alpha);
    if (is_origin(t)) return point_scale(s, H, alpha);
    if (differing == 1) {
        double acc = std::pow(std::pow(std::abs(t[axis] - s[axis]), alpha * H[axis]) *
                                  kappa(alpha, H[axis]),
                              1.0 / alpha);
        for (std::size_t l = 0; l < N; ++l)
            if (l != axis)
                acc *= std::pow(std::pow(std::abs(t[l]), alpha * H[l]) * kappa(alpha, H[l]), 1.0 / alpha);
        return acc;
    }
    if (N > 2) fail(ErrorKind::unsupported_geometry, "general increments need N <= 2");
    return scale_sigma_quadrature(t, s, H, alpha);
}

double scale_sigma_quadrature(std::span<const double> t, std::span<const double> s,
                              const HurstVector& H, double alpha) {
    require(t.size() == H.size() && s.size() == H.size(), "scale_sigma_quadrature: dimension mismatch");
    check_alpha(alpha);
    const std::size_t N = t.size();
    if (N > 2) fail(ErrorKind::unsupported_geometry, "quadrature route supports N <= 2");

    auto axis_rule = [&](std::size_t l) {
        const double omega = std::max(std::abs(t[l]), std::abs(s[l]));
        return HalfLineRule(pi / omega, N == 1 ? kPanels1d : kPanels2d, alpha * (1.0 - H[l]), alpha * H[l] + 1.0);
    };
    for (std::size_t l = 0; l < N; ++l)
        if (t[l] == 0.0 && s[l] == 0.0) return 0.0;

    if (N == 1) {
        const HalfLineRule rule = axis_rule(0);
        std::vector<double> values(rule.nodes.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double lam = rule.nodes[i];
            const cplx d = kernel_factor(t[0], lam, H[0], alpha) - kernel_factor(s[0], lam, H[0], alpha);
            values[i] = std::pow(std::norm(d), 0.5 * alpha);
        }
        return std::pow(2.0 * rule.integrate(values), 1.0 / alpha);
    }

    const HalfLineRule outer = axis_rule(0), inner = axis_rule(1);
    std::vector<cplx> ft(inner.nodes.size()), fs(inner.nodes.size());
    for (std::size_t q = 0; q < inner.nodes.size(); ++q) {
        ft[q] = kernel_factor(t[1], inner.nodes[q], H[1], alpha);
        fs[q] = kernel_factor(s[1], inner.nodes[q], H[1], alpha);
    }
    std::vector<double> outer_values(outer.nodes.size()), inner_values(inner.nodes.size());
    for (std::size_t p = 0; p < outer.nodes.size(); ++p) {
        const cplx A = kernel_factor(t[0], outer.nodes[p], H[0], alpha);
        const cplx B = kernel_factor(s[0], outer.nodes[p], H[0], alpha);
        // lambda_2 > 0 and lambda_2 < 0 (conjugate factors); lambda_1 < 0 by symmetry.
        for (std::size_t q = 0; q < inner.nodes.size(); ++q)
            inner_values[q] = std::pow(std::norm(A * ft[q] - B * fs[q]), 0.5 * alpha) +
                              std::pow(std::norm(A * std::conj(ft[q]) - B * std::conj(fs[q])), 0.5 * alpha);
        outer_values[p] = inner.integrate(inner_values);
    }
    return std::pow(2.0 * outer.integrate(outer_values), 1.0 / alpha);
}

}  // namespace hfss
