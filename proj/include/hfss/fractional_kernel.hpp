// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#pragma once

#include <span>
#include <vector>

#include "hfss/hurst.hpp"
#include "hfss/numerics.hpp"

namespace hfss {

// q(eta) = psi_hat(eta) |eta|^{-v-1/alpha}; the Fourier transform of psi^v.
cplx fractional_spectrum(double v, double alpha, double eta);

// Quadrature order per support piece that resolves e^{i y eta} for |y| <= y_max.
int psi_v_order_for(double y_max);

// psi^v(y) = int e^{i y eta} q(eta) d eta by Gauss-Legendre on the four analytic
// pieces of the support. The imaginary part is quadrature residue.
cplx psi_v_direct(double v, double alpha, double y, int order);
cplx psi_v_derivative_direct(double v, double alpha, double y, int order);

// Tabulated psi^v, (psi^v)' and (psi^v)'' on [-Y, Y]; values between nodes
// come from quintic Hermite interpolation.
class FractionalTable {
public:
    FractionalTable(double v, double alpha, double halfwidth, double step = 1.0 / 64.0);

    double v() const { return v_; }
    double alpha() const { return alpha_; }
    double halfwidth() const { return Y_; }
    double step() const { return step_; }
    int quadrature_order() const { return order_; }

    bool contains(double y) const { return y >= -Y_ && y <= Y_; }
    double value(double y) const;       // requires contains(y)
    double derivative(double y) const;  // requires contains(y)

    const std::vector<double>& values() const { return f_; }
    const std::vector<double>& derivative_values() const { return d1_; }
    const std::vector<double>& second_derivative_values() const { return d2_; }
    double node(std::size_t m) const { return -Y_ + static_cast<double>(m) * step_; }

    // max |Im| of the defining quadrature over all nodes.
    double max_imag_residue() const { return max_imag_; }
    // max |psi^v(y)| (2 + |y|)^5 over the table.
    double decay_constant() const { return decay5_; }

private:
    double v_, alpha_, Y_, step_;
    int order_;
    std::vector<double> f_, d1_, d2_;
    double max_imag_ = 0.0;
    double decay5_ = 0.0;
};

// Half-width needed so that all arguments 2^j t - k, (j,k) in D_{n,M}, |t| <= M
// fall inside the table.
double table_halfwidth(int n, double M);

FractionalTable psi_v_table(double v, double alpha, double halfwidth, double step = 1.0 / 64.0);

enum class DomainPolicy { quadrature_fallback, strict };

// w^v_{alpha,j,k}(x) = 2^{-jv} (psi^v(2^j x - k) - psi^v(-k)).
double w_coeff(const FractionalTable& table, int j, long k, double x,
               DomainPolicy policy = DomainPolicy::quadrature_fallback);

// Smallest constants in the coefficient decay bounds over a finite scan:
//   j in [0, j_max], |k| <= k_max, at x:
//     |w_{j,k}(x)| <= c_pos 2^{-jv} [(2 + |2^j x - k|)^{-4} + (2 + |k|)^{-4}]
//   j in [j_min, -1], |k| <= k_max, x on an even grid of [-1, 1]:
//     |w_{j,k}(x)| <= c_neg 2^{(1-v) j} (2 + |k|)^{-4}
struct DecayConstants {
    double c_pos = 0.0;
    double c_neg = 0.0;
    int argmax_j_pos = 0, argmax_j_neg = 0;
    long argmax_k_pos = 0, argmax_k_neg = 0;
};

DecayConstants fit_decay_constants(const FractionalTable& table, double x, int j_max, int j_min, long k_max,
                                   int x_points = 41);

// One axis of the kernel: f_v(x, lambda) = (e^{i x lambda} - 1) / |lambda|^{v + 1/alpha},
// zero at lambda = 0.
cplx kernel_factor(double x, double lambda, double v, double alpha);

// F(t, lambda) = prod_l f_{H_l}(t_l, lambda_l).
cplx kernel_F(std::span<const double> t, std::span<const double> lambda, const HurstVector& H,
              double alpha);

// Truncated wavelet expansion of f_v(x, .) at xi:
//   sum_{|j| <= n, |k| <= M 2^{n+1}} w_{j,k}(x) conj(psi_hat_{alpha,j,k}(xi)).
cplx wavelet_partial_sum(const FractionalTable& table, int n, double M, double x, double xi);

// kappa(alpha, v) = int_R |e^{i lambda} - 1|^alpha |lambda|^{-alpha v - 1} d lambda.
double kappa(double alpha, double v);

// int_R |e^{i a lambda} - 1|^alpha |lambda|^{-alpha v - 1} d lambda by direct
// panel quadrature (no use of the scaling identity).
double axis_integral(double a, double alpha, double v);

// Scale of Z(t): prod_l (|t_l|^{alpha H_l} kappa(alpha, H_l))^{1/alpha}.
double point_scale(std::span<const double> t, const HurstVector& H, double alpha);

// ||F(t, .) - F(s, .)||_{L^alpha}. Closed form for s = t, for s or t at the
// origin (point scale) and for increments along one axis; N <= 2 general
// increments fall back to scale_sigma_quadrature.
double scale_sigma(std::span<const double> t, std::span<const double> s, const HurstVector& H,
                   double alpha);

// Two-dimensional tensor-product quadrature route (N <= 2, any t, s).
double scale_sigma_quadrature(std::span<const double> t, std::span<const double> s,
                              const HurstVector& H, double alpha);

}  // namespace hfss
