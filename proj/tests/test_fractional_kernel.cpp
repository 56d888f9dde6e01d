#include "doctest.h"
#include "hfss/error.hpp"
#include "hfss/fractional_kernel.hpp"
#include "hfss/meyer_wavelet.hpp"
#include "hfss/rng.hpp"

#include <cmath>
#include <vector>

using namespace hfss;

TEST_CASE("psi^v direct quadrature") {
    // Frozen from a 30-digit independent quadrature of the cosine form.
    CHECK(psi_v_direct(0.5, 1.5, 0.0, 400).real() == doctest::Approx(-0.2630191679034410113).epsilon(1e-11));
    CHECK(psi_v_direct(0.5, 1.5, 3.0, 400).real() == doctest::Approx(0.02426233980714142224).epsilon(1e-11));
    CHECK(psi_v_direct(0.5, 1.5, -7.25, 400).real() == doctest::Approx(-0.002726512168109124401).epsilon(1e-10));
    CHECK(psi_v_direct(0.7, 1.0, 2.5, 400).real() == doctest::Approx(-0.01911227009684352168).epsilon(1e-11));
    CHECK(psi_v_direct(0.3, 2.0, -1.0, 400).real() == doctest::Approx(-0.4814054215560196341).epsilon(1e-11));
    CHECK(std::abs(psi_v_direct(0.5, 1.5, 40.3, 400).real() - 8.432264328682649610e-8) < 1e-13);

    CHECK(std::abs(psi_v_direct(0.5, 1.5, 3.0, 200) - psi_v_direct(0.5, 1.5, 3.0, 400)) < 1e-10);
    CHECK(std::abs(psi_v_direct(0.5, 1.5, 3.0, 400).imag()) < 1e-12);
    CHECK_THROWS_AS(psi_v_direct(1.0, 1.5, 0.0, 400), Error);
    CHECK_THROWS_AS(psi_v_direct(0.5, 2.5, 0.0, 400), Error);
}

TEST_CASE("psi^v table: realness, refinement, interpolation, decay") {
    const double Y = table_halfwidth(6, 2.0);
    CHECK(Y == 448.0);
    const FractionalTable table(0.5, 1.5, Y);
    CHECK(table.max_imag_residue() < 1e-12);
    CHECK(std::isfinite(table.decay_constant()));

    // Node doubling at the far end of the table.
    const int order = table.quadrature_order();
    for (double y : {Y, -Y, 0.5 * Y})
        CHECK(std::abs(psi_v_direct(0.5, 1.5, y, order) - psi_v_direct(0.5, 1.5, y, 2 * order)) < 1e-10);

    // Interpolated values against direct quadrature at random points.
    CounterStream rng(2024);
    double worst = 0.0, worst_d = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double y = -Y + 2.0 * Y * rng.uniforms(i)[0];
        worst = std::max(worst, std::abs(table.value(y) - psi_v_direct(0.5, 1.5, y, order).real()));
        worst_d = std::max(worst_d, std::abs(table.derivative(y) - psi_v_derivative_direct(0.5, 1.5, y, order).real()));
    }
    CHECK(worst < 1e-8);
    CHECK(worst_d < 1e-6);

    // sup over |y| in [20, Y] of |psi^v| (2 + |y|)^4 is finite; the (2+|y|)^5
    // envelope stays bounded as well.
    double env4 = 0.0;
    for (std::size_t m = 0; m < table.values().size(); ++m) {
        const double y = table.node(m);
        if (std::abs(y) >= 20.0) env4 = std::max(env4, std::abs(table.values()[m]) * std::pow(2.0 + std::abs(y), 4));
    }
    CHECK(std::isfinite(env4));
    CHECK(env4 < 10.0);
}

TEST_CASE("w coefficients") {
    const FractionalTable table(0.5, 1.5, 200.0);
    for (int j : {-3, 0, 4})
        for (long k : {-5L, 0L, 17L}) CHECK(w_coeff(table, j, k, 0.0) == 0.0);
    const double direct = std::exp2(-2 * 0.5) * (psi_v_direct(0.5, 1.5, 4 * 0.3 - 1.0, 400).real() -
                                                  psi_v_direct(0.5, 1.5, -1.0, 400).real());
    CHECK(w_coeff(table, 2, 1, 0.3) == doctest::Approx(direct).epsilon(1e-9));
    // Outside the table: quadrature fallback, or domain-exceeded under strict policy.
    const double far = w_coeff(table, 10, 3, 0.3);
    const double far_direct = std::exp2(-10 * 0.5) * (psi_v_direct(0.5, 1.5, 1024 * 0.3 - 3.0, 1200).real() -
                                                       psi_v_direct(0.5, 1.5, -3.0, 400).real());
    CHECK(std::abs(far - far_direct) < 1e-12);
    CHECK_THROWS_AS(w_coeff(table, 10, 3, 0.3, DomainPolicy::strict), Error);
}

TEST_CASE("kernel F") {
    const HurstVector H1{0.5};
    const double t1[] = {1.0}, lam1[] = {pi};
    const cplx F = kernel_F(t1, lam1, H1, 2.0);
    CHECK(F.real() == doctest::Approx(-2.0 / pi).epsilon(1e-15));
    CHECK(std::abs(F.imag()) < 1e-15);

    const HurstVector H{0.5, 0.7};
    const double t0[] = {0.0, 0.8}, lam[] = {1.3, -2.2};
    CHECK(kernel_F(t0, lam, H, 1.5) == cplx(0.0, 0.0));
    const double t[] = {0.4, 0.8}, lz[] = {1.3, 0.0};
    CHECK(kernel_F(t, lz, H, 1.5) == cplx(0.0, 0.0));
    const double neg[] = {-1.3, 2.2};
    CHECK(kernel_F(t, neg, H, 1.5) == std::conj(kernel_F(t, lam, H, 1.5)));
}

TEST_CASE("kappa") {
    CHECK(std::abs(kappa(2.0, 0.5) - two_pi) < 1e-6);
    CHECK(kappa(2.0, 0.5) == doctest::Approx(two_pi).epsilon(1e-12));
    // Frozen from 35-digit period sums with a Hurwitz-zeta tail.
    CHECK(kappa(1.5, 0.5) == doctest::Approx(7.261419711873421469).epsilon(1e-9));
    CHECK(kappa(1.5, 0.7) == doctest::Approx(7.688001934856745620).epsilon(1e-9));
    CHECK(kappa(1.5, 0.3) == doctest::Approx(9.490890679826410690).epsilon(1e-9));
    CHECK(kappa(1.0, 0.7) == doctest::Approx(10.63536983127553322).epsilon(1e-9));
    CHECK(kappa(2.0, 0.3) == doctest::Approx(8.692009780350465990).epsilon(1e-9));
    // Not monotone in v: the pole at 0 and the oscillatory tail pull in
    // opposite directions, with a minimum between 0.3 and 0.7 at alpha = 1.5.
    const double k3 = kappa(1.5, 0.3), k5 = kappa(1.5, 0.5), k7 = kappa(1.5, 0.7);
    CHECK(k3 > k5);
    CHECK(k7 > k5);
    // Change of variables |a|^{alpha v} kappa, checked by direct panel quadrature.
    for (double a : {0.5, 2.0})
        for (auto [al, v] : {std::pair{1.5, 0.5}, std::pair{2.0, 0.5}, std::pair{1.0, 0.7}})
            CHECK(axis_integral(a, al, v) / (std::pow(a, al * v) * kappa(al, v)) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("scale sigma") {
    const HurstVector H1{0.5};
    const double one[] = {1.0}, zero[] = {0.0};
    CHECK(scale_sigma(one, one, H1, 2.0) == 0.0);
    CHECK(scale_sigma(one, zero, H1, 2.0) == doctest::Approx(std::sqrt(two_pi)).epsilon(1e-10));

    const HurstVector H{0.5, 0.7};
    const double t[] = {1.0, 1.0}, s[] = {1.0, 0.5};
    const double closed = scale_sigma(t, s, H, 1.5);
    const double quad = scale_sigma_quadrature(t, s, H, 1.5);
    CHECK(std::abs(closed - quad) / closed < 1e-4);
    CHECK(closed == doctest::Approx(std::pow(std::pow(0.5, 1.5 * 0.7) * kappa(1.5, 0.7), 1 / 1.5) *
                                   std::pow(kappa(1.5, 0.5), 1 / 1.5)));
    // A general (two-axis) increment only has the quadrature route.
    const double u[] = {0.6, 0.9};
    const double general = scale_sigma(t, u, H, 1.5);
    CHECK(general > 0.0);
    CHECK(general == scale_sigma_quadrature(t, u, H, 1.5));
    const HurstVector H3{0.5, 0.6, 0.7};
    const double a3[] = {1.0, 1.0, 1.0}, b3[] = {0.5, 0.5, 1.0};
    CHECK_THROWS_AS(scale_sigma(a3, b3, H3, 1.5), Error);
}

TEST_CASE("truncated wavelet expansion reconstructs f_v at alpha = 2") {
    // Parseval: the partial sums converge to f_v(x, .) in L^2 on a frequency window.
    const double v = 0.5, alpha = 2.0, x = 0.7;
    const FractionalTable table(v, alpha, table_halfwidth(6, 1.0));
    std::vector<double> residuals;
    double norm = 0.0;
    const int points = 240;
    for (int n = 2; n <= 6; ++n) {
        double r = 0.0;
        norm = 0.0;
        for (int i = 0; i < points; ++i) {
            const double xi = 0.5 + (30.0 - 0.5) * (i + 0.5) / points;
            for (double sgn : {1.0, -1.0}) {
                const cplx target = kernel_factor(x, sgn * xi, v, alpha);
                r += std::norm(wavelet_partial_sum(table, n, 1.0, x, sgn * xi) - target);
                norm += std::norm(target);
            }
        }
        residuals.push_back(std::sqrt(r / norm));
    }
    for (std::size_t i = 1; i < residuals.size(); ++i) CHECK(residuals[i] < residuals[i - 1]);
    CHECK(residuals.back() < 0.01);
}

TEST_CASE("coefficient decay constants") {
    // Both bounds hold with finite constants that barely move when the
    // scanned k range and negative-j depth double.
    const double pairs[3][2] = {{0.5, 1.5}, {0.7, 1.0}, {0.3, 2.0}};
    for (const auto& p : pairs) {
        const FractionalTable table(p[0], p[1], 760.0);
        const auto small = fit_decay_constants(table, 0.3, 10, -10, 200, 21);
        const auto large = fit_decay_constants(table, 0.3, 10, -20, 400, 21);
        CHECK(std::isfinite(small.c_pos));
        CHECK(std::isfinite(small.c_neg));
        CHECK(small.c_pos > 0.0);
        CHECK(large.c_pos == doctest::Approx(small.c_pos).epsilon(0.1));
        CHECK(large.c_neg == doctest::Approx(small.c_neg).epsilon(0.1));
        MESSAGE("v=" << p[0] << " alpha=" << p[1] << " c=" << small.c_pos << "/" << large.c_pos
                     << " c'=" << small.c_neg << "/" << large.c_neg << " at j=" << small.argmax_j_pos
                     << " k=" << small.argmax_k_pos);
    }
}
