#include "doctest.h"
#include "hfss/error.hpp"
#include "hfss/meyer_wavelet.hpp"

#include <cmath>

using namespace hfss;

namespace {

double unity_sum(double xi, int jmax) {
    double acc = 0.0;
    for (int j = -jmax; j <= jmax; ++j) acc += std::norm(psi_hat(std::ldexp(xi, -j)));
    return two_pi * acc;
}

}  // namespace

TEST_CASE("psi_hat vanishes outside the ring") {
    CHECK(psi_hat(0.5) == cplx(0.0, 0.0));
    CHECK(psi_hat(9.0) == cplx(0.0, 0.0));
    CHECK(psi_hat(-9.0) == cplx(0.0, 0.0));
    CHECK(psi_hat(two_pi / 3.0) == cplx(0.0, 0.0));
    CHECK(psi_hat(4.0 * two_pi / 3.0) == cplx(0.0, 0.0));
    CHECK(psi_hat(0.0) == cplx(0.0, 0.0));
    for (int i = 0; i <= 1000; ++i) {
        const double xi = 2.0 * i / 1000.0;  // [0, 2] lies below 2pi/3
        CHECK(psi_hat(xi) == cplx(0.0, 0.0));
        CHECK(psi_hat(8.38 + xi) == cplx(0.0, 0.0));
    }
    CHECK(std::abs(psi_hat(3.0)) > 0.0);
}

TEST_CASE("taper endpoints and reflection identity") {
    const auto& m = meyer();
    CHECK(m.taper(0.0) == 0.0);
    CHECK(m.taper(1.0) == 1.0);
    double worst = 0.0;
    for (int i = 0; i <= 10000; ++i) {
        const double x = i / 10000.0;
        worst = std::max(worst, std::abs(m.taper(x) + m.taper(1.0 - x) - 1.0));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("normalized partition of unity") {
    CHECK(std::abs(unity_sum(pi, 8) - 1.0) < 1e-10);
    double worst = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        const double xi = 1.0 + 99.0 * i / 20000.0;
        worst = std::max(worst, std::abs(unity_sum(xi, 10) - 1.0));
        worst = std::max(worst, std::abs(unity_sum(-xi, 10) - 1.0));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("Hermitian symmetry is exact") {
    for (int i = 0; i <= 4000; ++i) {
        const double xi = 9.0 * i / 4000.0;
        CHECK(psi_hat(-xi) == std::conj(psi_hat(xi)));
    }
}

TEST_CASE("dilated and translated copies") {
    for (double xi : {2.5, 3.7, -4.1, 7.9}) CHECK(psi_hat_ajk(2.0, 0, 0, xi) == psi_hat(xi));
    const double xi = 13.0;
    const double mag = std::abs(psi_hat_ajk(1.5, 2, 0, xi));
    CHECK(mag > 0.0);
    for (long k : {-7L, -1L, 3L, 250L}) CHECK(std::abs(psi_hat_ajk(1.5, 2, k, xi)) == doctest::Approx(mag).epsilon(1e-14));
    for (int j : {-3, 0, 4}) {
        const double lo = std::ldexp(two_pi / 3.0, j), hi = std::ldexp(4.0 * two_pi / 3.0, j);
        for (int i = 0; i <= 500; ++i) {
            const double x = std::ldexp(12.0, j) * i / 500.0;
            const bool outside = x <= lo || x >= hi;
            if (outside) CHECK(psi_hat_ajk(1.2, j, 5, x) == cplx(0.0, 0.0));
        }
    }
    CHECK_THROWS_AS(psi_hat_ajk(2.5, 0, 0, 3.0), Error);
    CHECK_THROWS_AS(psi_hat_ajk(0.0, 0, 0, 3.0), Error);
}

TEST_CASE("alpha norms") {
    CHECK(std::abs(alpha_norm_psi_hat(2.0) - 1.0) < 1e-8);
    CHECK(std::abs(alpha_norm_psi_hat_gl(2.0, 200) - 1.0) < 1e-8);
    CHECK(std::abs(alpha_norm_psi_hat(1.0) - alpha_norm_psi_hat_gl(1.0, 400)) < 1e-8);
    CHECK(std::abs(alpha_norm_psi_hat_gl(1.5, 200) - alpha_norm_psi_hat_gl(1.5, 400)) < 1e-8);
    // Frozen from a 30-digit independent quadrature.
    CHECK(alpha_norm_psi_hat(1.0) == doctest::Approx(2.896323014951973049).epsilon(1e-10));
    CHECK(alpha_norm_psi_hat(1.5) == doctest::Approx(1.413206973221988193).epsilon(1e-10));
    CHECK(alpha_norm_psi_hat(0.8) == doctest::Approx(5.042924805093015579).epsilon(1e-10));
}

TEST_CASE("time-domain wavelet is real, unit-energy and symmetric about -1/2") {
    for (double x : {0.0, 0.3, 1.7, -2.2}) CHECK(psi_time(x) == doctest::Approx(psi_time(-1.0 - x)).epsilon(1e-12));
    // int psi^2 dx on a wide window.
    double energy = 0.0;
    const double h = 0.01;
    for (int i = -4000; i <= 4000; ++i) energy += h * std::pow(psi_time(-0.5 + i * h, 200), 2);
    CHECK(energy == doctest::Approx(1.0).epsilon(1e-4));
}
