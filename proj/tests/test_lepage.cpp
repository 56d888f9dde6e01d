#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "hfss/error.hpp"
#include "hfss/lepage.hpp"
#include "hfss/meyer_wavelet.hpp"

using namespace hfss;

TEST_CASE("stable multiplier") {
    // Gamma-function closed forms at 30 digits.
    CHECK(abs_cos_moment(1.5) == doctest::Approx(0.556417894449382124).epsilon(1e-13));
    CHECK(abs_cos_moment(0.5) == doctest::Approx(0.762759763501813188).epsilon(1e-13));
    CHECK(stable_multiplier(0.5) == doctest::Approx(1.094219807613238319).epsilon(1e-12));
    CHECK(stable_multiplier(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(stable_multiplier(1.5) == doctest::Approx(0.801074028098352405).epsilon(1e-12));
    CHECK(stable_multiplier(1.9) == doctest::Approx(0.414734001369803132).epsilon(1e-12));
    CHECK_THROWS_AS(stable_multiplier(2.0), Error);
}

TEST_CASE("atom sampling") {
    const auto a = sample_atoms(17, 4000, 2);
    CHECK(a.gammas.size() == 4000);
    CHECK(std::is_sorted(a.gammas.begin(), a.gammas.end()));
    CHECK(a.gammas.front() > 0.0);
    CHECK(a.gammas.back() / 4000.0 == doctest::Approx(1.0).epsilon(0.1));
    for (const auto& g : a.rotations) CHECK(std::abs(g) == doctest::Approx(1.0));

    // Kolmogorov distance of |lambda_1| from the importance law.
    std::vector<double> x;
    for (std::size_t i = 0; i < a.count; ++i) x.push_back(std::abs(a.points[2 * i]));
    std::sort(x.begin(), x.end());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double F = a.density.abs_cdf(x[i]);
        d = std::max({d, std::abs(F - double(i) / x.size()), std::abs(F - double(i + 1) / x.size())});
    }
    CHECK(d * std::sqrt(double(x.size())) < 1.63);  // 1% level

    const auto b = sample_atoms(17, 4000, 2);
    CHECK(a.points == b.points);
    const auto c = sample_atoms(18, 4000, 2);
    CHECK(a.points != c.points);
    // A longer series extends the shorter one.
    const auto e = sample_atoms(17, 5000, 2);
    CHECK(std::equal(a.gammas.begin(), a.gammas.end(), e.gammas.begin()));
}

TEST_CASE("importance density normalization") {
    const ImportanceDensity d{0.5};
    const double lam[] = {3.0};
    CHECK(std::exp(d.log_density(lam)) == doctest::Approx(0.25 * std::pow(4.0, -1.5)));
    CHECK(d.sample_axis(0.5 + 1e-12) >= 0.0);
    CHECK(d.sample_axis(0.25) == doctest::Approx(-(std::pow(0.5, -2.0) - 1.0)));
}

TEST_CASE("gaussian coefficients") {
    double s1 = 0.0, s2 = 0.0, cross = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const int J[] = {i % 7 - 3, i / 7 % 5};
        const long K[] = {i / 35, -i % 11};
        const cplx z = gaussian_coefficient(99, J, K);
        s1 += z.real() + z.imag();
        s2 += std::norm(z);
        cross += z.real() * z.imag();
    }
    CHECK(std::abs(s1 / (2 * n)) < 0.05);
    CHECK(s2 / n == doctest::Approx(4.0).epsilon(0.05));
    CHECK(std::abs(cross / n) < 0.06);
    const int J[] = {1, -2};
    const long K[] = {5, 7};
    CHECK(gaussian_coefficient(99, J, K) == gaussian_coefficient(99, J, K));
    CHECK(gaussian_coefficient(99, J, K) != gaussian_coefficient(100, J, K));
}

TEST_CASE("coefficient blocks match single evaluations") {
    for (std::size_t N : {1u, 2u, 3u}) {
        const auto atoms = sample_atoms(5, 3000, N);
        const TruncationDomain trunc{N == 3 ? 1 : 2, 1.0};
        const double alpha = 1.5;
        std::set<std::vector<int>> seen;
        int checked = 0;
        for_each_coefficient_block(atoms, trunc, alpha, CoefficientLaw::lepage,
                                   [&](std::span<const int> J, std::span<const cplx> block) {
                                       seen.insert(std::vector<int>(J.begin(), J.end()));
                                       if (seen.size() % 5 != 1) return;
                                       const long K = trunc.kmax();
                                       std::vector<long> k(N);
                                       for (long q : {-K, 0L, 3L, K}) {
                                           std::fill(k.begin(), k.end(), q);
                                           k[0] = std::clamp(q - 1, -K, K);
                                           std::size_t idx = 0;
                                           for (std::size_t l = 0; l < N; ++l) idx = idx * trunc.k_count() + (k[l] + K);
                                           const cplx ref = coefficient_from_atoms(atoms, J, k, alpha);
                                           CHECK(std::abs(block[idx] - ref) <= 1e-11 * (1.0 + std::abs(ref)));
                                           ++checked;
                                       }
                                   });
        std::size_t expect = 1;
        for (std::size_t l = 0; l < N; ++l) expect *= trunc.j_count();
        CHECK(seen.size() == expect);
        CHECK(checked > 0);
    }
}

TEST_CASE("coefficient tensor indexing") {
    const auto atoms = sample_atoms(3, 2000, 2);
    const HurstVector H({0.5, 0.6});
    const TruncationDomain trunc{2, 0.5};
    CHECK(trunc.kmax() == 4);
    const auto T = build_coefficient_tensor(atoms, trunc, 2.0, H, CoefficientLaw::gaussian_iid);
    CHECK(T.entries.size() == 25u * 81u);
    const int J[] = {-1, 2};
    const long K[] = {3, -4};
    CHECK(T.at(J, K) == gaussian_coefficient(3, J, K));
    const auto L = build_coefficient_tensor(atoms, trunc, 1.2, H);
    CHECK(std::abs(L.at(J, K) - coefficient(atoms, J, K, 1.2)) < 1e-11 * (1.0 + std::abs(L.at(J, K))));
    const long bad[] = {5, 0};
    CHECK_THROWS_AS(T.index(J, bad), Error);
}

TEST_CASE("direct field") {
    const auto atoms = sample_atoms(11, 2000, 2);
    const HurstVector H({0.4, 0.7});
    const double t[] = {0.3, -0.6};
    const double pts[] = {0.3, -0.6, 0.0, 0.5, 1.0, 1.0};
    const auto v = direct_field_points(atoms, pts, H, 1.5);
    CHECK(v[0] == doctest::Approx(direct_field(atoms, t, H, 1.5)).epsilon(1e-14));
    CHECK(v[1] == 0.0);  // vanishes on the axes

    // Agrees with the naive sum of Re c_i F(t, V_i).
    const auto c = atom_weights(atoms, 1.5);
    double ref = 0.0;
    for (std::size_t i = 0; i < atoms.count; ++i) {
        cplx f = c[i];
        for (int l = 0; l < 2; ++l) {
            const double lam = atoms.points[2 * i + l];
            f *= (std::exp(cplx(0.0, t[l] * lam)) - 1.0) * std::pow(std::abs(lam), -H[l] - 1.0 / 1.5);
        }
        ref += f.real();
    }
    CHECK(v[0] == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("coefficient growth report") {
    const auto atoms = sample_atoms(21, 3000, 1);
    const auto r = coefficient_growth_report(atoms, 3, 1.0, 1.5, 0.1);
    CHECK(r.max_normalized > 0.0);
    CHECK(r.max_normalized <= r.max_normalized_eta0);
    REQUIRE(r.argmax_J.size() == 1);
    CHECK(std::abs(r.argmax_J[0]) <= 3);
    CHECK_THROWS_AS(coefficient_growth_report(atoms, 3, 1.0, 1.5, 0.0), Error);
}
