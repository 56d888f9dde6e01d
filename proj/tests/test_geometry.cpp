#include "doctest.h"

#include <cmath>
#include <random>

#include "hfss/error.hpp"
#include "hfss/geometry.hpp"

using namespace hfss;

TEST_CASE("rho") {
    const HurstVector h55({0.5, 0.5}), h57({0.5, 0.7});
    const double o[] = {0.0, 0.0}, one[] = {1.0, 1.0}, four[] = {4.0, 0.0}, t[] = {0.3, -2.0};
    CHECK(rho(t, t, h57) == 0.0);
    CHECK(rho(o, one, h55) == doctest::Approx(2.0));
    CHECK(rho(o, four, h57) == doctest::Approx(2.0));
}

TEST_CASE("stable scale from the ecf") {
    std::mt19937_64 gen(12);
    const double sigma = 1.7;
    std::normal_distribution<double> nd(0.0, std::sqrt(2.0) * sigma);
    std::vector<double> x(10000);
    for (auto& v : x) v = nd(gen);
    const auto est = estimate_stable_scale(x, 2.0);
    CHECK(est.sigma_hat == doctest::Approx(sigma).epsilon(0.03));
    CHECK(est.u_grid.size() >= 4);

    std::vector<double> y = x;
    for (auto& v : y) v *= 3.5;
    CHECK(estimate_stable_scale(y, 2.0).sigma_hat == doctest::Approx(3.5 * est.sigma_hat).epsilon(0.01));

    // Symmetric Cauchy with scale 0.8 has ecf exp(-0.8 |u|).
    std::cauchy_distribution<double> cd(0.0, 0.8);
    for (auto& v : x) v = cd(gen);
    CHECK(estimate_stable_scale(x, 1.0).sigma_hat == doctest::Approx(0.8).epsilon(0.05));

    const std::vector<double> zeros(2000, 0.0);
    const auto z = estimate_stable_scale(zeros, 1.5);
    CHECK(z.degenerate);
    CHECK(z.sigma_hat == 0.0);
    CHECK_THROWS_AS(estimate_stable_scale(std::vector<double>(999, 1.0), 2.0), Error);
}

TEST_CASE("kolmogorov-smirnov") {
    CHECK(kolmogorov_survival(0.0) == 1.0);
    CHECK(kolmogorov_survival(1.36) == doctest::Approx(0.0494).epsilon(0.01));
    CHECK(kolmogorov_survival(1.0) == doctest::Approx(0.26999967).epsilon(1e-5));
    CHECK(kolmogorov_survival(1.17) == doctest::Approx(kolmogorov_survival(1.19)).epsilon(0.05));

    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> a(2000), b(2000);
    for (auto& v : a) v = u(gen);
    for (auto& v : b) v = u(gen);
    CHECK(ks_one_sample(a, [](double x) { return std::clamp(x, 0.0, 1.0); }).p_value > 0.01);
    CHECK(ks_two_sample(a, b).p_value > 0.01);
    for (auto& v : b) v = v * v;
    CHECK(ks_two_sample(a, b).p_value < 1e-6);
    CHECK(ks_two_sample(a, a).statistic == 0.0);
}

TEST_CASE("regions and occupation density") {
    const auto g = make_grid({11, 21}, {0.0, 0.0}, {1.0, 2.0});
    CHECK(region_points(g, full_region(g)).size() == 231u);
    CHECK(region_points(g, {{0.2, 0.5}, {0.4, 1.0}}).size() == 3u * 6u);
    CHECK(cell_volume(g) == doctest::Approx(0.01));

    FieldGrid f{g, {}, std::vector<double>(g.size())};
    for (std::size_t p = 0; p < g.size(); ++p) {
        const auto t = g.point(p);
        f.values[p] = std::sin(3.0 * t[0]) + t[1] * t[1];
    }
    const Region T{{0.1, 0.3}, {0.9, 1.7}};
    const auto od = occupation_density(f, T, 12);
    CHECK(od.total() == doctest::Approx(od.region_measure).epsilon(1e-14));
    CHECK(od.region_measure == doctest::Approx(double(region_points(g, T).size()) * 0.01));

    // Indicator of one bin, counted directly.
    const std::size_t b = 5;
    std::size_t count = 0;
    for (std::size_t p : region_points(g, T))
        if (f.values[p] >= od.bin_edges[b] && f.values[p] < od.bin_edges[b + 1]) ++count;
    CHECK(od.density[b] * (od.bin_edges[b + 1] - od.bin_edges[b]) == doctest::Approx(count * od.cell_volume));

    CHECK_THROWS_AS(occupation_density(f, {{0.51, 0.0}, {0.52, 2.0}}, 4), Error);
    CHECK(level_set(f, 0.0, 1e300).size() == g.size());
}

TEST_CASE("level set on the boundary hyperplanes") {
    const auto g = make_grid({9, 9}, {0.0, 0.0}, {1.0, 1.0});
    FieldGrid f{g, {}, std::vector<double>(g.size(), 0.0)};
    for (std::size_t p = 0; p < g.size(); ++p) {
        const auto t = g.point(p);
        f.values[p] = t[0] * t[1] + 0.01;
        if (t[0] == 0.0 || t[1] == 0.0) f.values[p] = 0.0;
    }
    const auto L = level_set(f, 0.0, 1e-9);
    CHECK(L.size() == 17u);
}

TEST_CASE("box counting") {
    const auto g = make_grid({257, 257}, {0.0, 0.0}, {1.0, 1.0});
    std::vector<std::size_t> all(g.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const std::vector<int> levels{1, 2, 3, 4, 5, 6, 7};
    const auto full = box_count_dimension(grid_points(g, all), full_region(g), BoxMetric::euclidean, levels);
    CHECK(full.slope == doctest::Approx(2.0).epsilon(0.025));
    CHECK(full.r_squared > 0.99);

    std::vector<std::size_t> line;
    for (std::size_t i = 0; i < 257; ++i) line.push_back(100 * 257 + i);
    const auto ln = box_count_dimension(grid_points(g, line), full_region(g), BoxMetric::euclidean, levels);
    CHECK(ln.slope == doctest::Approx(1.0).epsilon(0.1));

    CHECK_THROWS_AS(box_count_dimension(grid_points(g, line), full_region(g), BoxMetric::euclidean, {1, 2}), Error);
    CHECK_THROWS_AS(box_count_dimension({}, full_region(g), BoxMetric::euclidean, levels), Error);
}

TEST_CASE("covering exponent") {
    for (const HurstVector& H : {HurstVector({0.5, 0.7}), HurstVector({0.3, 0.9}), HurstVector({0.6, 0.6, 0.4})}) {
        const Region R{std::vector<double>(H.size(), 0.5), std::vector<double>(H.size(), 1.5)};
        const auto c = rho_covering_exponent(R, H, {3, 4, 5, 6, 7});
        CHECK(c.exponent == doctest::Approx(c.Q).epsilon(0.05));
    }
}

TEST_CASE("dimension formulas") {
    CHECK(dim_inverse_image_formula(HurstVector({0.4, 0.6}), 1, 0.0).value == doctest::Approx(1.6));
    CHECK(dim_inverse_image_formula(HurstVector({0.6, 0.4}), 1, 0.0).argmin_k == 1);
    CHECK(dim_inverse_image_formula(HurstVector({0.6, 0.6}), 1, 0.0).value == doctest::Approx(1.4));
    CHECK(dim_inverse_image_formula(HurstVector({0.3, 0.5, 0.8}), 2, 2.0).value == doctest::Approx(3.0));
    CHECK_FALSE(dim_inverse_image_formula(HurstVector({0.9}), 2, 0.0).in_regime);
    CHECK_THROWS_AS(dim_inverse_image_formula(HurstVector({0.5}), 1, 1.5), Error);

    const auto bt = beta_tau(HurstVector({0.5, 0.5}), 1);
    CHECK(bt.tau == 1);
    CHECK(bt.beta == doctest::Approx(1.5));
    CHECK(beta_tau(HurstVector({0.6, 0.6}), 1).beta == doctest::Approx(1.4));
    CHECK_THROWS_AS(beta_tau(HurstVector({0.9}), 2), Error);

    // Brute-force coherence over 100 triples.
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    int tested = 0;
    while (tested < 100) {
        const std::size_t N = 1 + gen() % 4;
        const int d = 1 + static_cast<int>(gen() % 3);
        std::vector<double> h(N);
        for (auto& x : h) x = u(gen);
        const HurstVector H(h);
        const double dimF = (tested % 3 == 0) ? 0.0 : d * u(gen);
        const auto r = dim_inverse_image_formula(H, d, dimF);
        if (!r.in_regime) continue;
        const auto s = H.sorted();
        double best = 1e300;
        for (std::size_t k = 1; k <= N; ++k) {
            double v = 0.0;
            for (std::size_t j = 0; j < k; ++j) v += s[k - 1] / s[j];
            best = std::min(best, v + double(N - k) - s[k - 1] * (d - dimF));
        }
        CHECK(r.value == doctest::Approx(best).epsilon(1e-12));
        CHECK(r.sandwich);
        if (dimF == 0.0) {
            const auto b = beta_tau(H, d);
            CHECK(b.tau == r.argmin_k);
            CHECK(b.beta == doctest::Approx(r.value).epsilon(1e-12));
        }
        ++tested;
    }
}

TEST_CASE("scaling region and exponent") {
    const HurstVector H({0.5, 0.5});
    const auto J = scale_region({{0.1, 0.1}, {0.3, 0.3}}, H, 2.0);
    CHECK(J.lower[0] == doctest::Approx(0.4));
    CHECK(J.upper[1] == doctest::Approx(1.2));

    auto zero = [](const GridSpec& g, std::size_t) {
        FieldGrid f{g, {}, std::vector<double>(g.size(), 0.0)};
        return f;
    };
    CHECK_THROWS_AS(localtime_scaling_check(zero, 10, H, 2.0, 1, {{0.1, 0.1}, {0.3, 0.3}}, 4.0, 0.0, 0.1, 8, 2.0),
                    Error);
}

TEST_CASE("holder axis exponent on synthetic paths") {
    const auto g = make_grid({4, 1024}, {0.0, 0.0}, {1.0, 1.0});
    FieldGrid f{g, {}, std::vector<double>(g.size())};
    // Random walks: median increments grow like h^{1/2}.
    std::mt19937_64 gen(3);
    std::normal_distribution<double> nd;
    for (std::size_t r = 0; r < 4; ++r) {
        double acc = 0.0;
        for (std::size_t i = 0; i < 1024; ++i) {
            f.values[r * 1024 + i] = acc;
            acc += nd(gen);
        }
    }
    CHECK(holder_axis_exponent(f, 1).slope == doctest::Approx(0.5).epsilon(0.1));
    std::fill(f.values.begin(), f.values.end(), 1.0);
    CHECK_THROWS_AS(holder_axis_exponent(f, 1), Error);
    CHECK_THROWS_AS(holder_axis_exponent(f, 0), Error);
}
