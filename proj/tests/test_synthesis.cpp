#include "doctest.h"

#include <cmath>

#include "hfss/error.hpp"
#include "hfss/fractional_kernel.hpp"
#include "hfss/synthesis.hpp"

using namespace hfss;

namespace {

double rel_rms(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num / den);
}

SynthesisOptions opts(SynthesisEngine e, int threads = 1, std::size_t atoms = 3000) {
    SynthesisOptions o;
    o.engine = e;
    o.threads = threads;
    o.atom_count = atoms;
    return o;
}

}  // namespace

TEST_CASE("grid spec") {
    const auto g = make_grid({5, 3}, {-1.0, 0.0}, {1.0, 1.0});
    CHECK(g.size() == 15);
    CHECK(g.coordinate(0, 2) == 0.0);
    CHECK(g.coordinate(0, 4) == 1.0);
    CHECK(g.point(7) == std::vector<double>{0.0, 0.5});
    CHECK_THROWS_AS(make_grid({2}, {1.0}, {0.0}), Error);
    CHECK(parse_engine("periodized") == SynthesisEngine::periodized);
    CHECK_THROWS_AS(parse_engine("fft"), Error);
}

TEST_CASE("wavelet engine equals the explicit coefficient sum") {
    const HurstVector H({0.5, 0.7});
    const TruncationDomain trunc{2, 0.5};
    const auto g = make_grid({4, 3}, {-0.4, 0.1}, {0.5, 0.45});
    const auto atoms = sample_atoms(9, 2000, 2);
    const auto v = synthesize_component(atoms, H, 1.5, trunc, g, opts(SynthesisEngine::wavelet));
    const auto T = build_coefficient_tensor(atoms, trunc, 1.5, H);
    const auto& t1 = cached_table(0.5, 1.5, trunc.n, trunc.M);
    const auto& t2 = cached_table(0.7, 1.5, trunc.n, trunc.M);
    const long K = trunc.kmax();
    for (std::size_t p = 0; p < g.size(); ++p) {
        const auto t = g.point(p);
        double ref = 0.0;
        for (int j1 = -2; j1 <= 2; ++j1)
            for (int j2 = -2; j2 <= 2; ++j2)
                for (long k1 = -K; k1 <= K; ++k1)
                    for (long k2 = -K; k2 <= K; ++k2) {
                        const int J[] = {j1, j2};
                        const long KK[] = {k1, k2};
                        ref += (T.at(J, KK) * w_coeff(t1, j1, k1, t[0]) * w_coeff(t2, j2, k2, t[1])).real();
                    }
        CHECK(v[p] == doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("zero hyperplanes and bounds") {
    const HurstVector H({0.5, 0.7});
    const auto g = make_grid({5, 5}, {-1.0, -1.0}, {1.0, 1.0});
    for (auto e : {SynthesisEngine::wavelet, SynthesisEngine::periodized, SynthesisEngine::direct}) {
        const auto f = synthesize(H, 1.5, {2, 1.0}, g, 3, 1, opts(e));
        for (std::size_t p = 0; p < g.size(); ++p) {
            const auto t = g.point(p);
            if (t[0] == 0.0 || t[1] == 0.0) CHECK(f.values[p] == 0.0);
            CHECK(std::isfinite(f.values[p]));
        }
    }
    CHECK_THROWS_AS(synthesize(H, 1.5, {2, 0.5}, g, 3, 1, opts(SynthesisEngine::wavelet)), Error);
}

TEST_CASE("results do not depend on the worker count") {
    const HurstVector H({0.5, 0.7});
    const auto g = make_grid({70, 33}, {0.1, 0.1}, {0.9, 0.9});
    for (auto e : {SynthesisEngine::wavelet, SynthesisEngine::periodized, SynthesisEngine::direct})
        for (double alpha : {1.5, 2.0}) {
            const auto a = synthesize(H, alpha, {3, 1.0}, g, 11, 1, opts(e, 1));
            const auto b = synthesize(H, alpha, {3, 1.0}, g, 11, 1, opts(e, 3));
            CHECK(a.values == b.values);
        }
}

TEST_CASE("periodized engine matches the truncated wavelet engine") {
    const HurstVector H({0.5, 0.7});
    const auto g = make_grid({16, 16}, {0.1, 0.1}, {0.9, 0.9});
    const auto atoms = sample_atoms(5, 5000, 2);
    auto o = opts(SynthesisEngine::wavelet);
    o.gaussian_iid = false;
    for (double alpha : {1.5, 2.0}) {
        // M = 4 pushes the k-truncation residue below 1e-8.
        const auto a = synthesize_component(atoms, H, alpha, {3, 4.0}, g, o);
        const auto b = synthesize_component(atoms, H, alpha, {3, 1.0}, g, opts(SynthesisEngine::periodized));
        CHECK(rel_rms(a, b) < 1e-6);
    }
    // Axis factor against the explicit partial sum over a wide k range.
    const auto& table = cached_table(0.5, 1.5, 3, 8.0);
    const double xs[] = {0.3, -0.7, 0.0};
    for (double lam : {2.5, -7.0, 0.6}) {
        const auto f = periodized_axis_factor(lam, 0.5, 1.5, 3, xs);
        for (int p = 0; p < 3; ++p) {
            const cplx ref = wavelet_partial_sum(table, 3, 8.0, xs[p], lam);
            CHECK(std::abs(f[p] - ref) < 1e-8 * (1.0 + std::abs(ref)));
        }
    }
}

TEST_CASE("direct engine matches pointwise evaluation") {
    const HurstVector H({0.4, 0.6});
    const auto g = make_grid({6, 5}, {0.2, -0.5}, {1.2, 0.5});
    const auto atoms = sample_atoms(2, 3000, 2);
    const auto v = synthesize_component(atoms, H, 1.2, {2, 2.0}, g, opts(SynthesisEngine::direct));
    std::vector<double> pts;
    for (std::size_t p = 0; p < g.size(); ++p)
        for (double x : g.point(p)) pts.push_back(x);
    const auto ref = direct_field_points(atoms, pts, H, 1.2);
    for (std::size_t p = 0; p < g.size(); ++p) CHECK(v[p] == doctest::Approx(ref[p]).epsilon(1e-9));
}

TEST_CASE("one and three dimensional grids") {
    const auto g1 = make_grid({40}, {0.0}, {1.0});
    const HurstVector H1({0.6});
    const auto a = synthesize(H1, 1.5, {3, 4.0}, g1, 4, 1, opts(SynthesisEngine::wavelet));
    const auto b = synthesize(H1, 1.5, {3, 1.0}, g1, 4, 1, opts(SynthesisEngine::periodized));
    CHECK(a.values[0] == 0.0);
    CHECK(rel_rms(a.values, b.values) < 1e-6);

    const auto g3 = make_grid({5, 4, 3}, {0.1, 0.2, 0.3}, {0.5, 0.6, 0.7});
    const HurstVector H3({0.5, 0.6, 0.7});
    auto o = opts(SynthesisEngine::wavelet);
    o.gaussian_iid = false;
    const auto atoms = sample_atoms(8, 3000, 3);
    const auto c = synthesize_component(atoms, H3, 2.0, {1, 8.0}, g3, o);
    const auto d = synthesize_component(atoms, H3, 2.0, {1, 1.0}, g3, opts(SynthesisEngine::periodized));
    CHECK(rel_rms(c, d) < 1e-5);  // k-truncation residue at |y| ~ 30
}

TEST_CASE("vector fields use independent component seeds") {
    const HurstVector H({0.5, 0.5});
    const auto g = make_grid({8, 8}, {0.1, 0.1}, {0.9, 0.9});
    const auto f = synthesize(H, 2.0, {2, 1.0}, g, 5, 2, opts(SynthesisEngine::wavelet));
    CHECK(f.values.size() == 128);
    CHECK(std::vector<double>(f.values.begin(), f.values.begin() + 64) !=
          std::vector<double>(f.values.begin() + 64, f.values.end()));
    CHECK(component_seed(5, 0, 1) == 5);
    CHECK(component_seed(5, 0, 2) != component_seed(5, 1, 2));
}

TEST_CASE("holder cauchy report") {
    const HurstVector H({0.5, 0.7});
    const auto g = make_grid({16, 16}, {0.1, 0.1}, {0.9, 0.9});
    const auto o = opts(SynthesisEngine::wavelet);
    const auto r = holder_cauchy_report(H, 2.0, {1, 3}, 1.0, 0.0, g, {1, 2}, o);
    CHECK(r.seminorm.size() == 2);
    CHECK(r.mean_sup.size() == 2);
    CHECK(r.mean_seminorm[0] == doctest::Approx(r.mean_seminorm[0]));
    const auto again = holder_cauchy_report(H, 2.0, {1, 3}, 1.0, 0.0, g, {1, 2}, o);
    CHECK(again.seminorm == r.seminorm);
    CHECK_THROWS_AS(holder_cauchy_report(H, 2.0, {1}, 1.0, 0.5, g, {1}, o), Error);
    // Seminorm of a linear ramp with gamma = 1 is its slope.
    const auto line = make_grid({9}, {0.0}, {1.0});
    std::vector<double> ramp(9);
    for (int i = 0; i < 9; ++i) ramp[i] = 3.0 * i / 8.0;
    CHECK(dyadic_holder_seminorm(ramp, line, 1.0) == doctest::Approx(3.0));
}
