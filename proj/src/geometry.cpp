// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#include "hfss/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hfss/error.hpp"
#include "hfss/numerics.hpp"

namespace hfss {

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end());
    const double hi = v[m];
    if (v.size() % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m));
    return 0.5 * (lo + hi);
}

struct LineFit {
    double slope = 0.0, intercept = 0.0, r_squared = 0.0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    f.r_squared = sxx > 0.0 && syy > 0.0 ? std::min(1.0, sxy * sxy / (sxx * syy)) : 1.0;
    return f;
}

std::size_t stride_of(const GridSpec& g, std::size_t l) {
    std::size_t s = 1;
    for (std::size_t m = l + 1; m < g.N(); ++m) s *= g.shape[m];
    return s;
}

void check_region(const GridSpec& g, const Region& r) {
    require(r.lower.size() == g.N() && r.upper.size() == g.N(), "region and grid differ in dimension");
    for (std::size_t l = 0; l < g.N(); ++l) require(r.lower[l] <= r.upper[l], "region needs lower <= upper");
}

}  // namespace

double rho(std::span<const double> s, std::span<const double> t, const HurstVector& H) {
    require(s.size() == t.size() && s.size() == H.size(), "rho: dimension mismatch");
    double acc = 0.0;
    for (std::size_t l = 0; l < s.size(); ++l) acc += std::pow(std::abs(s[l] - t[l]), H[l]);
    return acc;
}

StableScaleEstimate estimate_stable_scale(std::span<const double> samples, double alpha) {
    check_alpha(alpha);
    if (samples.size() < min_ecf_samples)
        fail(ErrorKind::insufficient_ensemble, "ecf fit needs at least 1000 samples");
    StableScaleEstimate est;
    est.alpha_assumed = alpha;
    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    if (*mn == *mx) {
        est.degenerate = true;
        return est;
    }
    std::vector<double> absx(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) absx[i] = std::abs(samples[i]);
    double s0 = median_of(absx);
    if (s0 == 0.0) s0 = std::accumulate(absx.begin(), absx.end(), 0.0) / static_cast<double>(absx.size());
    const double inv_n = 1.0 / static_cast<double>(samples.size());
    auto ecf = [&](double u) {
        double c = 0.0, s = 0.0;
        for (double x : samples) {
            c += std::cos(u * x);
            s += std::sin(u * x);
        }
        return std::hypot(c * inv_n, s * inv_n);
    };
    auto scan = [&](double ua, double ub, int count, std::vector<double>& us, std::vector<double>& es) {
        for (int q = 0; q < count; ++q) {
            const double u = ua * std::pow(ub / ua, static_cast<double>(q) / (count - 1));
            us.push_back(u);
            es.push_back(ecf(u));
        }
    };
    std::vector<double> us, es;
    scan(0.02 / s0, 20.0 / s0, 48, us, es);
    std::vector<double> fu, fy;
    auto keep = [&](const std::vector<double>& u, const std::vector<double>& e) {
        fu.clear();
        fy.clear();
        for (std::size_t q = 0; q < u.size(); ++q)
            if (e[q] >= 0.2 && e[q] <= 0.9) {
                fu.push_back(u[q]);
                fy.push_back(-std::log(e[q]));
            }
    };
    keep(us, es);
    if (fu.size() < 4) {
        // Refine between the last point above the window and the first below it.
        double ua = us.front(), ub = us.back();
        for (std::size_t q = 0; q < us.size(); ++q)
            if (es[q] > 0.9) ua = us[q];
        for (std::size_t q = us.size(); q-- > 0;)
            if (es[q] < 0.2) ub = us[q];
        if (ub <= ua) ub = ua * 4.0;
        std::vector<double> u2, e2;
        scan(ua, ub, 32, u2, e2);
        keep(u2, e2);
    }
    if (fu.empty()) fail(ErrorKind::insufficient_ensemble, "ecf never enters the [0.2, 0.9] window");
    double num = 0.0, den = 0.0;
    for (std::size_t q = 0; q < fu.size(); ++q) {
        const double ua = std::pow(fu[q], alpha);
        num += fy[q] * ua;
        den += ua * ua;
    }
    const double s = num / den;
    double r2 = 0.0;
    for (std::size_t q = 0; q < fu.size(); ++q) {
        const double e = fy[q] - s * std::pow(fu[q], alpha);
        r2 += e * e;
    }
    est.sigma_hat = std::pow(s, 1.0 / alpha);
    est.residual = std::sqrt(r2 / static_cast<double>(fu.size()));
    est.u_grid = fu;
    return est;
}

double kolmogorov_survival(double x) {
    if (x <= 0.0) return 1.0;
    if (x < 1.18) {
        // Q = 1 - sqrt(2 pi)/x sum_k exp(-(2k-1)^2 pi^2 / (8 x^2)).
        double s = 0.0;
        for (int k = 1; k <= 6; ++k) {
            const double a = (2.0 * k - 1.0) * pi;
            s += std::exp(-a * a / (8.0 * x * x));
        }
        return std::clamp(1.0 - std::sqrt(two_pi) / x * s, 0.0, 1.0);
    }
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        s += (k % 2 == 1 ? term : -term);
        if (term < 1e-17) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

namespace {

double ks_p(double d, double en) { return kolmogorov_survival((en + 0.12 + 0.11 / en) * d); }

}  // namespace

KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
    require(!samples.empty(), "KS test needs samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double F = cdf(samples[i]);
        d = std::max({d, std::abs(F - static_cast<double>(i) / n), std::abs(F - static_cast<double>(i + 1) / n)});
    }
    return {d, ks_p(d, std::sqrt(n))};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    require(!a.empty() && !b.empty(), "KS test needs samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return {d, ks_p(d, std::sqrt(na * nb / (na + nb)))};
}

Region full_region(const GridSpec& grid) { return {grid.lower, grid.upper}; }

std::vector<std::size_t> region_points(const GridSpec& grid, const Region& region) {
    check_region(grid, region);
    const std::size_t N = grid.N();
    std::vector<std::vector<std::size_t>> idx(N);
    for (std::size_t l = 0; l < N; ++l) {
        const double tol = 1e-12 * std::max({1.0, std::abs(region.lower[l]), std::abs(region.upper[l])});
        for (std::size_t i = 0; i < grid.shape[l]; ++i) {
            const double x = grid.coordinate(l, i);
            if (x >= region.lower[l] - tol && x <= region.upper[l] + tol) idx[l].push_back(i);
        }
        if (idx[l].empty()) return {};
    }
    std::vector<std::size_t> out;
    std::vector<std::size_t> pos(N, 0);
    for (;;) {
        std::size_t flat = 0;
        for (std::size_t l = 0; l < N; ++l) flat = flat * grid.shape[l] + idx[l][pos[l]];
        out.push_back(flat);
        std::size_t l = N;
        while (l-- > 0) {
            if (++pos[l] < idx[l].size()) break;
            pos[l] = 0;
        }
        if (l == static_cast<std::size_t>(-1)) break;
    }
    return out;
}

double cell_volume(const GridSpec& grid) {
    double v = 1.0;
    for (std::size_t l = 0; l < grid.N(); ++l)
        if (grid.shape[l] > 1) v *= grid.spacing(l);
    return v;
}

ScaleComparability scale_comparability_report(
    const std::vector<std::vector<double>>& increments,
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs, const HurstVector& H,
    double alpha) {
    require(increments.size() == pairs.size() && !pairs.empty(), "scale comparability: one sample set per pair");
    if (alpha < 1.0) fail(ErrorKind::invalid_input, "scale comparability needs alpha in [1, 2]");
    ScaleComparability r;
    r.ratio_min = std::numeric_limits<double>::infinity();
    r.ratio_max = 0.0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        if (increments[p].size() < min_ecf_samples)
            fail(ErrorKind::insufficient_ensemble, "scale comparability needs at least 1000 realizations");
        for (std::size_t l = 0; l < H.size(); ++l)
            require(pairs[p].first[l] > 0.0 && pairs[p].second[l] > 0.0, "scale comparability: pairs must lie in (0, inf)^N");
        const double rh = rho(pairs[p].first, pairs[p].second, H);
        const auto est = estimate_stable_scale(increments[p], alpha);
        r.sigma_hat.push_back(est.sigma_hat);
        r.rho.push_back(rh);
        const double ratio = rh > 0.0 ? est.sigma_hat / rh : 0.0;
        r.ratio.push_back(ratio);
        if (rh > 0.0) {
            r.ratio_min = std::min(r.ratio_min, ratio);
            r.ratio_max = std::max(r.ratio_max, ratio);
        }
    }
    r.spread = r.ratio_min > 0.0 && std::isfinite(r.ratio_min) ? r.ratio_max / r.ratio_min : 0.0;
    return r;
}

HolderAxisEstimate holder_axis_exponent(const FieldGrid& field, std::size_t axis, std::size_t component) {
    const GridSpec& g = field.grid;
    require(axis < g.N() && component < field.components(), "holder exponent: axis or component out of range");
    const std::size_t s = g.shape[axis];
    if (s < 256) fail(ErrorKind::too_small_grid, "holder exponent needs at least 256 points along the axis");
    const auto vals = field.component(component);
    const std::size_t stride = stride_of(g, axis);
    const std::size_t outer = g.size() / (stride * s);
    std::vector<std::size_t> lags;
    for (std::size_t h = 1; 4 * h <= s - 1; h *= 2) lags.push_back(h);
    HolderAxisEstimate est;
    for (std::size_t h : lags) est.lags.push_back(static_cast<double>(h) * g.spacing(axis));
    std::vector<double> log_sum(lags.size(), 0.0);
    std::vector<std::size_t> log_count(lags.size(), 0);
    double slope_sum = 0.0;
    std::vector<double> inc;
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t q = 0; q < stride; ++q) {
            std::vector<double> x, y;
            for (std::size_t m = 0; m < lags.size(); ++m) {
                const std::size_t h = lags[m];
                inc.clear();
                for (std::size_t p = 0; p + h < s; ++p) {
                    const std::size_t a = (o * s + p) * stride + q;
                    inc.push_back(std::abs(vals[a + h * stride] - vals[a]));
                }
                const double med = median_of(inc);
                if (med > 0.0) {
                    x.push_back(std::log(est.lags[m]));
                    y.push_back(std::log(med));
                    log_sum[m] += std::log(med);
                    ++log_count[m];
                }
            }
            if (x.size() < 4) continue;
            slope_sum += least_squares(x, y).slope;
            ++est.lines;
        }
    if (est.lines == 0) fail(ErrorKind::too_few_scales, "holder exponent: fewer than 4 usable dyadic lags");
    est.slope = slope_sum / static_cast<double>(est.lines);
    for (std::size_t m = 0; m < lags.size(); ++m)
        est.median_increment.push_back(log_count[m] ? std::exp(log_sum[m] / static_cast<double>(log_count[m])) : 0.0);
    return est;
}

double OccupationDensity::total() const {
    double t = 0.0;
    for (std::size_t b = 0; b < density.size(); ++b) t += density[b] * (bin_edges[b + 1] - bin_edges[b]);
    return t;
}

double OccupationDensity::at(double x) const {
    if (density.empty() || x < bin_edges.front() || x > bin_edges.back()) return 0.0;
    auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), x);
    std::size_t b = static_cast<std::size_t>(it - bin_edges.begin());
    b = b == 0 ? 0 : std::min(b - 1, density.size() - 1);
    return density[b];
}

OccupationDensity occupation_density(const FieldGrid& field, const Region& region, std::size_t bins,
                                     std::size_t component, double lo, double hi) {
    require(bins >= 1, "occupation density needs at least one bin");
    require(component < field.components(), "occupation density: component out of range");
    const auto pts = region_points(field.grid, region);
    if (pts.empty()) fail(ErrorKind::empty_region, "occupation density: no grid points in the region");
    const auto vals = field.component(component);
    OccupationDensity od;
    od.cell_volume = cell_volume(field.grid);
    od.points = pts.size();
    od.region_measure = static_cast<double>(pts.size()) * od.cell_volume;
    if (!(lo < hi)) {
        lo = hi = vals[pts[0]];
        for (std::size_t p : pts) {
            lo = std::min(lo, vals[p]);
            hi = std::max(hi, vals[p]);
        }
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
    const double width = (hi - lo) / static_cast<double>(bins);
    od.bin_edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) od.bin_edges[b] = b == bins ? hi : lo + static_cast<double>(b) * width;
    std::vector<std::size_t> counts(bins, 0);
    for (std::size_t p : pts) {
        const double x = vals[p];
        if (x < lo || x > hi) continue;
        const auto b = std::min(bins - 1, static_cast<std::size_t>((x - lo) / width));
        ++counts[b];
    }
    od.density.resize(bins);
    for (std::size_t b = 0; b < bins; ++b)
        od.density[b] = static_cast<double>(counts[b]) * od.cell_volume / (od.bin_edges[b + 1] - od.bin_edges[b]);
    return od;
}

double resolution_delta(const FieldGrid& field, std::size_t component) {
    const GridSpec& g = field.grid;
    const auto vals = field.component(component);
    std::vector<double> inc;
    for (std::size_t l = 0; l < g.N(); ++l) {
        const std::size_t stride = stride_of(g, l), s = g.shape[l];
        const std::size_t outer = g.size() / (stride * s);
        for (std::size_t o = 0; o < outer; ++o)
            for (std::size_t p = 0; p + 1 < s; ++p)
                for (std::size_t q = 0; q < stride; ++q) {
                    const std::size_t a = (o * s + p) * stride + q;
                    inc.push_back(std::abs(vals[a + stride] - vals[a]));
                }
    }
    return median_of(std::move(inc));
}

namespace {

bool near_level(const FieldGrid& field, std::size_t p, std::span<const double> x, double delta) {
    for (std::size_t c = 0; c < field.components(); ++c)
        if (!(std::abs(field.values[c * field.grid.size() + p] - x[c]) < delta)) return false;
    return true;
}

}  // namespace

double local_time_at(const FieldGrid& field, const Region& region, std::span<const double> x, double delta) {
    require(delta > 0.0, "local time needs delta > 0");
    require(x.size() == field.components(), "local time: level has the wrong number of components");
    const auto pts = region_points(field.grid, region);
    if (pts.empty()) fail(ErrorKind::empty_region, "local time: no grid points in the region");
    std::size_t count = 0;
    for (std::size_t p : pts) count += near_level(field, p, x, delta);
    return static_cast<double>(count) * cell_volume(field.grid) /
           std::pow(2.0 * delta, static_cast<double>(field.components()));
}

double local_time_at(const FieldGrid& field, const Region& region, double x, double delta) {
    const std::vector<double> xs(field.components(), x);
    return local_time_at(field, region, xs, delta);
}

std::vector<std::size_t> level_set(const FieldGrid& field, std::span<const double> x, double delta) {
    require(x.size() == field.components(), "level set: level has the wrong number of components");
    if (!(delta > 0.0)) {
        delta = 0.0;
        for (std::size_t c = 0; c < field.components(); ++c) delta = std::max(delta, resolution_delta(field, c));
        if (delta == 0.0) delta = std::numeric_limits<double>::min();
    }
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < field.grid.size(); ++p)
        if (near_level(field, p, x, delta)) out.push_back(p);
    return out;
}

std::vector<std::size_t> level_set(const FieldGrid& field, double x, double delta) {
    const std::vector<double> xs(field.components(), x);
    return level_set(field, xs, delta);
}

std::vector<std::vector<double>> grid_points(const GridSpec& grid, std::span<const std::size_t> flat) {
    std::vector<std::vector<double>> out;
    out.reserve(flat.size());
    for (std::size_t p : flat) out.push_back(grid.point(p));
    return out;
}

DimensionEstimate box_count_dimension(const std::vector<std::vector<double>>& points, const Region& bounds,
                                      BoxMetric metric, const std::vector<int>& levels, const HurstVector* H) {
    if (levels.size() < 3) fail(ErrorKind::too_few_scales, "box counting needs at least 3 scales");
    if (points.empty()) fail(ErrorKind::empty_region, "box counting: empty point set");
    const std::size_t N = bounds.lower.size();
    require(bounds.upper.size() == N, "box counting: malformed bounds");
    if (metric == BoxMetric::rho) require(H != nullptr && H->size() == N, "rho box counting needs H");
    double L = 0.0;
    for (std::size_t l = 0; l < N; ++l) L = std::max(L, bounds.upper[l] - bounds.lower[l]);
    require(L > 0.0, "box counting: degenerate bounds");
    DimensionEstimate est;
    est.levels = levels;
    est.low_confidence = points.size() < 100;
    std::vector<double> xs;
    std::vector<std::uint64_t> keys(points.size());
    for (int m : levels) {
        std::vector<double> side(N);
        for (std::size_t l = 0; l < N; ++l)
            side[l] = metric == BoxMetric::euclidean ? std::ldexp(L, -m) : std::exp2(-m / (*H)[l]);
        for (std::size_t i = 0; i < points.size(); ++i) {
            require(points[i].size() == N, "box counting: point dimension mismatch");
            std::uint64_t key = 0;
            for (std::size_t l = 0; l < N; ++l) {
                const double span = bounds.upper[l] - bounds.lower[l];
                const auto nb = static_cast<std::uint64_t>(std::max(1.0, std::ceil(span / side[l] - 1e-9)));
                auto b = static_cast<std::int64_t>(std::floor((points[i][l] - bounds.lower[l]) / side[l]));
                b = std::clamp<std::int64_t>(b, 0, static_cast<std::int64_t>(nb) - 1);
                key = key * nb + static_cast<std::uint64_t>(b);
            }
            keys[i] = key;
        }
        std::sort(keys.begin(), keys.end());
        const auto count = static_cast<double>(std::unique(keys.begin(), keys.end()) - keys.begin());
        est.box_counts.push_back(count);
        xs.push_back(metric == BoxMetric::euclidean ? m * std::log(2.0) - std::log(L) : m * std::log(2.0));
    }
    const std::size_t a = levels.size() >= 5 ? 1 : 0, b = levels.size() >= 5 ? levels.size() - 1 : levels.size();
    std::vector<double> fx(xs.begin() + static_cast<std::ptrdiff_t>(a), xs.begin() + static_cast<std::ptrdiff_t>(b));
    std::vector<double> fy;
    for (std::size_t i = a; i < b; ++i) fy.push_back(std::log(est.box_counts[i]));
    const auto fit = least_squares(fx, fy);
    est.slope = fit.slope;
    est.intercept = fit.intercept;
    est.r_squared = fit.r_squared;
    const int mfine = levels[b - 1], mcoarse = levels[a];
    est.min_box = metric == BoxMetric::euclidean ? std::ldexp(L, -mfine) : std::exp2(-mfine / (*H)[0]);
    est.max_box = metric == BoxMetric::euclidean ? std::ldexp(L, -mcoarse) : std::exp2(-mcoarse / (*H)[0]);
    return est;
}

double rho_covering_count(const Region& region, const HurstVector& H, int n) {
    require(region.lower.size() == H.size(), "covering count: dimension mismatch");
    double count = 1.0;
    for (std::size_t l = 0; l < H.size(); ++l) {
        const double side = std::exp2(-n / H[l]);
        count *= std::max(1.0, std::ceil((region.upper[l] - region.lower[l]) / side - 1e-9));
    }
    return count;
}

CoveringExponent rho_covering_exponent(const Region& region, const HurstVector& H, const std::vector<int>& levels) {
    if (levels.size() < 2) fail(ErrorKind::too_few_scales, "covering exponent needs at least 2 levels");
    CoveringExponent c;
    c.Q = H.metric_dimension();
    c.levels = levels;
    std::vector<double> x, y;
    for (int n : levels) {
        c.counts.push_back(rho_covering_count(region, H, n));
        x.push_back(n * std::log(2.0));
        y.push_back(std::log(c.counts.back()));
    }
    c.exponent = least_squares(x, y).slope;
    return c;
}

InverseImageDimension dim_inverse_image_formula(const HurstVector& Hin, int d, double dimF) {
    if (d < 1 || !(dimF >= 0.0 && dimF <= d))
        fail(ErrorKind::invalid_input, "inverse image dimension needs d >= 1 and 0 <= dimF <= d");
    const HurstVector H = Hin.sorted();
    const std::size_t N = H.size();
    const double gap = d - dimF;
    InverseImageDimension r;
    if (H.metric_dimension() <= gap) {
        r.in_regime = false;
        r.value = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    r.value = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= N; ++k) {
        double v = 0.0;
        for (std::size_t j = 0; j < k; ++j) v += H[k - 1] / H[j];
        v += static_cast<double>(N - k) - H[k - 1] * gap;
        if (v < r.value - 1e-15) {
            r.value = v;
            r.argmin_k = static_cast<int>(k);
        }
    }
    double below = 0.0;
    for (int j = 0; j + 1 < r.argmin_k; ++j) below += 1.0 / H[j];
    const double upto = below + 1.0 / H[r.argmin_k - 1];
    r.sandwich = below <= gap && gap < upto;
    return r;
}

BetaTau beta_tau(const HurstVector& Hin, int d) {
    require(d >= 1, "beta_tau needs d >= 1");
    const HurstVector H = Hin.sorted();
    if (H.metric_dimension() <= d)
        fail(ErrorKind::no_local_time, "sum of 1/H_l must exceed d for local times to exist");
    BetaTau bt;
    double acc = 0.0;
    for (std::size_t k = 1; k <= H.size(); ++k) {
        acc += 1.0 / H[k - 1];
        if (d < acc) {
            bt.tau = static_cast<int>(k);
            break;
        }
    }
    const std::size_t tau = static_cast<std::size_t>(bt.tau);
    for (std::size_t l = 0; l < tau; ++l) bt.beta += H[tau - 1] / H[l];
    bt.beta += static_cast<double>(H.size() - tau) - H[tau - 1] * d;
    return bt;
}

LocalTimeHolderReport localtime_holder_report(const std::vector<FieldGrid>& fields, const Region& base,
                                              const HurstVector& Hin, double alpha, int d, int levels,
                                              std::size_t bins, double epsilon, double tolerance) {
    if (alpha < 1.0 || alpha > 2.0) fail(ErrorKind::invalid_input, "local time Holder report needs alpha in [1, 2]");
    require(!fields.empty(), "local time Holder report needs fields");
    require(d == 1, "local time Holder report is implemented for scalar fields");
    const HurstVector H = Hin.sorted();
    const auto bt = beta_tau(H, d);
    LocalTimeHolderReport r;
    r.tau = bt.tau;
    r.epsilon = epsilon;
    r.tolerance = tolerance;
    for (std::size_t l = 0; l < H.size(); ++l) {
        const double e = static_cast<int>(l) < bt.tau ? 1.0 - H[l] * d / static_cast<double>(bt.tau) : 1.0;
        r.predicted_exponents.push_back(e);
        r.predicted_sum += e;
    }
    r.threshold = (1.0 - epsilon) * r.predicted_sum - tolerance;
    std::vector<double> x, y;
    for (int m = 0; m < levels; ++m) {
        const double scale = std::ldexp(1.0, -m);
        Region I = base;
        bool usable = true;
        for (std::size_t l = 0; l < base.lower.size(); ++l) {
            I.upper[l] = base.lower[l] + scale * (base.upper[l] - base.lower[l]);
            const double sp = fields[0].grid.spacing(l);
            if (sp > 0.0 && (I.upper[l] - I.lower[l]) / sp < 7.5) usable = false;
        }
        if (!usable) break;
        double acc = 0.0;
        for (const auto& f : fields) {
            const auto od = occupation_density(f, I, bins);
            acc += std::log(*std::max_element(od.density.begin(), od.density.end()));
        }
        r.r.push_back(scale);
        r.mean_log_max.push_back(acc / static_cast<double>(fields.size()));
        x.push_back(std::log(scale));
        y.push_back(r.mean_log_max.back());
    }
    if (x.size() < 3) fail(ErrorKind::too_small_grid, "local time Holder report: fewer than 3 usable rectangles");
    const auto fit = least_squares(x, y);
    r.fitted_slope = fit.slope;
    r.r_squared = fit.r_squared;
    r.pass = r.fitted_slope >= r.threshold;
    return r;
}

ModulusEnvelope modulus_envelope(const std::vector<FieldGrid>& fields, const HurstVector& H, double alpha,
                                 int levels, std::size_t component) {
    require(!fields.empty() && levels >= 1, "modulus envelope needs fields and levels");
    const GridSpec& g = fields[0].grid;
    const std::size_t N = g.N();
    require(H.size() == N, "modulus envelope: dimension mismatch");
    const double power = 1.0 / alpha + 0.1;
    ModulusEnvelope env;
    for (int m = levels - 1; m >= 0; --m) {
        const std::size_t h = std::size_t{1} << m;
        double best = 0.0;
        // Lag directions: each axis, then the diagonal.
        for (std::size_t dir = 0; dir <= N; ++dir) {
            std::vector<std::size_t> step(N, 0);
            if (dir < N)
                step[dir] = h;
            else
                std::fill(step.begin(), step.end(), h);
            std::vector<double> dt(N);
            bool fits = true;
            for (std::size_t l = 0; l < N; ++l) {
                dt[l] = static_cast<double>(step[l]) * g.spacing(l);
                fits = fits && step[l] < g.shape[l];
            }
            if (!fits) continue;
            const std::vector<double> zero(N, 0.0);
            const double rh = rho(zero, dt, H);
            if (!(rh > 0.0 && rh < 1.0)) continue;
            const double denom = rh * std::pow(-std::log(rh), power);
            std::size_t offset = 0;
            for (std::size_t l = 0; l < N; ++l) offset += step[l] * stride_of(g, l);
            for (const auto& f : fields) {
                const auto vals = f.component(component);
                std::vector<std::size_t> idx(N, 0);
                for (std::size_t p = 0; p < g.size(); ++p) {
                    std::size_t rem = p;
                    bool inside = true;
                    for (std::size_t l = N; l-- > 0;) {
                        idx[l] = rem % g.shape[l];
                        rem /= g.shape[l];
                        inside = inside && idx[l] + step[l] < g.shape[l];
                    }
                    if (inside) best = std::max(best, std::abs(vals[p + offset] - vals[p]) / denom);
                }
            }
        }
        env.lags.push_back(static_cast<double>(h));
        env.max_ratio.push_back(best);
    }
    env.non_increasing = true;
    for (std::size_t i = 1; i < env.max_ratio.size(); ++i)
        env.non_increasing = env.non_increasing && env.max_ratio[i] <= 1.1 * env.max_ratio[i - 1];
    return env;
}

Region scale_region(const Region& I, const HurstVector& H, double n_scale) {
    require(I.lower.size() == H.size(), "scale_region: dimension mismatch");
    Region J = I;
    for (std::size_t l = 0; l < H.size(); ++l) {
        const double f = std::pow(n_scale, 1.0 / H[l]);
        J.lower[l] *= f;
        J.upper[l] *= f;
    }
    return J;
}

LocalTimeScaling localtime_scaling_check(
    const std::function<FieldGrid(const GridSpec&, std::size_t replication)>& make_field, std::size_t seeds,
    const HurstVector& H, double alpha, int d, const Region& I, double n_scale, double x, double delta,
    std::size_t shape, double M) {
    if (alpha < 1.0 || alpha > 2.0) fail(ErrorKind::invalid_input, "local time scaling needs alpha in [1, 2]");
    require(n_scale >= 1.0, "local time scaling needs n_scale >= 1");
    require(d == 1, "local time scaling is implemented for scalar fields");
    require(delta > 0.0 && shape >= 2 && seeds >= 2, "local time scaling: invalid delta, shape or seed count");
    beta_tau(H, d);
    const Region J = scale_region(I, H, n_scale);
    for (std::size_t l = 0; l < H.size(); ++l)
        if (J.lower[l] < -M || J.upper[l] > M)
            fail(ErrorKind::bounds_exceeded, "scaled rectangle leaves the synthesizable region");
    const std::size_t N = H.size();
    LocalTimeScaling r;
    r.exponent = static_cast<double>(N) * d - H.metric_dimension();
    r.factor = std::pow(n_scale, r.exponent);
    const double level_scale = std::pow(n_scale, static_cast<double>(N));
    const GridSpec gI = make_grid(std::vector<std::size_t>(N, shape), I.lower, I.upper);
    const GridSpec gJ = make_grid(std::vector<std::size_t>(N, shape), J.lower, J.upper);
    for (std::size_t rep = 0; rep < seeds; ++rep) {
        const FieldGrid a = make_field(gI, rep);
        r.base.push_back(local_time_at(a, full_region(gI), x, delta));
        const FieldGrid b = make_field(gJ, seeds + rep);
        r.scaled.push_back(r.factor * local_time_at(b, full_region(gJ), level_scale * x, level_scale * delta));
    }
    r.ks = ks_two_sample(r.base, r.scaled);
    r.pass = r.ks.p_value > 0.01;
    return r;
}

}  // namespace hfss
