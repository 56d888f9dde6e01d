// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hfss/hurst.hpp"
#include "hfss/synthesis.hpp"

namespace hfss {

// rho(s, t) = sum_l |s_l - t_l|^{H_l}.
double rho(std::span<const double> s, std::span<const double> t, const HurstVector& H);

struct StableScaleEstimate {
    double sigma_hat = 0.0;
    double alpha_assumed = 0.0;
    double residual = 0.0;       // RMS of the log-ecf fit
    std::vector<double> u_grid;  // frequencies used in the fit
    bool degenerate = false;     // all samples equal
};

inline constexpr std::size_t min_ecf_samples = 1000;

// Fits -log|ecf(u)| = sigma^alpha u^alpha by least squares in sigma^alpha over
// the frequencies where |ecf| lies in [0.2, 0.9].
StableScaleEstimate estimate_stable_scale(std::span<const double> samples, double alpha);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// Kolmogorov survival function Q(x) = 2 sum_{k>=1} (-1)^{k-1} e^{-2 k^2 x^2}.
double kolmogorov_survival(double x);
KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Axis-aligned box [lower, upper] selecting grid points (inclusive).
struct Region {
    std::vector<double> lower, upper;
};

Region full_region(const GridSpec& grid);
// Flat indices of the grid points inside the region.
std::vector<std::size_t> region_points(const GridSpec& grid, const Region& region);
// Lebesgue measure of one grid cell (axes with one point count as 1).
double cell_volume(const GridSpec& grid);

struct ScaleComparability {
    std::vector<double> sigma_hat, rho, ratio;
    double ratio_min = 0.0, ratio_max = 0.0, spread = 0.0;
};

// increments[p] holds realizations of Z(s_p) - Z(t_p).
ScaleComparability scale_comparability_report(const std::vector<std::vector<double>>& increments,
                                              const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs,
                                              const HurstVector& H, double alpha);

struct HolderAxisEstimate {
    double slope = 0.0;                 // mean over lines
    std::vector<double> lags;           // h (coordinate units)
    std::vector<double> median_increment;  // pooled over lines, for reporting
    std::size_t lines = 0;
};

// Median |increment| at dyadic lags along one axis, log-log slope per line,
// averaged over lines. Needs >= 256 points along the axis and >= 4 lags.
HolderAxisEstimate holder_axis_exponent(const FieldGrid& field, std::size_t axis, std::size_t component = 0);

struct OccupationDensity {
    std::vector<double> bin_edges;
    std::vector<double> density;  // L(x, T) per bin
    double cell_volume = 0.0;
    double region_measure = 0.0;  // number of points x cell volume
    std::size_t points = 0;

    // Sum of density x bin width; equals region_measure up to round-off.
    double total() const;
    // Density of the bin containing x (0 outside the edges).
    double at(double x) const;
};

// Histogram of the values in the region weighted by cell volume. With
// lo < hi the bins span [lo, hi] (values outside are dropped from the
// density but still counted in region_measure); otherwise they span the
// observed range.
OccupationDensity occupation_density(const FieldGrid& field, const Region& region, std::size_t bins,
                                     std::size_t component = 0, double lo = 0.0, double hi = 0.0);

// Median |nearest-neighbour increment| over all axes: the resolution-matched
// level-set thickness.
double resolution_delta(const FieldGrid& field, std::size_t component = 0);

// Local time estimate #{t in T : |X(t) - x|_inf < delta} cell / (2 delta)^d
// over all d components; x has one entry per component.
double local_time_at(const FieldGrid& field, const Region& region, std::span<const double> x, double delta);
double local_time_at(const FieldGrid& field, const Region& region, double x, double delta);

// Flat indices t with |X(t) - x|_inf < delta over all components; delta <= 0
// selects the resolution-matched thickness (largest over components).
std::vector<std::size_t> level_set(const FieldGrid& field, std::span<const double> x, double delta = 0.0);
std::vector<std::size_t> level_set(const FieldGrid& field, double x, double delta = 0.0);

enum class BoxMetric { euclidean, rho };

struct DimensionEstimate {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double min_box = 0.0, max_box = 0.0;  // side lengths (first axis for rho)
    std::vector<int> levels;
    std::vector<double> box_counts;
    bool low_confidence = false;  // fewer than 100 points
};

// Occupied boxes per dyadic level m: euclidean boxes of side 2^{-m} L (L the
// longest side of the bounds) regressed against m log 2 + log(1/L); rho boxes
// of sides 2^{-m/H_j} regressed against m log 2. With five or more levels the
// finest and coarsest are dropped from the fit.
DimensionEstimate box_count_dimension(const std::vector<std::vector<double>>& points, const Region& bounds,
                                      BoxMetric metric, const std::vector<int>& levels, const HurstVector* H = nullptr);

// Grid points (flat indices) as coordinates.
std::vector<std::vector<double>> grid_points(const GridSpec& grid, std::span<const std::size_t> flat);

// Number of rho-boxes with sides 2^{-n/H_j} needed to cover the region.
double rho_covering_count(const Region& region, const HurstVector& H, int n);

struct CoveringExponent {
    double exponent = 0.0;
    double Q = 0.0;
    std::vector<int> levels;
    std::vector<double> counts;
};

CoveringExponent rho_covering_exponent(const Region& region, const HurstVector& H, const std::vector<int>& levels);

struct InverseImageDimension {
    double value = 0.0;        // NaN outside the regime sum 1/H_j > d - dimF
    int argmin_k = 0;          // 1-based
    bool sandwich = false;     // sum_{j<k} 1/H_j <= d - dimF < sum_{j<=k} 1/H_j
    bool in_regime = true;
};

InverseImageDimension dim_inverse_image_formula(const HurstVector& H, int d, double dimF);

struct BetaTau {
    int tau = 0;
    double beta = 0.0;
};

BetaTau beta_tau(const HurstVector& H, int d);

struct LocalTimeHolderReport {
    int tau = 0;
    std::vector<double> predicted_exponents;
    double predicted_sum = 0.0;
    double fitted_slope = 0.0;
    double r_squared = 0.0;
    double epsilon = 0.1, tolerance = 0.2;
    double threshold = 0.0;  // (1 - epsilon) predicted_sum - tolerance
    std::vector<double> r;   // side scale factors
    std::vector<double> mean_log_max;
    bool pass = false;
};

// Regresses the ensemble mean of log max_x L(x, I_r) on log r for the
// rectangles I_r = [a, a + r (b - a)], r = 2^{-m}; the density in each region
// uses `bins` equal bins over that region's value range.
LocalTimeHolderReport localtime_holder_report(const std::vector<FieldGrid>& fields, const Region& base,
                                              const HurstVector& H, double alpha, int d, int levels,
                                              std::size_t bins = 16, double epsilon = 0.1, double tolerance = 0.2);

struct ModulusEnvelope {
    std::vector<double> lags;   // in grid steps
    std::vector<double> max_ratio;
    bool non_increasing = false;  // each level within 10 % of the previous or below it
};

// max |Z(s) - Z(t)| / [rho(s,t) |log rho(s,t)|^{1/alpha + 0.1}] over pairs at
// dyadic lags along each axis and the diagonal, per lag (finest last).
ModulusEnvelope modulus_envelope(const std::vector<FieldGrid>& fields, const HurstVector& H, double alpha,
                                 int levels, std::size_t component = 0);

struct LocalTimeScaling {
    double exponent = 0.0;  // N d - Q
    double factor = 0.0;    // n^{N d - Q}
    std::vector<double> base, scaled;  // L(x, I) and n^{Nd-Q} L(n^N x, n^E I)
    KsResult ks;
    bool pass = false;
};

// Scaled rectangle n^E I, E = diag(1/H_l).
Region scale_region(const Region& I, const HurstVector& H, double n_scale);

// Two-sample comparison of L(x, I) against n^{Nd-Q} L(n^N x, n^E I). Each
// sample is estimated on a shape^N grid over its rectangle with delta and
// delta n^N respectively, so the discrete estimator is scale-covariant.
// `make_field(region, replication, grid)` synthesizes one scalar field.
LocalTimeScaling localtime_scaling_check(
    const std::function<FieldGrid(const GridSpec&, std::size_t replication)>& make_field, std::size_t seeds,
    const HurstVector& H, double alpha, int d, const Region& I, double n_scale, double x, double delta,
    std::size_t shape, double M);

}  // namespace hfss
