// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hfss/fractional_kernel.hpp"
#include "hfss/hurst.hpp"
#include "hfss/lepage.hpp"

namespace hfss {

inline constexpr const char* software_version = "1.0.0";

// Rectangular grid; axis l has shape[l] points evenly spaced on [lower[l], upper[l]].
struct GridSpec {
    std::vector<std::size_t> shape;
    std::vector<double> lower, upper;

    std::size_t N() const { return shape.size(); }
    std::size_t size() const;
    double coordinate(std::size_t l, std::size_t i) const;
    double spacing(std::size_t l) const;
    std::vector<double> axis(std::size_t l) const;
    // Row-major flat index to coordinates.
    std::vector<double> point(std::size_t flat) const;
};

GridSpec make_grid(std::vector<std::size_t> shape, std::vector<double> lower, std::vector<double> upper);

enum class SynthesisEngine {
    wavelet,  // U_n^* over D_{n,M}^N from tabulated psi^v
    periodized,  // level-n wavelet series with k summed over Z, closed form per atom
    direct,  // truncated LePage sum of the harmonizable kernel
};

std::string to_string(SynthesisEngine e);
SynthesisEngine parse_engine(const std::string& name);

struct SynthesisOptions {
    SynthesisEngine engine = SynthesisEngine::wavelet;
    std::size_t atom_count = default_atom_count;
    double theta = default_theta;
    // alpha = 2 on the wavelet engine: i.i.d. coefficients (default) or the
    // Gaussian-weighted atoms shared with the other engines.
    bool gaussian_iid = true;
    int threads = 1;
};

struct FieldMeta {
    HurstVector H;
    double alpha = 2.0;
    int n = 6;
    double M = 2.0;
    std::uint64_t seed = 0;
    std::size_t atom_count = 0;
    double theta = default_theta;
    std::size_t d = 1;
    std::string engine = "wavelet";
    std::string law = "lepage";
    std::string version = software_version;
    std::string run_id;
};

struct FieldGrid {
    GridSpec grid;
    FieldMeta meta;
    std::vector<double> values;  // component-major, row-major within a component

    std::size_t N() const { return grid.N(); }
    std::size_t components() const { return meta.d; }
    std::span<const double> component(std::size_t c) const { return {values.data() + c * grid.size(), grid.size()}; }
    std::span<double> component(std::size_t c) { return {values.data() + c * grid.size(), grid.size()}; }
};

// Seed of component c: the master seed itself when d = 1, otherwise derived
// from (seed, component label, c).
std::uint64_t component_seed(std::uint64_t seed, std::size_t c, std::size_t d);

// Shared, lazily built psi^v table covering D_{n,M}.
const FractionalTable& cached_table(double v, double alpha, int n, double M);

FieldGrid synthesize(const HurstVector& H, double alpha, const TruncationDomain& trunc, const GridSpec& grid,
                     std::uint64_t seed, std::size_t d = 1, const SynthesisOptions& options = {});

// One component from given atoms (ignored by the i.i.d. Gaussian law, which
// uses atoms.seed only).
std::vector<double> synthesize_component(const LePageAtoms& atoms, const HurstVector& H, double alpha,
                                         const TruncationDomain& trunc, const GridSpec& grid,
                                         const SynthesisOptions& options);

// Per-axis factor of the periodized engine at one atom coordinate, on the
// points xs: sum_{|j| <= n} sum_{k in Z} w_{j,k}(x) conj(psi_hat_{alpha,j,k}(lambda)).
std::vector<cplx> periodized_axis_factor(double lambda, double v, double alpha, int n, std::span<const double> xs);

struct HolderCauchyReport {
    double gamma = 0.0;
    std::vector<int> levels;                   // n; differences are U_{n+1} - U_n
    std::vector<std::vector<double>> seminorm; // [seed][level]
    std::vector<std::vector<double>> sup;      // [seed][level]
    std::vector<double> mean_seminorm, mean_sup;
    bool seminorm_decreasing = false;
    bool sup_decreasing = false;
};

// Discrete Holder-gamma seminorm on dyadic lags along each axis:
// max |f(t + h e_l) - f(t)| / h^gamma with h = 2^m grid steps.
double dyadic_holder_seminorm(std::span<const double> values, const GridSpec& grid, double gamma);

HolderCauchyReport holder_cauchy_report(const HurstVector& H, double alpha, const std::vector<int>& levels,
                                        double M, double gamma, const GridSpec& grid,
                                        const std::vector<std::uint64_t>& seeds, const SynthesisOptions& options);

}  // namespace hfss
