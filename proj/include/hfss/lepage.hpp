// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hfss/hurst.hpp"
#include "hfss/numerics.hpp"

namespace hfss {

inline constexpr std::size_t default_atom_count = 50000;
inline constexpr double default_theta = 0.5;

// Product importance density phi(lambda) = prod_l (theta/2)(1 + |lambda_l|)^{-1-theta}.
struct ImportanceDensity {
    double theta = default_theta;

    double log_density(std::span<const double> lambda) const;
    // Inverse CDF of one axis from u in (0, 1).
    double sample_axis(double u) const;
    // P(|lambda_l| <= x).
    double abs_cdf(double x) const;
};

// One realization of the LePage series ingredients.
struct LePageAtoms {
    std::uint64_t seed = 0;
    std::size_t count = 0;
    std::size_t N = 0;
    ImportanceDensity density;
    std::vector<double> gammas;    // Gamma_i, strictly increasing
    std::vector<double> points;    // V_i, row-major count x N
    std::vector<cplx> rotations;   // g_i = e^{i Theta_i}

    std::span<const double> point(std::size_t i) const { return {points.data() + i * N, N}; }
    double log_density(std::size_t i) const { return density.log_density(point(i)); }
};

LePageAtoms sample_atoms(std::uint64_t seed, std::size_t count, std::size_t N,
                         double theta = default_theta);

// m_alpha = (2 pi)^{-1} int_0^{2 pi} |cos t|^alpha dt by quadrature.
double abs_cos_moment(double alpha);
// C_alpha = (1 - alpha) / (Gamma(2 - alpha) cos(pi alpha / 2)), C_1 = 2/pi.
double stable_constant(double alpha);
// k(alpha) = (C_alpha / m_alpha)^{1/alpha}; alpha in (0, 2).
double stable_multiplier(double alpha);

// Complex per-atom weights c_i such that stochastic integrals are
// Re sum_i c_i f(V_i):
//   alpha < 2:  c_i = k(alpha) Gamma_i^{-1/alpha} g_i phi(V_i)^{-1/alpha}
//   alpha = 2:  c_i = count^{-1/2} G_i phi(V_i)^{-1/2}, with the complex Gaussian
//               G_i = 2 sqrt(Gamma_i - Gamma_{i-1}) g_i (real and imaginary parts
//               independent N(0, 2)).
std::vector<cplx> atom_weights(const LePageAtoms& atoms, double alpha);

// Size of the last retained term, k(alpha) Gamma_count^{-1/alpha}; a rough
// indicator of the truncation error of the series.
double truncation_tail_heuristic(const LePageAtoms& atoms, double alpha);

// Psi_hat_{alpha,J,K}(lambda) = prod_l psi_hat_{alpha,j_l,k_l}(lambda_l).
cplx big_psi_hat(double alpha, std::span<const int> J, std::span<const long> K,
                 std::span<const double> lambda);

// epsilon_{J,K} from the atoms (any alpha in (0, 2], Gaussian weights at 2).
cplx coefficient_from_atoms(const LePageAtoms& atoms, std::span<const int> J, std::span<const long> K,
                            double alpha);

// i.i.d. complex Gaussian coefficient, real and imaginary parts N(0, 2),
// keyed by (seed, J, K) only, so nested truncations share values.
cplx gaussian_coefficient(std::uint64_t seed, std::span<const int> J, std::span<const long> K);

// epsilon_{J,K}: LePage sum for alpha < 2, i.i.d. Gaussian for alpha = 2.
cplx coefficient(const LePageAtoms& atoms, std::span<const int> J, std::span<const long> K, double alpha);

// Truncated LePage evaluation of the field at t.
double direct_field(const LePageAtoms& atoms, std::span<const double> t, const HurstVector& H,
                    double alpha);

// Same, at many points (row-major, npoints x N); shares per-atom work.
std::vector<double> direct_field_points(const LePageAtoms& atoms, std::span<const double> points,
                                        const HurstVector& H, double alpha);

// Dyadic truncation domain D_{n,M}: |j| <= n, |k| <= M 2^{n+1}.
struct TruncationDomain {
    int n = 6;
    double M = 2.0;

    long kmax() const;
    std::size_t j_count() const { return static_cast<std::size_t>(2 * n + 1); }
    std::size_t k_count() const { return static_cast<std::size_t>(2 * kmax() + 1); }
    bool contains(int j, long k) const;
};

// Coefficients of one scale block J, all K in lexicographic order
// (k_1 slowest). `block` has k_count^N entries.
using CoefficientBlockSink = std::function<void(std::span<const int> J, std::span<const cplx> block)>;

enum class CoefficientLaw {
    lepage,          // LePage sums over the atoms (Gaussian-weighted atoms at alpha = 2)
    gaussian_iid,    // alpha = 2 only: independent draws per (J, K)
};

// Computes single scale blocks on demand. Construction indexes the atoms per
// axis and level; block() and real_block() are const and may run concurrently.
class CoefficientBlockBuilder {
public:
    CoefficientBlockBuilder(const LePageAtoms& atoms, const TruncationDomain& trunc, double alpha,
                            CoefficientLaw law);
    std::size_t block_size() const { return size_; }
    void block(std::span<const int> J, std::span<cplx> out) const;
    // Real parts only (two real GEMMs instead of one complex one at N = 2).
    void real_block(std::span<const int> J, std::span<double> out) const;

private:
    using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    struct Active {
        std::vector<std::uint32_t> atom;
        std::vector<double> theta;
        std::vector<cplx> factor;
    };
    std::vector<std::vector<std::size_t>> select(std::span<const int> J) const;
    void phase_matrices(std::span<const int> J, const std::vector<std::vector<std::size_t>>& sel, Mat& U1,
                        Mat& U2) const;

    const LePageAtoms* atoms_;
    TruncationDomain trunc_;
    double alpha_;
    CoefficientLaw law_;
    long K_ = 0;
    std::size_t size_ = 0;
    std::vector<cplx> c_;
    std::vector<std::vector<Active>> active_;
};

// Visits every J in lexicographic order (j_1 slowest). For lepage the
// blocks are accumulated over atoms in a fixed order.
void for_each_coefficient_block(const LePageAtoms& atoms, const TruncationDomain& trunc, double alpha,
                                CoefficientLaw law, const CoefficientBlockSink& sink);

struct CoefficientTensor {
    TruncationDomain truncation;
    double alpha = 2.0;
    HurstVector H;
    std::size_t N = 0;
    std::uint64_t seed = 0;
    std::size_t atom_count = 0;
    std::vector<cplx> entries;  // lexicographic (J, K)

    std::size_t index(std::span<const int> J, std::span<const long> K) const;
    cplx at(std::span<const int> J, std::span<const long> K) const { return entries[index(J, K)]; }
};

CoefficientTensor build_coefficient_tensor(const LePageAtoms& atoms, const TruncationDomain& trunc,
                                           double alpha, const HurstVector& H,
                                           CoefficientLaw law = CoefficientLaw::lepage);

struct CoefficientGrowth {
    int n = 0;
    double M = 0.0;
    double alpha = 0.0;
    double eta = 0.0;
    double max_normalized = 0.0;      // with the (1+|j|)^{1/alpha+eta} [log] normalization
    double max_normalized_eta0 = 0.0; // same normalization with eta = 0
    double max_abs = 0.0;
    std::vector<int> argmax_J;
    std::vector<long> argmax_K;
};

// max over D_{n,M}^N of |eps_{J,K}| / prod_l (1+|j_l|)^{1/alpha+eta}, times
// prod_l sqrt(log(2+|j_l|) log(2+|k_l|)) in the denominator when alpha >= 1.
CoefficientGrowth coefficient_growth_report(const LePageAtoms& atoms, int n, double M, double alpha,
                                            double eta);

}  // namespace hfss
