// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#include "hfss/lepage.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "hfss/error.hpp"
#include "hfss/fractional_kernel.hpp"
#include "hfss/meyer_wavelet.hpp"
#include "hfss/rng.hpp"

namespace hfss {

double ImportanceDensity::log_density(std::span<const double> lambda) const {
    double acc = 0.0;
    for (double x : lambda) acc += std::log(0.5 * theta) - (1.0 + theta) * std::log1p(std::abs(x));
    return acc;
}

double ImportanceDensity::sample_axis(double u) const {
    const double v = 2.0 * u - 1.0;
    const double mag = std::pow(1.0 - std::abs(v), -1.0 / theta) - 1.0;
    return v < 0.0 ? -mag : mag;
}

double ImportanceDensity::abs_cdf(double x) const { return 1.0 - std::pow(1.0 + x, -theta); }

LePageAtoms sample_atoms(std::uint64_t seed, std::size_t count, std::size_t N, double theta) {
    require(count >= 1, "sample_atoms: count must be at least 1");
    require(N >= 1, "sample_atoms: dimension must be at least 1");
    require(theta > 0.0, "sample_atoms: theta must be positive");
    LePageAtoms atoms;
    atoms.seed = seed;
    atoms.count = count;
    atoms.N = N;
    atoms.density.theta = theta;
    atoms.gammas.resize(count);
    atoms.points.resize(count * N);
    atoms.rotations.resize(count);

    // Block layout per atom: one block for (exponential, angle), then one
    // block per pair of axes.
    const CounterStream stream(derive_seed(seed, StreamLabel::atoms, 0));
    const std::size_t per_atom = 1 + (N + 1) / 2;
    double gamma = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t b = i * per_atom;
        const auto u = stream.uniforms(b);
        gamma += -std::log(u[0]);
        atoms.gammas[i] = gamma;
        atoms.rotations[i] = std::polar(1.0, two_pi * u[1]);
        for (std::size_t l = 0; l < N; l += 2) {
            const auto w = stream.uniforms(b + 1 + l / 2);
            atoms.points[i * N + l] = atoms.density.sample_axis(w[0]);
            if (l + 1 < N) atoms.points[i * N + l + 1] = atoms.density.sample_axis(w[1]);
        }
    }
    return atoms;
}

double abs_cos_moment(double alpha) {
    require(alpha > 0.0, "abs_cos_moment: alpha must be positive");
    boost::math::quadrature::tanh_sinh<double> ts;
    const double q = ts.integrate([alpha](double t) { return std::pow(std::cos(t), alpha); }, 0.0, 0.5 * pi, 1e-15);
    return 2.0 * q / pi;
}

double stable_constant(double alpha) {
    require(alpha > 0.0 && alpha < 2.0, "stable_constant: alpha must lie in (0, 2)");
    if (alpha == 1.0) return 2.0 / pi;
    return (1.0 - alpha) / (std::tgamma(2.0 - alpha) * std::cos(0.5 * pi * alpha));
}

double stable_multiplier(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0))
        fail(ErrorKind::invalid_input, "stable_multiplier: alpha must lie in (0, 2); alpha = 2 uses Gaussian weights");
    return std::pow(stable_constant(alpha) / abs_cos_moment(alpha), 1.0 / alpha);
}

std::vector<cplx> atom_weights(const LePageAtoms& atoms, double alpha) {
    check_alpha(alpha);
    std::vector<cplx> c(atoms.count);
    if (alpha == 2.0) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(atoms.count));
        double prev = 0.0;
        for (std::size_t i = 0; i < atoms.count; ++i) {
            const double e = atoms.gammas[i] - prev;
            prev = atoms.gammas[i];
            const double amp = scale * 2.0 * std::sqrt(e) * std::exp(-0.5 * atoms.log_density(i));
            c[i] = amp * atoms.rotations[i];
        }
        return c;
    }
    const double k = stable_multiplier(alpha);
    for (std::size_t i = 0; i < atoms.count; ++i) {
        const double amp = k * std::exp(-(std::log(atoms.gammas[i]) + atoms.log_density(i)) / alpha);
        c[i] = amp * atoms.rotations[i];
    }
    return c;
}

double truncation_tail_heuristic(const LePageAtoms& atoms, double alpha) {
    check_alpha(alpha);
    if (alpha == 2.0) return 2.0 / std::sqrt(static_cast<double>(atoms.count));
    return stable_multiplier(alpha) * std::pow(atoms.gammas.back(), -1.0 / alpha);
}

cplx big_psi_hat(double alpha, std::span<const int> J, std::span<const long> K, std::span<const double> lambda) {
    require(J.size() == K.size() && J.size() == lambda.size(), "big_psi_hat: dimension mismatch");
    cplx acc(1.0, 0.0);
    for (std::size_t l = 0; l < J.size(); ++l) {
        acc *= psi_hat_ajk(alpha, J[l], K[l], lambda[l]);
        if (acc == cplx(0.0, 0.0)) break;
    }
    return acc;
}

cplx coefficient_from_atoms(const LePageAtoms& atoms, std::span<const int> J, std::span<const long> K,
                            double alpha) {
    require(J.size() == atoms.N && K.size() == atoms.N, "coefficient: index dimension mismatch");
    const auto c = atom_weights(atoms, alpha);
    CompensatedComplexSum acc;
    for (std::size_t i = 0; i < atoms.count; ++i) {
        const cplx p = big_psi_hat(alpha, J, K, atoms.point(i));
        if (p != cplx(0.0, 0.0)) acc.add(c[i] * std::conj(p));
    }
    return acc.value();
}

namespace {

std::uint64_t index_counter(std::span<const int> J, std::span<const long> K) {
    std::uint64_t h = 0x243F6A8885A308D3ull;
    for (std::size_t l = 0; l < J.size(); ++l) {
        h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(J[l])));
        h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(K[l])));
    }
    return h;
}

}  // namespace

cplx gaussian_coefficient(std::uint64_t seed, std::span<const int> J, std::span<const long> K) {
    const CounterStream stream(derive_seed(seed, StreamLabel::gaussian_coefficients, 0));
    const auto z = stream.normals(index_counter(J, K));
    return {std::sqrt(2.0) * z[0], std::sqrt(2.0) * z[1]};
}

cplx coefficient(const LePageAtoms& atoms, std::span<const int> J, std::span<const long> K, double alpha) {
    check_alpha(alpha);
    if (alpha == 2.0) return gaussian_coefficient(atoms.seed, J, K);
    return coefficient_from_atoms(atoms, J, K, alpha);
}

double direct_field(const LePageAtoms& atoms, std::span<const double> t, const HurstVector& H, double alpha) {
    return direct_field_points(atoms, t, H, alpha)[0];
}

std::vector<double> direct_field_points(const LePageAtoms& atoms, std::span<const double> points,
                                        const HurstVector& H, double alpha) {
    const std::size_t N = atoms.N;
    require(H.size() == N, "direct_field: Hurst vector dimension mismatch");
    require(points.size() % N == 0 && !points.empty(), "direct_field: points must be npoints x N");
    const std::size_t np = points.size() / N;
    const auto c = atom_weights(atoms, alpha);
    std::vector<CompensatedSum> acc(np);
    std::vector<double> amp(N);
    for (std::size_t i = 0; i < atoms.count; ++i) {
        const auto lam = atoms.point(i);
        bool zero = false;
        for (std::size_t l = 0; l < N; ++l) {
            if (lam[l] == 0.0) zero = true;
            amp[l] = std::pow(std::abs(lam[l]), -H[l] - 1.0 / alpha);
        }
        if (zero) continue;
        for (std::size_t p = 0; p < np; ++p) {
            cplx f = c[i];
            for (std::size_t l = 0; l < N; ++l) {
                const double th = points[p * N + l] * lam[l];
                const double s = std::sin(0.5 * th);
                f *= amp[l] * cplx(-2.0 * s * s, std::sin(th));
            }
            acc[p].add(f.real());
        }
    }
    std::vector<double> out(np);
    for (std::size_t p = 0; p < np; ++p) out[p] = acc[p].value();
    return out;
}

long TruncationDomain::kmax() const {
    return static_cast<long>(std::floor(M * std::ldexp(1.0, n + 1) + 1e-9));
}

bool TruncationDomain::contains(int j, long k) const { return std::abs(j) <= n && std::abs(k) <= kmax(); }

namespace {

// Advance a lexicographic odometer over [lo, hi]^N; returns false after the last.
template <class T>
bool next_index(std::vector<T>& idx, T lo, T hi) {
    for (std::size_t l = idx.size(); l-- > 0;) {
        if (idx[l] < hi) {
            ++idx[l];
            return true;
        }
        idx[l] = lo;
    }
    return false;
}

// e^{i k theta} for k = -K..K, by rotation with periodic reseeding.
void fill_phases(double theta, long K, cplx scale, cplx* out) {
    const cplx rot = std::polar(1.0, theta);
    cplx z;
    for (long k = -K, m = 0; k <= K; ++k, ++m) {
        if (m % 64 == 0)
            z = scale * std::polar(1.0, static_cast<double>(k) * theta);
        else
            z *= rot;
        out[m] = z;
    }
}

}  // namespace

CoefficientBlockBuilder::CoefficientBlockBuilder(const LePageAtoms& atoms, const TruncationDomain& trunc,
                                                 double alpha, CoefficientLaw law)
    : atoms_(&atoms), trunc_(trunc), alpha_(alpha), law_(law) {
    check_alpha(alpha);
    require(trunc.n >= 0 && trunc.M > 0.0, "truncation domain needs n >= 0 and M > 0");
    K_ = trunc.kmax();
    size_ = 1;
    for (std::size_t l = 0; l < atoms.N; ++l) size_ *= trunc.k_count();
    if (law == CoefficientLaw::gaussian_iid) {
        require(alpha == 2.0, "i.i.d. Gaussian coefficients require alpha = 2");
        return;
    }
    c_ = atom_weights(atoms, alpha);
    // Per axis and level: atoms whose coordinate falls in the dilated ring,
    // with theta = 2^{-j} lambda and the factor 2^{-j/alpha} conj psi_hat(theta).
    const std::size_t N = atoms.N;
    active_.assign(N, std::vector<Active>(trunc.j_count()));
    for (std::size_t l = 0; l < N; ++l)
        for (int j = -trunc.n; j <= trunc.n; ++j) {
            auto& a = active_[l][j + trunc.n];
            for (std::size_t i = 0; i < atoms.count; ++i) {
                const double th = std::ldexp(atoms.points[i * N + l], -j);
                const cplx p = psi_hat(th);
                if (p == cplx(0.0, 0.0)) continue;
                a.atom.push_back(static_cast<std::uint32_t>(i));
                a.theta.push_back(th);
                a.factor.push_back(std::exp2(-j / alpha) * std::conj(p));
            }
        }
}

std::vector<std::vector<std::size_t>> CoefficientBlockBuilder::select(std::span<const int> J) const {
    // Intersect the per-axis active lists (all sorted by atom index).
    const std::size_t N = atoms_->N;
    std::vector<std::vector<std::size_t>> sel(N);
    const auto& first = active_[0][J[0] + trunc_.n];
    std::vector<std::size_t> where(N);
    for (std::size_t p0 = 0; p0 < first.atom.size(); ++p0) {
        const std::uint32_t i = first.atom[p0];
        bool ok = true;
        where[0] = p0;
        for (std::size_t l = 1; l < N && ok; ++l) {
            const auto& a = active_[l][J[l] + trunc_.n].atom;
            auto it = std::lower_bound(a.begin(), a.end(), i);
            if (it == a.end() || *it != i)
                ok = false;
            else
                where[l] = static_cast<std::size_t>(it - a.begin());
        }
        if (!ok) continue;
        for (std::size_t l = 0; l < N; ++l) sel[l].push_back(where[l]);
    }
    return sel;
}

void CoefficientBlockBuilder::block(std::span<const int> J, std::span<cplx> out) const {
    const std::size_t N = atoms_->N;
    require(J.size() == N && out.size() == size_, "coefficient block: size mismatch");
    const long K = K_;
    const auto Kc = static_cast<Eigen::Index>(2 * K + 1);
    std::vector<long> Kidx(N, -K);
    if (law_ == CoefficientLaw::gaussian_iid) {
        std::size_t m = 0;
        do out[m++] = gaussian_coefficient(atoms_->seed, J, Kidx);
        while (next_index(Kidx, -K, K));
        return;
    }
    std::fill(out.begin(), out.end(), cplx(0.0, 0.0));
    const auto sel = select(J);
    const auto m = static_cast<Eigen::Index>(sel[0].size());
    if (m == 0) return;
    if (N == 1) {
        const auto& a = active_[0][J[0] + trunc_.n];
        std::vector<cplx> ph(Kc);
        for (Eigen::Index q = 0; q < m; ++q) {
            const std::size_t p = sel[0][q];
            fill_phases(a.theta[p], K, c_[a.atom[p]] * a.factor[p], ph.data());
            for (Eigen::Index k = 0; k < Kc; ++k) out[k] += ph[k];
        }
    } else if (N == 2) {
        Mat U1, U2;
        phase_matrices(J, sel, U1, U2);
        Eigen::Map<Mat> res(out.data(), Kc, Kc);
        res.noalias() = U1.transpose() * U2;
    } else {
        std::vector<std::vector<cplx>> ph(N, std::vector<cplx>(Kc));
        for (Eigen::Index q = 0; q < m; ++q) {
            for (std::size_t l = 0; l < N; ++l) {
                const auto& a = active_[l][J[l] + trunc_.n];
                const std::size_t p = sel[l][q];
                fill_phases(a.theta[p], K, l == 0 ? c_[a.atom[p]] * a.factor[p] : a.factor[p], ph[l].data());
            }
            std::fill(Kidx.begin(), Kidx.end(), -K);
            std::size_t idx = 0;
            do {
                cplx v = ph[0][Kidx[0] + K];
                for (std::size_t l = 1; l < N; ++l) v *= ph[l][Kidx[l] + K];
                out[idx++] += v;
            } while (next_index(Kidx, -K, K));
        }
    }
}

void CoefficientBlockBuilder::phase_matrices(std::span<const int> J, const std::vector<std::vector<std::size_t>>& sel,
                                             Mat& U1, Mat& U2) const {
    const auto Kc = static_cast<Eigen::Index>(2 * K_ + 1);
    const auto m = static_cast<Eigen::Index>(sel[0].size());
    const auto& a1 = active_[0][J[0] + trunc_.n];
    const auto& a2 = active_[1][J[1] + trunc_.n];
    U1.resize(m, Kc);
    U2.resize(m, Kc);
    for (Eigen::Index q = 0; q < m; ++q) {
        const std::size_t p1 = sel[0][q], p2 = sel[1][q];
        fill_phases(a1.theta[p1], K_, c_[a1.atom[p1]] * a1.factor[p1], U1.row(q).data());
        fill_phases(a2.theta[p2], K_, a2.factor[p2], U2.row(q).data());
    }
}

void CoefficientBlockBuilder::real_block(std::span<const int> J, std::span<double> out) const {
    const std::size_t N = atoms_->N;
    require(J.size() == N && out.size() == size_, "coefficient block: size mismatch");
    if (N == 2 && law_ == CoefficientLaw::lepage) {
        const auto Kc = static_cast<Eigen::Index>(2 * K_ + 1);
        using RMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        Eigen::Map<RMat> res(out.data(), Kc, Kc);
        const auto sel = select(J);
        if (sel[0].empty()) {
            res.setZero();
            return;
        }
        Mat U1, U2;
        phase_matrices(J, sel, U1, U2);
        const RMat r1 = U1.real(), i1 = U1.imag(), r2 = U2.real(), i2 = U2.imag();
        res.noalias() = r1.transpose() * r2;
        res.noalias() -= i1.transpose() * i2;
        return;
    }
    std::vector<cplx> tmp(size_);
    block(J, tmp);
    for (std::size_t m = 0; m < size_; ++m) out[m] = tmp[m].real();
}

void for_each_coefficient_block(const LePageAtoms& atoms, const TruncationDomain& trunc, double alpha,
                                CoefficientLaw law, const CoefficientBlockSink& sink) {
    const CoefficientBlockBuilder builder(atoms, trunc, alpha, law);
    std::vector<cplx> block(builder.block_size());
    std::vector<int> J(atoms.N, -trunc.n);
    do {
        builder.block(J, block);
        sink(J, block);
    } while (next_index(J, -trunc.n, trunc.n));
}

std::size_t CoefficientTensor::index(std::span<const int> J, std::span<const long> K) const {
    require(J.size() == N && K.size() == N, "coefficient index dimension mismatch");
    const long Kmax = truncation.kmax();
    std::size_t jidx = 0, kidx = 0, kblock = 1;
    for (std::size_t l = 0; l < N; ++l) {
        require(truncation.contains(J[l], K[l]), "index outside the truncation domain");
        jidx = jidx * truncation.j_count() + static_cast<std::size_t>(J[l] + truncation.n);
        kidx = kidx * truncation.k_count() + static_cast<std::size_t>(K[l] + Kmax);
        kblock *= truncation.k_count();
    }
    return jidx * kblock + kidx;
}

CoefficientTensor build_coefficient_tensor(const LePageAtoms& atoms, const TruncationDomain& trunc, double alpha,
                                           const HurstVector& H, CoefficientLaw law) {
    require(H.size() == atoms.N, "coefficient tensor: Hurst vector dimension mismatch");
    CoefficientTensor t;
    t.truncation = trunc;
    t.alpha = alpha;
    t.H = H;
    t.N = atoms.N;
    t.seed = atoms.seed;
    t.atom_count = atoms.count;
    std::size_t jb = 1, kb = 1;
    for (std::size_t l = 0; l < atoms.N; ++l) jb *= trunc.j_count(), kb *= trunc.k_count();
    t.entries.resize(jb * kb);
    std::size_t offset = 0;
    for_each_coefficient_block(atoms, trunc, alpha, law, [&](std::span<const int>, std::span<const cplx> block) {
        std::copy(block.begin(), block.end(), t.entries.begin() + static_cast<std::ptrdiff_t>(offset));
        offset += block.size();
    });
    return t;
}

CoefficientGrowth coefficient_growth_report(const LePageAtoms& atoms, int n, double M, double alpha, double eta) {
    require(eta > 0.0, "coefficient growth: eta must be positive");
    const TruncationDomain trunc{n, M};
    const long K = trunc.kmax();
    const std::size_t N = atoms.N;
    CoefficientGrowth r;
    r.n = n;
    r.M = M;
    r.alpha = alpha;
    r.eta = eta;
    const bool with_logs = alpha >= 1.0;
    std::vector<double> logk(2 * K + 1);
    for (long k = -K; k <= K; ++k) logk[k + K] = with_logs ? std::sqrt(std::log(2.0 + std::abs(k))) : 1.0;
    const auto law = alpha == 2.0 ? CoefficientLaw::gaussian_iid : CoefficientLaw::lepage;
    std::vector<long> Kidx(N);
    for_each_coefficient_block(atoms, trunc, alpha, law, [&](std::span<const int> J, std::span<const cplx> block) {
        double jnorm = 1.0, jnorm0 = 1.0;
        for (std::size_t l = 0; l < N; ++l) {
            const double base = 1.0 + std::abs(J[l]);
            const double lg = with_logs ? std::sqrt(std::log(2.0 + std::abs(J[l]))) : 1.0;
            jnorm *= std::pow(base, 1.0 / alpha + eta) * lg;
            jnorm0 *= std::pow(base, 1.0 / alpha) * lg;
        }
        std::fill(Kidx.begin(), Kidx.end(), -K);
        std::size_t m = 0;
        do {
            double knorm = 1.0;
            for (std::size_t l = 0; l < N; ++l) knorm *= logk[Kidx[l] + K];
            const double a = std::abs(block[m++]);
            r.max_abs = std::max(r.max_abs, a);
            r.max_normalized_eta0 = std::max(r.max_normalized_eta0, a / (jnorm0 * knorm));
            const double v = a / (jnorm * knorm);
            if (v > r.max_normalized) {
                r.max_normalized = v;
                r.argmax_J.assign(J.begin(), J.end());
                r.argmax_K = Kidx;
            }
        } while (next_index(Kidx, -K, K));
    });
    return r;
}

}  // namespace hfss
