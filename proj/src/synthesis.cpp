// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#include "hfss/synthesis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "hfss/error.hpp"
#include "hfss/meyer_wavelet.hpp"
#include "hfss/parallel.hpp"
#include "hfss/rng.hpp"

namespace hfss {

using RMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t GridSpec::size() const {
    std::size_t s = 1;
    for (auto v : shape) s *= v;
    return s;
}

double GridSpec::spacing(std::size_t l) const {
    return shape[l] > 1 ? (upper[l] - lower[l]) / static_cast<double>(shape[l] - 1) : 0.0;
}

double GridSpec::coordinate(std::size_t l, std::size_t i) const {
    if (i + 1 == shape[l]) return upper[l];
    return lower[l] + static_cast<double>(i) * spacing(l);
}

std::vector<double> GridSpec::axis(std::size_t l) const {
    std::vector<double> xs(shape[l]);
    for (std::size_t i = 0; i < shape[l]; ++i) xs[i] = coordinate(l, i);
    return xs;
}

std::vector<double> GridSpec::point(std::size_t flat) const {
    std::vector<double> t(N());
    for (std::size_t l = N(); l-- > 0;) {
        t[l] = coordinate(l, flat % shape[l]);
        flat /= shape[l];
    }
    return t;
}

GridSpec make_grid(std::vector<std::size_t> shape, std::vector<double> lower, std::vector<double> upper) {
    require(!shape.empty(), "grid needs at least one axis");
    require(shape.size() == lower.size() && shape.size() == upper.size(), "grid shape and bounds differ in dimension");
    for (std::size_t l = 0; l < shape.size(); ++l) {
        require(shape[l] >= 1, "grid axes need at least one point");
        require(std::isfinite(lower[l]) && std::isfinite(upper[l]) && lower[l] <= upper[l],
                "grid bounds must be finite with lower <= upper");
        require(shape[l] > 1 || lower[l] == upper[l], "a one-point axis needs lower == upper");
    }
    return {std::move(shape), std::move(lower), std::move(upper)};
}

std::string to_string(SynthesisEngine e) {
    switch (e) {
        case SynthesisEngine::wavelet: return "wavelet";
        case SynthesisEngine::periodized: return "periodized";
        case SynthesisEngine::direct: return "direct";
    }
    return "wavelet";
}

SynthesisEngine parse_engine(const std::string& name) {
    if (name == "wavelet") return SynthesisEngine::wavelet;
    if (name == "periodized") return SynthesisEngine::periodized;
    if (name == "direct") return SynthesisEngine::direct;
    fail(ErrorKind::invalid_input, "unknown synthesis engine '" + name + "'");
}

std::uint64_t component_seed(std::uint64_t seed, std::size_t c, std::size_t d) {
    return d == 1 ? seed : derive_seed(seed, StreamLabel::component, c);
}

const FractionalTable& cached_table(double v, double alpha, int n, double M) {
    static std::mutex mu;
    static std::map<std::tuple<double, double, double>, std::unique_ptr<FractionalTable>> cache;
    const double Y = table_halfwidth(n, M);
    std::lock_guard<std::mutex> lock(mu);
    // A wider table for the same (v, alpha) serves every smaller domain.
    for (auto& [key, table] : cache)
        if (std::get<0>(key) == v && std::get<1>(key) == alpha && std::get<2>(key) >= Y) return *table;
    auto& slot = cache[{v, alpha, Y}];
    slot = std::make_unique<FractionalTable>(v, alpha, Y);
    return *slot;
}

namespace {

// Fixed partition of the grid into slabs of axis-0 indices. Depends only on
// the grid, so results do not depend on the worker count.
struct Tiling {
    std::size_t rows0 = 1;   // axis-0 indices per tile
    std::size_t rest = 1;    // points per axis-0 index
    std::size_t inner = 1;   // prod of shapes of axes 1..N-2
    std::size_t last = 1;    // shape of axis N-1 (1 when N = 1)
    std::size_t count = 0;

    explicit Tiling(const GridSpec& g) {
        const std::size_t N = g.N();
        for (std::size_t l = 1; l < N; ++l) rest *= g.shape[l];
        for (std::size_t l = 1; l + 1 < N; ++l) inner *= g.shape[l];
        last = N >= 2 ? g.shape[N - 1] : 1;
        rows0 = std::max<std::size_t>(1, 64 / inner);
        count = (g.shape[0] + rows0 - 1) / rows0;
    }
    std::size_t begin(std::size_t t) const { return t * rows0; }
    std::size_t end(std::size_t t, std::size_t s0) const { return std::min(s0, (t + 1) * rows0); }
};

struct Accumulator {
    std::vector<CompensatedSum> sums;
    explicit Accumulator(std::size_t n) : sums(n) {}
    void add(std::size_t offset, const double* v, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) sums[offset + i].add(v[i]);
    }
    std::vector<double> values() const {
        std::vector<double> out(sums.size());
        for (std::size_t i = 0; i < sums.size(); ++i) out[i] = sums[i].value();
        return out;
    }
};

void zero_hyperplanes(std::vector<double>& values, const GridSpec& grid) {
    const std::size_t N = grid.N();
    for (std::size_t l = 0; l < N; ++l)
        for (std::size_t i = 0; i < grid.shape[l]; ++i) {
            if (grid.coordinate(l, i) != 0.0) continue;
            // Every point whose l-th index is i.
            std::size_t stride = 1;
            for (std::size_t m = l + 1; m < N; ++m) stride *= grid.shape[m];
            const std::size_t outer = grid.size() / (stride * grid.shape[l]);
            for (std::size_t o = 0; o < outer; ++o)
                for (std::size_t s = 0; s < stride; ++s) values[(o * grid.shape[l] + i) * stride + s] = 0.0;
        }
}

// acc += Re sum_r prod_l F_l(p_l, r), F_l is shape_l x R.
void accumulate_separable(const std::vector<CMat>& F, const GridSpec& grid, const Tiling& tiling, int threads,
                          Accumulator& acc) {
    const std::size_t N = grid.N();
    const auto R = F[0].cols();
    RMat Lr, Li;
    if (N >= 2) {
        Lr = F[N - 1].real();
        Li = F[N - 1].imag();
    } else {
        Lr = RMat::Ones(1, R);
        Li = RMat::Zero(1, R);
    }
    parallel_for(tiling.count, threads, [&](std::size_t t) {
        const std::size_t r0 = tiling.begin(t), r1 = tiling.end(t, grid.shape[0]);
        const auto rows = static_cast<Eigen::Index>((r1 - r0) * tiling.inner);
        RMat Wr(rows, R), Wi(rows, R);
        std::vector<std::size_t> idx(N >= 2 ? N - 1 : 1, 0);
        for (Eigen::Index row = 0; row < rows; ++row) {
            // Decode (p_0, ..., p_{N-2}) for this row.
            std::size_t rem = static_cast<std::size_t>(row);
            for (std::size_t l = (N >= 2 ? N - 2 : 0); l >= 1 && l < N; --l) {
                idx[l] = rem % grid.shape[l];
                rem /= grid.shape[l];
            }
            idx[0] = r0 + rem;
            for (Eigen::Index r = 0; r < R; ++r) {
                cplx w = F[0](static_cast<Eigen::Index>(idx[0]), r);
                for (std::size_t l = 1; l + 1 < N; ++l) w *= F[l](static_cast<Eigen::Index>(idx[l]), r);
                Wr(row, r) = w.real();
                Wi(row, r) = w.imag();
            }
        }
        RMat out = Wr * Lr.transpose();
        out.noalias() -= Wi * Li.transpose();
        acc.add(r0 * tiling.rest, out.data(), static_cast<std::size_t>(out.size()));
    });
}

constexpr std::size_t atom_block = 512;

// Uniform-axis phasors coef * e^{i omega x_p}, rotated with periodic reseeding.
void add_phasor(cplx coef, double omega, const GridSpec& grid, std::size_t l, cplx* out) {
    const std::size_t n = grid.shape[l];
    const double h = grid.spacing(l);
    const cplx rot = std::polar(1.0, omega * h);
    cplx z;
    for (std::size_t p = 0; p < n; ++p) {
        if (p % 64 == 0 || p + 1 == n)
            z = coef * std::polar(1.0, omega * grid.coordinate(l, p));
        else
            z *= rot;
        out[p] += z;
    }
}

struct PeriodizedTerms {
    std::vector<cplx> coef;
    std::vector<double> omega;
    cplx offset{0.0, 0.0};
};

// sum_{|j| <= n} sum_k w_{j,k}(x) conj(psi_hat_{alpha,j,k}(lambda)) by Poisson
// summation over k: for theta = 2^{-j} lambda in the ring,
//   2^{-j(v+1/alpha)} conj(psi_hat(theta)) 2 pi sum_m q(theta + 2 pi m)
//       (e^{i (lambda + 2^{j+1} pi m) x} - 1),
// with m in {0, -1, -2} for theta > 0 (mirrored for theta < 0).
PeriodizedTerms periodized_terms(double lambda, double v, double alpha, int n) {
    PeriodizedTerms t;
    for (int j = -n; j <= n; ++j) {
        const double theta = std::ldexp(lambda, -j);
        const cplx p = psi_hat(theta);
        if (p == cplx(0.0, 0.0)) continue;
        const double scale = two_pi * std::exp2(-j * (v + 1.0 / alpha));
        const int s = theta > 0.0 ? -1 : 1;
        for (int m : {0, s, 2 * s}) {
            const cplx q = fractional_spectrum(v, alpha, theta + two_pi * m);
            if (q == cplx(0.0, 0.0)) continue;
            const cplx c = scale * std::conj(p) * q;
            t.coef.push_back(c);
            t.omega.push_back(lambda + std::ldexp(pi, j + 1) * m);
            t.offset += c;
        }
    }
    return t;
}

bool periodized_active(double lambda, int n) {
    const auto& m = meyer();
    const double a = std::abs(lambda);
    return a > std::ldexp(m.ring_lower, -n) && a < std::ldexp(m.ring_upper, n);
}

std::vector<double> atom_route(const LePageAtoms& atoms, const HurstVector& H, double alpha, int n,
                               const GridSpec& grid, SynthesisEngine engine, int threads) {
    const std::size_t N = grid.N();
    const auto c = atom_weights(atoms, alpha);
    std::vector<std::uint32_t> active;
    for (std::size_t i = 0; i < atoms.count; ++i) {
        bool ok = true;
        for (std::size_t l = 0; l < N && ok; ++l) {
            const double lam = atoms.points[i * N + l];
            ok = lam != 0.0 && (engine == SynthesisEngine::direct || periodized_active(lam, n));
        }
        if (ok) active.push_back(static_cast<std::uint32_t>(i));
    }
    const Tiling tiling(grid);
    Accumulator acc(grid.size());
    std::vector<std::vector<double>> axes(N);
    for (std::size_t l = 0; l < N; ++l) axes[l] = grid.axis(l);
    for (std::size_t b0 = 0; b0 < active.size(); b0 += atom_block) {
        const std::size_t R = std::min(atom_block, active.size() - b0);
        std::vector<CMat> F(N);
        for (std::size_t l = 0; l < N; ++l) F[l].setZero(static_cast<Eigen::Index>(grid.shape[l]), static_cast<Eigen::Index>(R));
        parallel_for(R, threads, [&](std::size_t r) {
            const std::size_t i = active[b0 + r];
            std::vector<cplx> col;
            for (std::size_t l = 0; l < N; ++l) {
                const double lam = atoms.points[i * N + l];
                const std::size_t s = grid.shape[l];
                col.assign(s, cplx(0.0, 0.0));
                if (engine == SynthesisEngine::direct) {
                    for (std::size_t p = 0; p < s; ++p) col[p] = kernel_factor(axes[l][p], lam, H[l], alpha);
                } else {
                    const auto terms = periodized_terms(lam, H[l], alpha, n);
                    for (std::size_t q = 0; q < terms.coef.size(); ++q)
                        add_phasor(terms.coef[q], terms.omega[q], grid, l, col.data());
                    for (std::size_t p = 0; p < s; ++p)
                        col[p] = axes[l][p] == 0.0 ? cplx(0.0, 0.0) : col[p] - terms.offset;
                }
                const cplx w = l == 0 ? c[i] : cplx(1.0, 0.0);
                for (std::size_t p = 0; p < s; ++p)
                    F[l](static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(r)) = w * col[p];
            }
        });
        accumulate_separable(F, grid, tiling, threads, acc);
    }
    return acc.values();
}

// Contract one scale block with the per-axis factor matrices for one tile.
RMat contract_block(const double* block, std::size_t Kc, const std::vector<const RMat*>& A, std::size_t r0,
                    std::size_t r1) {
    const std::size_t N = A.size();
    const auto kc = static_cast<Eigen::Index>(Kc);
    std::size_t post = 1;
    for (std::size_t l = 1; l < N; ++l) post *= Kc;
    Eigen::Map<const RMat> E(block, kc, static_cast<Eigen::Index>(post));
    RMat T = A[0]->middleRows(static_cast<Eigen::Index>(r0), static_cast<Eigen::Index>(r1 - r0)) * E;
    std::size_t pre = r1 - r0;
    for (std::size_t l = 1; l < N; ++l) {
        post /= Kc;
        const auto& Al = *A[l];
        const auto s = Al.rows();
        if (post == 1) {
            Eigen::Map<const RMat> Tm(T.data(), static_cast<Eigen::Index>(pre), kc);
            RMat out = Tm * Al.transpose();
            T = std::move(out);
        } else {
            RMat out(static_cast<Eigen::Index>(pre) * s, static_cast<Eigen::Index>(post));
            for (std::size_t p = 0; p < pre; ++p) {
                Eigen::Map<const RMat> Tp(T.data() + p * Kc * post, kc, static_cast<Eigen::Index>(post));
                out.middleRows(static_cast<Eigen::Index>(p) * s, s).noalias() = Al * Tp;
            }
            T = std::move(out);
        }
        pre *= static_cast<std::size_t>(s);
    }
    return T;
}

std::vector<double> wavelet_route(const LePageAtoms& atoms, const HurstVector& H, double alpha,
                                  const TruncationDomain& trunc, const GridSpec& grid, bool gaussian_iid,
                                  int threads) {
    const std::size_t N = grid.N();
    const int n = trunc.n;
    const long K = trunc.kmax();
    const std::size_t Kc = trunc.k_count();
    // Factor matrices A_l[j](p, k) = w_{j,k}(t_p) = 2^{-j H_l}(psi(2^j t_p - k) - psi(-k)).
    std::vector<std::vector<RMat>> A(N, std::vector<RMat>(trunc.j_count()));
    for (std::size_t l = 0; l < N; ++l) {
        const FractionalTable& table = cached_table(H[l], alpha, n, trunc.M);
        const auto xs = grid.axis(l);
        parallel_for(trunc.j_count(), threads, [&](std::size_t jj) {
            const int j = static_cast<int>(jj) - n;
            RMat& Aj = A[l][jj];
            Aj.resize(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(Kc));
            const double scale = std::exp2(-j * H[l]);
            for (std::size_t p = 0; p < xs.size(); ++p) {
                const double y = std::ldexp(xs[p], j);
                for (long k = -K; k <= K; ++k) {
                    const double w = xs[p] == 0.0 ? 0.0
                                                  : scale * (table.value(y - static_cast<double>(k)) -
                                                             table.value(-static_cast<double>(k)));
                    Aj(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(k + K)) = w;
                }
            }
        });
    }
    const auto law = alpha == 2.0 && gaussian_iid ? CoefficientLaw::gaussian_iid : CoefficientLaw::lepage;
    const CoefficientBlockBuilder builder(atoms, trunc, alpha, law);
    std::vector<std::vector<int>> Js;
    {
        std::vector<int> J(N, -n);
        for (;;) {
            Js.push_back(J);
            std::size_t l = N;
            while (l-- > 0) {
                if (J[l] < n) {
                    ++J[l];
                    break;
                }
                J[l] = -n;
            }
            if (l == static_cast<std::size_t>(-1)) break;
        }
    }
    const Tiling tiling(grid);
    Accumulator acc(grid.size());
    constexpr std::size_t batch = 8;
    const std::size_t bs = builder.block_size();
    std::vector<double> blocks(batch * bs);
    std::vector<char> nonzero(batch);
    for (std::size_t b0 = 0; b0 < Js.size(); b0 += batch) {
        const std::size_t nb = std::min(batch, Js.size() - b0);
        parallel_for(nb, threads, [&](std::size_t q) {
            std::span<double> out(blocks.data() + q * bs, bs);
            builder.real_block(Js[b0 + q], out);
            nonzero[q] = std::any_of(out.begin(), out.end(), [](double x) { return x != 0.0; });
        });
        parallel_for(tiling.count, threads, [&](std::size_t t) {
            const std::size_t r0 = tiling.begin(t), r1 = tiling.end(t, grid.shape[0]);
            for (std::size_t q = 0; q < nb; ++q) {
                if (!nonzero[q]) continue;
                std::vector<const RMat*> Aj(N);
                for (std::size_t l = 0; l < N; ++l) Aj[l] = &A[l][Js[b0 + q][l] + n];
                const RMat T = contract_block(blocks.data() + q * bs, Kc, Aj, r0, r1);
                acc.add(r0 * tiling.rest, T.data(), static_cast<std::size_t>(T.size()));
            }
        });
    }
    return acc.values();
}

}  // namespace

std::vector<cplx> periodized_axis_factor(double lambda, double v, double alpha, int n, std::span<const double> xs) {
    check_hurst_component(v);
    check_alpha(alpha);
    const auto terms = periodized_terms(lambda, v, alpha, n);
    std::vector<cplx> out(xs.size());
    for (std::size_t p = 0; p < xs.size(); ++p) {
        if (xs[p] == 0.0) continue;
        CompensatedComplexSum s;
        for (std::size_t q = 0; q < terms.coef.size(); ++q) s.add(terms.coef[q] * std::polar(1.0, terms.omega[q] * xs[p]));
        s.add(-terms.offset);
        out[p] = s.value();
    }
    return out;
}

std::vector<double> synthesize_component(const LePageAtoms& atoms, const HurstVector& H, double alpha,
                                         const TruncationDomain& trunc, const GridSpec& grid,
                                         const SynthesisOptions& options) {
    check_alpha(alpha);
    require(H.size() == grid.N(), "synthesis: Hurst vector and grid differ in dimension");
    require(atoms.N == grid.N(), "synthesis: atoms and grid differ in dimension");
    require(trunc.n >= 0 && trunc.M > 0.0, "synthesis: truncation needs n >= 0 and M > 0");
    for (std::size_t l = 0; l < grid.N(); ++l)
        if (grid.lower[l] < -trunc.M || grid.upper[l] > trunc.M)
            fail(ErrorKind::invalid_input, "synthesis: grid leaves [-M, M]^N; raise M");
    std::vector<double> v;
    if (options.engine == SynthesisEngine::wavelet)
        v = wavelet_route(atoms, H, alpha, trunc, grid, options.gaussian_iid, options.threads);
    else
        v = atom_route(atoms, H, alpha, trunc.n, grid, options.engine, options.threads);
    zero_hyperplanes(v, grid);
    return v;
}

FieldGrid synthesize(const HurstVector& H, double alpha, const TruncationDomain& trunc, const GridSpec& grid,
                     std::uint64_t seed, std::size_t d, const SynthesisOptions& options) {
    require(d >= 1, "synthesis: need at least one component");
    const bool iid = options.engine == SynthesisEngine::wavelet && alpha == 2.0 && options.gaussian_iid;
    FieldGrid f;
    f.grid = grid;
    f.meta.H = H;
    f.meta.alpha = alpha;
    f.meta.n = trunc.n;
    f.meta.M = trunc.M;
    f.meta.seed = seed;
    f.meta.atom_count = iid ? 0 : options.atom_count;
    f.meta.theta = options.theta;
    f.meta.d = d;
    f.meta.engine = to_string(options.engine);
    f.meta.law = iid ? "gaussian-iid" : "lepage";
    f.values.resize(d * grid.size());
    for (std::size_t c = 0; c < d; ++c) {
        const std::uint64_t s = component_seed(seed, c, d);
        LePageAtoms atoms;
        if (iid) {
            atoms.seed = s;
            atoms.N = grid.N();
        } else {
            atoms = sample_atoms(s, options.atom_count, grid.N(), options.theta);
        }
        const auto v = synthesize_component(atoms, H, alpha, trunc, grid, options);
        std::copy(v.begin(), v.end(), f.component(c).begin());
    }
    return f;
}

double dyadic_holder_seminorm(std::span<const double> values, const GridSpec& grid, double gamma) {
    require(values.size() == grid.size(), "seminorm: value count does not match the grid");
    const std::size_t N = grid.N();
    double best = 0.0;
    for (std::size_t l = 0; l < N; ++l) {
        std::size_t stride = 1;
        for (std::size_t m = l + 1; m < N; ++m) stride *= grid.shape[m];
        const std::size_t s = grid.shape[l];
        const std::size_t outer = grid.size() / (stride * s);
        for (std::size_t h = 1; h < s; h *= 2) {
            const double denom = std::pow(static_cast<double>(h) * grid.spacing(l), gamma);
            for (std::size_t o = 0; o < outer; ++o)
                for (std::size_t p = 0; p + h < s; ++p)
                    for (std::size_t q = 0; q < stride; ++q) {
                        const std::size_t a = (o * s + p) * stride + q;
                        best = std::max(best, std::abs(values[a + h * stride] - values[a]) / denom);
                    }
        }
    }
    return best;
}

HolderCauchyReport holder_cauchy_report(const HurstVector& H, double alpha, const std::vector<int>& levels,
                                        double M, double gamma, const GridSpec& grid,
                                        const std::vector<std::uint64_t>& seeds, const SynthesisOptions& options) {
    require(gamma >= 0.0, "holder report: gamma must be nonnegative");
    if (gamma >= H.min()) fail(ErrorKind::invalid_input, "holder report: gamma must be below min H");
    require(!levels.empty() && !seeds.empty(), "holder report: need levels and seeds");
    HolderCauchyReport r;
    r.gamma = gamma;
    r.levels = levels;
    const bool iid = options.engine == SynthesisEngine::wavelet && alpha == 2.0 && options.gaussian_iid;
    for (std::uint64_t seed : seeds) {
        LePageAtoms atoms;
        if (iid) {
            atoms.seed = seed;
            atoms.N = grid.N();
        } else {
            atoms = sample_atoms(seed, options.atom_count, grid.N(), options.theta);
        }
        std::map<int, std::vector<double>> U;
        auto level = [&](int n) -> const std::vector<double>& {
            auto it = U.find(n);
            if (it == U.end()) it = U.emplace(n, synthesize_component(atoms, H, alpha, {n, M}, grid, options)).first;
            return it->second;
        };
        std::vector<double> semi, sup;
        for (int n : levels) {
            const auto& a = level(n);
            const auto& b = level(n + 1);
            std::vector<double> diff(a.size());
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                diff[i] = b[i] - a[i];
                s = std::max(s, std::abs(diff[i]));
            }
            semi.push_back(dyadic_holder_seminorm(diff, grid, gamma));
            sup.push_back(s);
        }
        r.seminorm.push_back(std::move(semi));
        r.sup.push_back(std::move(sup));
    }
    r.mean_seminorm.assign(levels.size(), 0.0);
    r.mean_sup.assign(levels.size(), 0.0);
    for (std::size_t s = 0; s < seeds.size(); ++s)
        for (std::size_t k = 0; k < levels.size(); ++k) {
            r.mean_seminorm[k] += r.seminorm[s][k] / static_cast<double>(seeds.size());
            r.mean_sup[k] += r.sup[s][k] / static_cast<double>(seeds.size());
        }
    r.seminorm_decreasing = r.sup_decreasing = true;
    for (std::size_t k = 1; k < levels.size(); ++k) {
        r.seminorm_decreasing = r.seminorm_decreasing && r.mean_seminorm[k] < r.mean_seminorm[k - 1];
        r.sup_decreasing = r.sup_decreasing && r.mean_sup[k] < r.mean_sup[k - 1];
    }
    return r;
}

}  // namespace hfss
