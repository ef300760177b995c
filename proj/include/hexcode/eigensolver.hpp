// Copyright 2026 The hexcode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hexcode/state.hpp"
#include "hexcode/symmetry.hpp"

namespace hexcode {

struct NotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverOptions {
    double tol = 1e-10;          ///< absolute residual bound ||Hv - Ev||
    double cluster_tol = 1e-8;   ///< relative clustering tolerance
    uint64_t seed = 20260101;
    size_t block = 0;            ///< 0: k + guard
    size_t guard = 6;            ///< extra Ritz pairs carried beyond k
    size_t max_iterations = 4000;
    size_t dense_threshold = 1024;  ///< use dense diagonalization at or below this dimension
    bool want_vectors = false;
    bool use_symmetries = true;  ///< split into sectors of the central Pauli symmetries
    size_t cap = kDefaultStateCap;
    unsigned workers = 1;
};

struct SolverMeta {
    std::string method;
    size_t iterations = 0;
    size_t restarts = 0;
    size_t matvecs = 0;
    size_t block = 0;
    size_t max_basis = 0;
    uint64_t seed = 0;
};

struct SpectrumReport {
    std::vector<double> eigenvalues;
    std::vector<double> residuals;
    std::vector<std::pair<size_t, size_t>> clusters;  ///< inclusive index ranges
    SolverMeta meta;
    /// Column i is the eigenvector of eigenvalues[i] (when requested).
    Eigen::MatrixXcd vectors;

    std::vector<size_t> multiplicities() const {
        std::vector<size_t> m;
        for (auto [a, b] : clusters) m.push_back(b - a + 1);
        return m;
    }
};

/// Groups sorted values: consecutive values closer than tol * max(1, |E|)
/// share a cluster.
inline std::vector<std::pair<size_t, size_t>> cluster_levels(const std::vector<double>& ev, double rel_tol) {
    std::vector<std::pair<size_t, size_t>> out;
    for (size_t i = 0; i < ev.size(); ++i) {
        double scale = std::max(1.0, std::abs(ev[i]));
        if (!out.empty() && std::abs(ev[i] - ev[out.back().second]) <= rel_tol * scale) out.back().second = i;
        else out.push_back({i, i});
    }
    return out;
}

namespace detail {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <typename S>
S random_scalar(std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    if constexpr (std::is_same_v<S, double>) return nd(rng);
    else return S(nd(rng), nd(rng));
}

/// Orthonormalizes the columns of X against V[:, :m] and among themselves:
/// block classical Gram-Schmidt against V (applied twice), then modified
/// Gram-Schmidt inside the block. Collapsing columns are replaced by random
/// vectors.
template <typename S>
void orthonormalize_block(const Mat<S>& V, size_t m, Mat<S>& X, std::mt19937_64& rng) {
    auto project_out = [&](auto&& cols) {
        if (m == 0) return;
        auto Vm = V.leftCols(m);
        for (int pass = 0; pass < 2; ++pass) {
            Mat<S> C = Vm.adjoint() * cols;
            cols.noalias() -= Vm * C;
        }
    };
    Eigen::VectorXd before = X.colwise().norm().transpose();
    project_out(X);
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
        for (int attempt = 0;; ++attempt) {
            for (int pass = 0; pass < 2; ++pass)
                for (Eigen::Index p = 0; p < c; ++p) X.col(c) -= X.col(p) * (X.col(p).adjoint() * X.col(c))(0, 0);
            double after = X.col(c).norm();
            if (after > 1e-8 * std::max(before(c), 1e-300) && after > 1e-300) {
                X.col(c) /= after;
                break;
            }
            if (attempt == 8) throw NotConverged("could not extend the search space (space exhausted)");
            for (Eigen::Index i = 0; i < X.rows(); ++i) X(i, c) = random_scalar<S>(rng);
            before(c) = X.col(c).norm();
            project_out(X.col(c));
        }
    }
}

template <typename S, typename Op>
Mat<S> dense_matrix(const Op& H) {
    size_t d = H.dim();
    Mat<S> m(d, d);
    std::vector<S> e(d, S(0));
    for (size_t i = 0; i < d; ++i) {
        e[i] = S(1);
        H.apply(e.data(), m.col(i).data());
        e[i] = S(0);
    }
    return m;
}

template <typename S, typename Op>
SpectrumReport dense_eigs(const Op& H, size_t k, const SolverOptions& opt) {
    Mat<S> A = dense_matrix<S>(H);
    Eigen::SelfAdjointEigenSolver<Mat<S>> es(A);
    if (es.info() != Eigen::Success) throw NotConverged("dense eigensolver failed");
    SpectrumReport rep;
    rep.meta.method = "dense";
    k = std::min<size_t>(k, A.rows());
    for (size_t i = 0; i < k; ++i) {
        rep.eigenvalues.push_back(es.eigenvalues()(i));
        rep.residuals.push_back((A * es.eigenvectors().col(i) - es.eigenvalues()(i) * es.eigenvectors().col(i)).norm());
    }
    if (opt.want_vectors) rep.vectors = es.eigenvectors().leftCols(k).template cast<cplx>();
    return rep;
}

/// Thick-restart block Lanczos (Krylov-Schur form).
///
/// Invariant: A V_m = V_m T + V_next C with V = [V_m, V_next] orthonormal,
/// T Hermitian (m x m) and C (b x m). Ritz residual norms are ||C y||, so
/// full-length Ritz vectors are only formed at restarts and at the end.
template <typename S, typename Op>
SpectrumReport block_eigs(const Op& H, size_t k, const SolverOptions& opt) {
    const size_t dim = H.dim();
    const size_t nev = std::min(dim, k + opt.guard);
    const size_t b = std::max<size_t>(opt.block ? opt.block : nev, 1);
    const size_t keep = nev + b;
    const size_t m_max = std::max(keep + 3 * b, 4 * b);
    if (m_max + 2 * b >= dim) return dense_eigs<S>(H, k, opt);

    std::mt19937_64 rng(opt.seed);
    Mat<S> V(dim, m_max + b);
    Mat<S> T = Mat<S>::Zero(m_max, m_max);
    Mat<S> C = Mat<S>::Zero(b, m_max);
    size_t m = 0;
    SolverMeta meta;
    meta.method = "block-lanczos";
    meta.block = b;
    meta.max_basis = m_max;
    meta.seed = opt.seed;

    {
        Mat<S> X0(dim, b);
        for (Eigen::Index c = 0; c < X0.cols(); ++c)
            for (size_t i = 0; i < dim; ++i) X0(i, c) = random_scalar<S>(rng);
        orthonormalize_block<S>(V, 0, X0, rng);
        V.leftCols(b) = X0;
    }
    Mat<S> W(dim, b);
    for (size_t it = 0; it < opt.max_iterations; ++it) {
        meta.iterations = it + 1;
        // Expand: W = A V_next, orthogonalized against everything so far.
        for (size_t c = 0; c < b; ++c) H.apply(V.col(m + c).data(), W.col(c).data());
        meta.matvecs += b;
        auto Vall = V.leftCols(m + b);
        Mat<S> h = Vall.adjoint() * W;
        W.noalias() -= Vall * h;
        Mat<S> h2 = Vall.adjoint() * W;
        W.noalias() -= Vall * h2;
        h += h2;
        // New projected block: rows/cols m..m+b.
        Mat<S> D = h.bottomRows(b);
        D = (D + D.adjoint().eval()) * 0.5;
        T.block(m, m, b, b) = D;
        T.block(0, m, m, b) = C.leftCols(m).adjoint();
        T.block(m, 0, b, m) = C.leftCols(m);
        // QR of the remainder gives the next block and its coupling.
        Eigen::HouseholderQR<Mat<S>> qr(W);
        Mat<S> Q = qr.householderQ() * Mat<S>::Identity(dim, b);
        Mat<S> Rb = Q.adjoint() * W;
        Mat<S> Bn = Rb.template triangularView<Eigen::Upper>();
        for (size_t c = 0; c < b; ++c) {
            if (std::abs(Bn(c, c)) < 1e-12) {
                // Invariant subspace found: continue with a fresh direction.
                Mat<S> r(dim, 1);
                for (size_t i = 0; i < dim; ++i) r(i, 0) = random_scalar<S>(rng);
                Mat<S> Vtmp(dim, m + b + c);
                Vtmp << V.leftCols(m + b), Q.leftCols(c);
                orthonormalize_block<S>(Vtmp, m + b + c, r, rng);
                Q.col(c) = r.col(0);
                Bn.row(c).setZero();
            }
        }
        m += b;
        C.setZero();
        C.block(0, m - b, b, b) = Bn;
        V.middleCols(m, b) = Q;

        Eigen::SelfAdjointEigenSolver<Mat<S>> es(T.topLeftCorner(m, m));
        if (es.info() != Eigen::Success) throw NotConverged("Rayleigh-Ritz step failed");
        size_t use = std::min(m, nev);
        Mat<S> CY = C.leftCols(m) * es.eigenvectors().leftCols(use);
        size_t converged = 0;
        while (converged < std::min(k, use) && CY.col(converged).norm() <= opt.tol) ++converged;
        if (converged >= k) {
            Mat<S> Xk = V.leftCols(m) * es.eigenvectors().leftCols(k);
            Mat<S> AXk(dim, k);
            for (size_t c = 0; c < k; ++c) H.apply(Xk.col(c).data(), AXk.col(c).data());
            meta.matvecs += k;
            SpectrumReport rep;
            bool ok = true;
            for (size_t i = 0; i < k; ++i) {
                double th = es.eigenvalues()(i);
                double r = (AXk.col(i) - th * Xk.col(i)).norm();
                rep.eigenvalues.push_back(th);
                rep.residuals.push_back(r);
                if (r > 10 * opt.tol) ok = false;
            }
            if (ok) {
                rep.meta = meta;
                if (opt.want_vectors) rep.vectors = Xk.template cast<cplx>();
                return rep;
            }
        }
        if (m + b > m_max) {
            // Thick restart: keep the lowest Ritz vectors and the next block.
            size_t kk = std::min(keep, m);
            Mat<S> Y = es.eigenvectors().leftCols(kk);
            Mat<S> Vk = V.leftCols(m) * Y;
            Mat<S> next = V.middleCols(m, b);
            V.leftCols(kk) = Vk;
            V.middleCols(kk, b) = next;
            Mat<S> Cn = C.leftCols(m) * Y;
            T.setZero();
            for (size_t i = 0; i < kk; ++i) T(i, i) = es.eigenvalues()(i);
            C.setZero();
            C.leftCols(kk) = Cn;
            m = kk;
            ++meta.restarts;
        }
    }
    throw NotConverged("eigensolver did not converge in " + std::to_string(opt.max_iterations) + " iterations");
}

}  // namespace detail

template <typename Op>
SpectrumReport lowest_eigs_op(const Op& H, size_t k, const SolverOptions& opt) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (k > H.dim()) throw std::invalid_argument("k exceeds the Hilbert space dimension");
    bool dense = H.dim() <= opt.dense_threshold;
    SpectrumReport rep;
    if (H.is_real()) rep = dense ? detail::dense_eigs<double>(H, k, opt) : detail::block_eigs<double>(H, k, opt);
    else rep = dense ? detail::dense_eigs<cplx>(H, k, opt) : detail::block_eigs<cplx>(H, k, opt);
    rep.meta.seed = opt.seed;
    rep.clusters = cluster_levels(rep.eigenvalues, opt.cluster_tol);
    return rep;
}

/// k lowest eigenvalues of H in the full space, with residuals and
/// degeneracy clusters.
inline SpectrumReport lowest_eigs(const CompiledHamiltonian& H, size_t k, const SolverOptions& opt = {}) { return lowest_eigs_op(H, k, opt); }

/// Solves the sectors of the central Pauli symmetries and merges the lowest
/// k levels. Each sector starts with a few levels; sectors whose highest
/// computed level lies below the global k-th level are re-solved with twice
/// as many.
inline SpectrumReport lowest_eigs_by_sector(const HamiltonianSpec& h, const StabilizerGroup& sym, size_t k, const SolverOptions& opt) {
    size_t R = sym.rank();
    size_t num = size_t{1} << R;
    std::vector<std::unique_ptr<SectorOperator>> ops(num);
    std::vector<SpectrumReport> parts(num);
    std::vector<size_t> want(num, 0);
    size_t total_dim = 0, out_screen_matvecs = 0;
    for (size_t s = 0; s < num; ++s) {
        std::vector<int> signs(R);
        for (size_t j = 0; j < R; ++j) signs[j] = (s >> j) & 1u;
        ops[s] = std::make_unique<SectorOperator>(h, sym, signs);
        total_dim += ops[s]->dim();
    }
    if (k > total_dim) throw std::invalid_argument("k exceeds the Hilbert space dimension");
    size_t start = std::max<size_t>(2, (2 * k + num - 1) / num + 1);
    for (size_t s = 0; s < num; ++s) want[s] = std::min(start, ops[s]->dim());

    // Screening: the lowest Ritz value of each sector at a loose tolerance.
    // Ritz values bound eigenvalues from above, so the k-th smallest of them
    // bounds the k-th level; a sector whose lower bound theta - |r| exceeds
    // it cannot contribute and is dropped.
    if (num > 1 && k < num) {
        std::vector<std::pair<double, double>> bounds(num);
        std::vector<double> uppers;
        for (size_t s = 0; s < num; ++s) {
            SolverOptions o = opt;
            o.seed = opt.seed + s;
            o.tol = std::max(opt.tol, 1e-4);
            o.want_vectors = false;
            auto r = lowest_eigs_op(*ops[s], 1, o);
            out_screen_matvecs += r.meta.matvecs;
            bounds[s] = {r.eigenvalues[0] - r.residuals[0], r.eigenvalues[0]};
            uppers.push_back(r.eigenvalues[0]);
        }
        std::nth_element(uppers.begin(), uppers.begin() + static_cast<std::ptrdiff_t>(k - 1), uppers.end());
        double thr = uppers[k - 1];
        double band = opt.cluster_tol * std::max(1.0, std::abs(thr));
        for (size_t s = 0; s < num; ++s)
            if (bounds[s].first > thr + band) want[s] = 0;
    }

    struct Level {
        double value;
        size_t sector, local;
    };
    SpectrumReport out;
    std::vector<bool> stale(num, true);
    std::vector<Level> levels;
    while (true) {
        for (size_t s = 0; s < num; ++s) {
            if (!stale[s] || want[s] == 0) continue;
            SolverOptions o = opt;
            o.seed = opt.seed + s;
            parts[s] = lowest_eigs_op(*ops[s], want[s], o);
            out.meta.iterations += parts[s].meta.iterations;
            out.meta.restarts += parts[s].meta.restarts;
            out.meta.matvecs += parts[s].meta.matvecs;
            out.meta.block = std::max(out.meta.block, parts[s].meta.block);
            out.meta.max_basis = std::max(out.meta.max_basis, parts[s].meta.max_basis);
            stale[s] = false;
        }
        levels.clear();
        for (size_t s = 0; s < num; ++s)
            for (size_t i = 0; i < parts[s].eigenvalues.size(); ++i) levels.push_back({parts[s].eigenvalues[i], s, i});
        std::stable_sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) { return a.value < b.value; });
        bool done = levels.size() >= k;
        if (done) {
            double thr = levels[k - 1].value;
            double band = opt.cluster_tol * std::max(1.0, std::abs(thr));
            for (size_t s = 0; s < num; ++s) {
                if (want[s] == ops[s]->dim() || want[s] == 0) continue;
                // Missing levels of this sector lie at or above its top value;
                // if that value ties with the k-th level they cannot change
                // the list.
                if (parts[s].eigenvalues.back() < thr - band) {
                    want[s] = std::min(ops[s]->dim(), 2 * want[s]);
                    stale[s] = true;
                    done = false;
                }
            }
        } else {
            for (size_t s = 0; s < num; ++s)
                if (want[s] < ops[s]->dim()) {
                    want[s] = std::min(ops[s]->dim(), 2 * want[s]);
                    stale[s] = true;
                }
        }
        if (done) break;
    }
    levels.resize(k);
    for (const auto& l : levels) {
        out.eigenvalues.push_back(l.value);
        out.residuals.push_back(parts[l.sector].residuals[l.local]);
    }
    if (opt.want_vectors) {
        out.vectors.resize(static_cast<Eigen::Index>(size_t{1} << h.n_qubits), static_cast<Eigen::Index>(k));
        for (size_t i = 0; i < k; ++i) {
            Eigen::VectorXcd c = parts[levels[i].sector].vectors.col(static_cast<Eigen::Index>(levels[i].local));
            auto full = ops[levels[i].sector]->lift(c.data());
            out.vectors.col(static_cast<Eigen::Index>(i)) = Eigen::Map<Eigen::VectorXcd>(full.data(), static_cast<Eigen::Index>(full.size()));
        }
    }
    out.meta.matvecs += out_screen_matvecs;
    out.meta.method = "sectors(" + std::to_string(num) + ")";
    out.meta.seed = opt.seed;
    out.clusters = cluster_levels(out.eigenvalues, opt.cluster_tol);
    return out;
}

inline SpectrumReport lowest_eigs(const HamiltonianSpec& h, size_t k, const SolverOptions& opt = {}) {
    check_cap(h.n_qubits, opt.cap);
    if (opt.use_symmetries && (size_t{1} << h.n_qubits) > opt.dense_threshold) {
        auto sym = central_symmetries(h);
        if (sym.rank() > 0) return lowest_eigs_by_sector(h, sym, k, opt);
    }
    return lowest_eigs(CompiledHamiltonian(h, opt.cap, opt.workers), k, opt);
}

struct GapResult {
    double e0 = 0;
    size_t degeneracy = 0;
    double gap = 0;
    SpectrumReport spectrum;
};

/// Ground energy, ground multiplicity, and distance to the next level. The
/// number of requested levels doubles until a level above the ground
/// cluster is seen.
template <typename Solve>
GapResult spectral_gap_with(Solve&& solve, size_t dim, size_t k_start) {
    size_t k = std::min(k_start, dim);
    while (true) {
        SpectrumReport rep = solve(k);
        if (rep.clusters.size() >= 2 || k == dim) {
            GapResult g;
            g.e0 = rep.eigenvalues[0];
            g.degeneracy = rep.clusters[0].second + 1;
            g.gap = rep.clusters.size() >= 2 ? rep.eigenvalues[rep.clusters[1].first] - g.e0 : 0;
            g.spectrum = std::move(rep);
            return g;
        }
        k = std::min(dim, 2 * k);
    }
}

inline GapResult spectral_gap(const CompiledHamiltonian& H, const SolverOptions& opt = {}, size_t k_start = 8) {
    return spectral_gap_with([&](size_t k) { return lowest_eigs(H, k, opt); }, H.dim(), k_start);
}

inline GapResult spectral_gap(const HamiltonianSpec& h, const SolverOptions& opt = {}, size_t k_start = 8) {
    return spectral_gap_with([&](size_t k) { return lowest_eigs(h, k, opt); }, size_t{1} << h.n_qubits, k_start);
}

}  // namespace hexcode
