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

#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "hexcode/models.hpp"
#include "hexcode/pauli.hpp"
#include "hexcode/stabilizer.hpp"

namespace hexcode {

using cplx = std::complex<double>;

inline constexpr size_t kDefaultStateCap = 24;

struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void check_cap(size_t n, size_t cap) {
    if (n > cap || n > 62) throw CapExceeded(std::to_string(n) + " qubits exceeds the state-vector cap of " + std::to_string(cap));
}

inline cplx i_pow(unsigned k) {
    switch (k & 3) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

/// Masks of a Pauli on at most 62 qubits; P|b> = factor * (-1)^{|b & z|} |b ^ x>.
struct PauliMasks {
    uint64_t x = 0, z = 0;
    cplx factor{1, 0};
    explicit PauliMasks(const PauliString& p) {
        check_cap(p.size(), 62);
        x = p.x().low_word();
        z = p.z().low_word();
        factor = i_pow(p.phase() + static_cast<unsigned>(p.num_y()));
    }
};

inline double parity_sign(uint64_t v) { return (std::popcount(v) & 1) ? -1.0 : 1.0; }

/// Dense amplitude vector; bit q of the basis index is qubit q.
class StateVector {
  public:
    StateVector() = default;
    explicit StateVector(size_t n, size_t cap = kDefaultStateCap) : n_(n) {
        check_cap(n, cap);
        amp_.assign(size_t{1} << n, cplx{0, 0});
    }
    static StateVector basis(size_t n, uint64_t index, size_t cap = kDefaultStateCap) {
        StateVector v(n, cap);
        v.amp_.at(index) = 1;
        return v;
    }
    static StateVector from_amplitudes(size_t n, std::vector<cplx> amps) {
        if (amps.size() != (size_t{1} << n)) throw SizeMismatch("amplitude array length is not 2^n");
        StateVector v;
        v.n_ = n;
        v.amp_ = std::move(amps);
        return v;
    }

    size_t n_qubits() const { return n_; }
    size_t dim() const { return amp_.size(); }
    const std::vector<cplx>& amplitudes() const { return amp_; }
    std::vector<cplx>& amplitudes() { return amp_; }
    cplx operator[](size_t i) const { return amp_[i]; }

    double norm() const {
        double s = 0;
        for (const auto& a : amp_) s += std::norm(a);
        return std::sqrt(s);
    }
    /// Scales to unit norm and returns the previous norm.
    double normalize() {
        double nr = norm();
        if (nr > 0)
            for (auto& a : amp_) a /= nr;
        return nr;
    }
    cplx inner(const StateVector& o) const {
        if (o.n_ != n_) throw SizeMismatch("state size mismatch");
        cplx s = 0;
        for (size_t i = 0; i < amp_.size(); ++i) s += std::conj(amp_[i]) * o.amp_[i];
        return s;
    }
    StateVector& axpy(cplx a, const StateVector& o) {
        if (o.n_ != n_) throw SizeMismatch("state size mismatch");
        for (size_t i = 0; i < amp_.size(); ++i) amp_[i] += a * o.amp_[i];
        return *this;
    }
    StateVector& scale(cplx a) {
        for (auto& x : amp_) x *= a;
        return *this;
    }

    StateVector apply(const PauliString& p) const {
        if (p.size() != n_) throw SizeMismatch("operator size differs from state size");
        PauliMasks m(p);
        StateVector out;
        out.n_ = n_;
        out.amp_.resize(amp_.size());
        for (uint64_t b = 0; b < amp_.size(); ++b) out.amp_[b ^ m.x] = m.factor * parity_sign(b & m.z) * amp_[b];
        return out;
    }

  private:
    size_t n_ = 0;
    std::vector<cplx> amp_;
};

/// Hamiltonian prepared for matrix-free products: diagonal precomputed,
/// off-diagonal terms grouped by X mask.
class CompiledHamiltonian {
  public:
    struct Group {
        uint64_t x;
        std::vector<std::pair<uint64_t, cplx>> terms;  ///< (z mask, coefficient * phase factor)
    };

    explicit CompiledHamiltonian(const HamiltonianSpec& h, size_t cap = kDefaultStateCap, unsigned workers = 1) : n_(h.n_qubits), workers_(std::max(1u, workers)) {
        check_cap(n_, cap);
        std::map<uint64_t, size_t> index;
        std::vector<std::pair<uint64_t, cplx>> diag_terms;
        real_ = true;
        for (const auto& t : h.terms) {
            if (t.op.size() != n_) throw SizeMismatch("term size differs from Hamiltonian size");
            PauliMasks m(t.op);
            cplx c = t.coefficient * m.factor;
            if (std::abs(c.imag()) > 0) real_ = false;
            if (m.x == 0) {
                diag_terms.push_back({m.z, c});
                continue;
            }
            auto it = index.find(m.x);
            if (it == index.end()) {
                index.emplace(m.x, groups_.size());
                groups_.push_back({m.x, {}});
                it = index.find(m.x);
            }
            groups_[it->second].terms.push_back({m.z, c});
        }
        diag_.assign(size_t{1} << n_, 0.0);
        for (uint64_t b = 0; b < diag_.size(); ++b) {
            double s = 0;
            for (auto& [z, c] : diag_terms) s += c.real() * parity_sign(b & z);
            diag_[b] = s;
        }
    }

    size_t n_qubits() const { return n_; }
    size_t dim() const { return size_t{1} << n_; }
    /// True when every matrix element is real.
    bool is_real() const { return real_; }
    const std::vector<double>& diagonal() const { return diag_; }
    const std::vector<Group>& groups() const { return groups_; }

    /// out = H * in, gathered per output index so output chunks are disjoint.
    template <typename S>
    void apply(const S* in, S* out) const {
        size_t d = dim();
        auto work = [&](size_t lo, size_t hi) {
            for (size_t j = lo; j < hi; ++j) {
                S acc = static_cast<S>(diag_[j]) * in[j];
                for (const auto& g : groups_) {
                    uint64_t src = j ^ g.x;
                    S v = in[src];
                    for (const auto& [z, c] : g.terms) acc += coef<S>(c) * static_cast<S>(parity_sign(src & z)) * v;
                }
                out[j] = acc;
            }
        };
        if (workers_ <= 1 || d < (size_t{1} << 14)) {
            work(0, d);
            return;
        }
        std::vector<std::thread> pool;
        size_t chunk = (d + workers_ - 1) / workers_;
        for (unsigned w = 0; w < workers_; ++w) {
            size_t lo = w * chunk, hi = std::min(d, lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    StateVector apply(const StateVector& v) const {
        if (v.n_qubits() != n_) throw SizeMismatch("state size differs from Hamiltonian size");
        std::vector<cplx> out(dim());
        apply(v.amplitudes().data(), out.data());
        return StateVector::from_amplitudes(n_, std::move(out));
    }

    /// Dense matrix, for small oracles.
    template <typename S>
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> dense() const {
        size_t d = dim();
        Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> m = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Zero(d, d);
        std::vector<S> e(d, S(0)), col(d);
        for (size_t i = 0; i < d; ++i) {
            e[i] = S(1);
            apply(e.data(), col.data());
            for (size_t j = 0; j < d; ++j) m(j, i) = col[j];
            e[i] = S(0);
        }
        return m;
    }

  private:
    template <typename S>
    static S coef(cplx c) {
        if constexpr (std::is_same_v<S, double>) return c.real();
        else return c;
    }
    size_t n_ = 0;
    unsigned workers_ = 1;
    bool real_ = true;
    std::vector<double> diag_;
    std::vector<Group> groups_;
};

inline StateVector matvec(const HamiltonianSpec& h, const StateVector& v) { return CompiledHamiltonian(h).apply(v); }

inline double expectation(const StateVector& v, const PauliString& p) { return v.inner(v.apply(p)).real(); }

inline double expectation(const StateVector& v, const HamiltonianSpec& h) {
    return v.inner(CompiledHamiltonian(h).apply(v)).real();
}

/// The state fixed by every element of a full-rank group.
///
/// The pure-Z part of the echelon fixes a computational basis state in the
/// support; projecting it with prod (1 + g)/2 yields the stabilizer state.
inline StateVector state_from_group(const StabilizerGroup& g, size_t cap = kDefaultStateCap) {
    size_t n = g.n_qubits();
    check_cap(n, cap);
    if (g.rank() != n) throw RankDeficient("state_from_group needs rank " + std::to_string(n) + ", have " + std::to_string(g.rank()));
    uint64_t b = 0;
    for (size_t r = 0; r < g.echelon().size(); ++r) {
        const auto& row = g.echelon()[r];
        if (!row.x().none()) continue;
        size_t pivot = g.pivots()[r] - n;
        if (row.phase() == 2) b |= uint64_t{1} << pivot;
    }
    StateVector v = StateVector::basis(n, b, cap);
    for (const auto& gen : g.generators()) {
        StateVector gv = v.apply(gen);
        v.axpy(1, gv).scale(0.5);
    }
    if (v.normalize() < 1e-12) throw InconsistentGroup("projection of the seed basis state vanished");
    for (const auto& gen : g.generators()) {
        StateVector gv = v.apply(gen);
        gv.axpy(-1, v);
        if (gv.norm() > 1e-10) throw InconsistentGroup("constructed state is not stabilized by " + gen.str());
    }
    return v;
}

struct ProjectedState {
    StateVector state;
    bool null = false;
    double norm = 0;  ///< norm of the unnormalized projection relative to the input
};

/// Applies prod (1 + (-1)^sign P) and normalizes; flags a null result.
inline ProjectedState build_projected_state(const StateVector& base, const std::vector<std::pair<int, PauliString>>& projectors) {
    for (size_t a = 0; a < projectors.size(); ++a)
        for (size_t b = 0; b < a; ++b)
            if (!commutes(projectors[a].second, projectors[b].second)) throw NonCommutingGenerators("projectors must commute");
    double base_norm = base.norm();
    StateVector v = base;
    for (const auto& [sign, p] : projectors) {
        StateVector pv = v.apply(p);
        v.axpy((sign & 1) ? -1.0 : 1.0, pv);
    }
    ProjectedState out;
    out.norm = base_norm > 0 ? v.norm() / base_norm : 0;
    out.null = out.norm < 1e-12;
    if (!out.null) v.normalize();
    out.state = std::move(v);
    return out;
}

}  // namespace hexcode
