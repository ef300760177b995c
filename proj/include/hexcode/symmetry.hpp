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

// Block diagonalization by Pauli symmetries.
//
// A sector is a joint eigenspace of commuting Pauli symmetries S_j with signs
// s_j. Bring the symmetry group to echelon form: rows with an X part have
// distinct pivot bits among the X columns, pure-Z rows fix parities. A sector
// basis state is P_sigma|r> for a representative r with every X-pivot bit
// clear and all Z parities satisfied; P_sigma|r> is the signed orbit of r
// under the X rows.

#pragma once

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <vector>

#include "hexcode/models.hpp"
#include "hexcode/stabilizer.hpp"
#include "hexcode/state.hpp"

namespace hexcode {

/// Pauli on at most 64 qubits as i^phase X^x Z^z (note: not the Y-aware
/// phase convention of PauliString).
struct MaskPauli {
    uint64_t x = 0, z = 0;
    unsigned phase = 0;

    static MaskPauli from(const PauliString& p) {
        check_cap(p.size(), 62);
        return {p.x().low_word(), p.z().low_word(), (p.phase() + static_cast<unsigned>(p.num_y())) & 3u};
    }
    MaskPauli operator*(const MaskPauli& o) const {
        // X^a Z^b X^c Z^d = (-1)^{b.c} X^{a+c} Z^{b+d}
        unsigned ph = phase + o.phase + 2u * (std::popcount(z & o.x) & 1u);
        return {x ^ o.x, z ^ o.z, ph & 3u};
    }
    /// Amplitude factor of this operator on |b>: P|b> = factor * |b ^ x>.
    cplx factor_on(uint64_t b) const { return i_pow(phase + 2u * (std::popcount(b & z) & 1u)); }
};

/// Independent generators of the centre of the algebra generated by the
/// Hamiltonian terms: products of terms commuting with every term.
inline StabilizerGroup central_symmetries(const HamiltonianSpec& h) {
    size_t n = h.n_qubits, m = h.terms.size();
    std::vector<BitVector> pattern;
    for (size_t a = 0; a < m; ++a) {
        BitVector v(m);
        for (size_t b = 0; b < m; ++b)
            if (!commutes(h.terms[a].op, h.terms[b].op)) v.set(b, true);
        pattern.push_back(std::move(v));
    }
    std::vector<PauliString> gens;
    StabilizerGroup current(n);
    for (const auto& alpha : detail::gf2_kernel(pattern)) {
        PauliString p = PauliString::identity(n);
        for (size_t a : alpha.ones()) p *= h.terms[a].op;
        p.set_phase(0);
        if (p.is_scalar() || current.contains_up_to_sign(p)) continue;
        gens.push_back(p);
        current = StabilizerGroup(n, gens);
    }
    return current;
}

/// H restricted to one symmetry sector, stored as a sparse matrix over the
/// sector basis.
class SectorOperator {
  public:
    /// `signs[j]` is 0 for eigenvalue +1 and 1 for -1 of echelon row j of `sym`.
    SectorOperator(const HamiltonianSpec& h, const StabilizerGroup& sym, const std::vector<int>& signs) : n_(h.n_qubits) {
        check_cap(n_, 30);
        const auto& rows = sym.echelon();
        std::vector<MaskPauli> zrows;
        std::vector<int> zsign;
        for (size_t j = 0; j < rows.size(); ++j) {
            MaskPauli mp = MaskPauli::from(rows[j]);
            if (rows[j].x().none()) {
                zrows.push_back(mp);
                zsign.push_back(signs[j]);
            } else {
                xrows_.push_back(mp);
                xpivot_.push_back(uint64_t{1} << sym.pivots()[j]);
                xsign_.push_back(signs[j]);
            }
        }
        uint64_t pivmask = 0;
        for (uint64_t p : xpivot_) pivmask |= p;
        // Representatives: X-pivot bits clear, Z-row constraints satisfied.
        // A pure-Z row i^ph Z^z acts on |b> as i^ph (-1)^{b.z}.
        std::vector<uint64_t> free_bits;
        for (size_t q = 0; q < n_; ++q)
            if (!(pivmask >> q & 1u)) free_bits.push_back(q);
        index_.assign(size_t{1} << n_, -1);
        for (uint64_t s = 0; s < (uint64_t{1} << free_bits.size()); ++s) {
            uint64_t b = 0;
            for (size_t i = 0; i < free_bits.size(); ++i)
                if (s >> i & 1u) b |= uint64_t{1} << free_bits[i];
            bool ok = true;
            for (size_t i = 0; i < zrows.size() && ok; ++i) {
                cplx f = zrows[i].factor_on(b);
                ok = std::abs(f - cplx(zsign[i] ? -1.0 : 1.0)) < 1e-12;
            }
            if (!ok) continue;
            index_[b] = static_cast<int64_t>(reps_.size());
            reps_.push_back(b);
        }
        // Orbit elements g_I for every subset I of X rows.
        size_t R = xrows_.size();
        orbit_.resize(size_t{1} << R);
        orbit_chi_.resize(size_t{1} << R);
        for (size_t I = 0; I < orbit_.size(); ++I) {
            MaskPauli g{0, 0, 0};
            int chi = 0;
            for (size_t j = 0; j < R; ++j)
                if (I >> j & 1u) {
                    g = g * xrows_[j];
                    chi ^= xsign_[j];
                }
            orbit_[I] = g;
            orbit_chi_[I] = chi ? -1.0 : 1.0;
        }
        // Matrix elements: T P|r> = c (-1)^{r.z_T} P|b'> with b' = r ^ x_T,
        // and P|b'> = phi^{-1} chi(g) P|r'> where g|r'> = phi |b'>.
        std::vector<MaskPauli> terms;
        std::vector<double> coefs;
        for (const auto& t : h.terms) {
            terms.push_back(MaskPauli::from(t.op));
            coefs.push_back(t.coefficient);
        }
        real_ = true;
        row_ptr_.push_back(0);
        std::vector<std::vector<std::pair<int64_t, cplx>>> by_row(reps_.size());
        for (size_t ci = 0; ci < reps_.size(); ++ci) {
            uint64_t r = reps_[ci];
            for (size_t ti = 0; ti < terms.size(); ++ti) {
                const auto& T = terms[ti];
                cplx amp = coefs[ti] * T.factor_on(r);
                uint64_t bp = r ^ T.x;
                size_t I = 0;
                for (size_t j = 0; j < R; ++j)
                    if (bp & xpivot_[j]) I |= size_t{1} << j;
                const MaskPauli& g = orbit_[I];
                uint64_t rp = bp ^ g.x;
                int64_t ri = index_[rp];
                if (ri < 0) throw InconsistentGroup("term leaves the symmetry sector");
                cplx phi = g.factor_on(rp);
                cplx val = amp * orbit_chi_[I] / phi;
                by_row[ri].push_back({static_cast<int64_t>(ci), val});
            }
        }
        for (auto& r : by_row) {
            std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            for (size_t i = 0; i < r.size(); ++i) {
                if (static_cast<size_t>(row_ptr_.back()) < col_.size() && col_.back() == r[i].first) {
                    val_.back() += r[i].second;
                    continue;
                }
                col_.push_back(r[i].first);
                val_.push_back(r[i].second);
            }
            row_ptr_.push_back(static_cast<int64_t>(col_.size()));
        }
        for (auto& v : val_)
            if (std::abs(v.imag()) > 1e-14) real_ = false;
    }

    size_t n_qubits() const { return n_; }
    size_t dim() const { return reps_.size(); }
    bool is_real() const { return real_; }
    const std::vector<uint64_t>& representatives() const { return reps_; }

    template <typename S>
    void apply(const S* in, S* out) const {
        for (size_t i = 0; i < reps_.size(); ++i) {
            S acc = 0;
            for (int64_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
                if constexpr (std::is_same_v<S, double>) acc += val_[p].real() * in[col_[p]];
                else acc += val_[p] * in[col_[p]];
            }
            out[i] = acc;
        }
    }

    /// Full-space amplitudes of the sector vector with coefficients c.
    std::vector<cplx> lift(const cplx* c) const {
        std::vector<cplx> out(size_t{1} << n_, cplx{0, 0});
        double norm = 1.0 / std::sqrt(static_cast<double>(orbit_.size()));
        for (size_t i = 0; i < reps_.size(); ++i) {
            if (c[i] == cplx{0, 0}) continue;
            for (size_t I = 0; I < orbit_.size(); ++I) {
                const auto& g = orbit_[I];
                out[reps_[i] ^ g.x] += c[i] * norm * orbit_chi_[I] * g.factor_on(reps_[i]);
            }
        }
        return out;
    }

  private:
    size_t n_;
    std::vector<MaskPauli> xrows_;
    std::vector<uint64_t> xpivot_;
    std::vector<int> xsign_;
    std::vector<MaskPauli> orbit_;
    std::vector<double> orbit_chi_;
    std::vector<uint64_t> reps_;
    std::vector<int64_t> index_;
    std::vector<int64_t> row_ptr_, col_;
    std::vector<cplx> val_;
    bool real_ = true;
};

}  // namespace hexcode
