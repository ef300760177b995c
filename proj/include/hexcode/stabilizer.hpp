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
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hexcode/pauli.hpp"

namespace hexcode {

struct NonCommutingGenerators : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InconsistentGroup : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct RankDeficient : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Membership { not_member, plus, minus };

inline const char* to_string(Membership m) {
    switch (m) {
        case Membership::plus: return "+1";
        case Membership::minus: return "-1";
        default: return "not_member";
    }
}

/// Column order of the symplectic matrix: x bits first, then z bits.
inline std::optional<size_t> leading_column(const PauliString& p) {
    if (auto c = p.x().lowest_set()) return *c;
    if (auto c = p.z().lowest_set()) return p.size() + *c;
    return std::nullopt;
}

inline bool symplectic_bit(const PauliString& p, size_t col) {
    return col < p.size() ? p.x().get(col) : p.z().get(col - p.size());
}

/// Abelian Pauli group given by independent generators, with a signed
/// reduced row echelon form computed at construction.
///
/// Rows of the echelon are actual group elements (products of generators,
/// phases included), so reducing an operator against them tracks its sign
/// exactly.
class StabilizerGroup {
  public:
    StabilizerGroup() = default;
    explicit StabilizerGroup(size_t n) : n_(n), pivot_row_(2 * n, -1) {}

    /// Builds the group generated by `gens`. GF(2)-dependent generators whose
    /// sign agrees with the group are dropped; a dependent generator with the
    /// opposite sign means -I is generated and raises InconsistentGroup.
    StabilizerGroup(size_t n, std::span<const PauliString> gens) : StabilizerGroup(n) {
        for (const auto& g : gens) add(g);
        finalize();
    }
    StabilizerGroup(size_t n, const std::vector<PauliString>& gens)
        : StabilizerGroup(n, std::span<const PauliString>(gens)) {}

    size_t n_qubits() const { return n_; }
    size_t rank() const { return rows_.size(); }
    const std::vector<PauliString>& generators() const { return gens_; }
    /// Reduced echelon rows sorted by pivot column; each pivot column is set
    /// in exactly one row.
    const std::vector<PauliString>& echelon() const { return rows_; }
    const std::vector<size_t>& pivots() const { return pivots_; }
    /// Number of input generators that were dropped as dependent.
    size_t dropped() const { return dropped_; }

    /// Returns a group containing this one plus `extra` generators.
    StabilizerGroup extended(std::span<const PauliString> extra) const {
        std::vector<PauliString> all = gens_;
        all.insert(all.end(), extra.begin(), extra.end());
        return StabilizerGroup(n_, all);
    }

    Membership member_with_sign(const PauliString& p) const {
        check(p);
        if (!p.is_hermitian()) throw std::invalid_argument("member_with_sign needs a Hermitian operator");
        auto rem = reduce(p);
        if (!rem.is_scalar()) return Membership::not_member;
        // rem = p * G  with G in the group, so p = i^phase * G.
        return rem.phase() == 0 ? Membership::plus : Membership::minus;
    }

    bool contains_up_to_sign(const PauliString& p) const {
        check(p);
        return reduce(p).is_scalar();
    }

    /// <phi|p|phi> for the unique state fixed by a full-rank group.
    int expectation(const PauliString& p) const {
        if (rank() != n_) throw RankDeficient("stabilizer state needs rank " + std::to_string(n_) + ", have " + std::to_string(rank()));
        switch (member_with_sign(p)) {
            case Membership::plus: return 1;
            case Membership::minus: return -1;
            default: return 0;
        }
    }

    /// Remainder of p after clearing every pivot column with echelon rows.
    PauliString reduce(PauliString p) const {
        for (size_t r = 0; r < rows_.size(); ++r)
            if (symplectic_bit(p, pivots_[r])) p *= rows_[r];
        return p;
    }

  private:
    void check(const PauliString& p) const {
        if (p.size() != n_) throw SizeMismatch("operator has " + std::to_string(p.size()) + " qubits, group has " + std::to_string(n_));
    }

    void add(const PauliString& g) {
        check(g);
        if (!g.is_hermitian()) throw std::invalid_argument("generator " + g.str() + " is not Hermitian");
        for (const auto& h : gens_)
            if (!commutes(g, h)) throw NonCommutingGenerators(g.str() + " anticommutes with " + h.str());
        PauliString q = g;
        while (auto c = leading_column(q)) {
            int r = pivot_row_[*c];
            if (r < 0) break;
            q *= staging_[r];
        }
        if (auto c = leading_column(q)) {
            pivot_row_[*c] = static_cast<int>(staging_.size());
            staging_.push_back(q);
            gens_.push_back(g);
            return;
        }
        if (q.phase() != 0) throw InconsistentGroup("generator " + g.str() + " makes -I a group element");
        ++dropped_;
    }

    void finalize() {
        std::vector<size_t> order(staging_.size());
        std::iota(order.begin(), order.end(), 0);
        std::vector<size_t> piv(staging_.size());
        for (size_t r = 0; r < staging_.size(); ++r) piv[r] = *leading_column(staging_[r]);
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return piv[a] < piv[b]; });
        rows_.clear();
        pivots_.clear();
        for (size_t r : order) {
            rows_.push_back(staging_[r]);
            pivots_.push_back(piv[r]);
        }
        // Back substitution: clear each pivot column from all other rows.
        for (size_t r = rows_.size(); r-- > 0;)
            for (size_t s = 0; s < rows_.size(); ++s)
                if (s != r && symplectic_bit(rows_[s], pivots_[r])) rows_[s] *= rows_[r];
        staging_.clear();
        std::fill(pivot_row_.begin(), pivot_row_.end(), -1);
    }

    size_t n_ = 0;
    std::vector<PauliString> gens_;
    std::vector<PauliString> rows_;
    std::vector<size_t> pivots_;
    std::vector<PauliString> staging_;
    std::vector<int> pivot_row_;
    size_t dropped_ = 0;
};

/// GF(2) rank of the symplectic matrix of `ops`, signs ignored.
inline size_t symplectic_rank(size_t n, std::span<const PauliString> ops) {
    std::vector<BitVector> rows;
    for (const auto& p : ops) {
        BitVector v(2 * n);
        for (size_t q : p.x().ones()) v.set(q, true);
        for (size_t q : p.z().ones()) v.set(n + q, true);
        rows.push_back(std::move(v));
    }
    size_t rank = 0;
    for (size_t col = 0; col < 2 * n && rank < rows.size(); ++col) {
        size_t piv = rank;
        while (piv < rows.size() && !rows[piv].get(col)) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        for (size_t r = 0; r < rows.size(); ++r)
            if (r != rank && rows[r].get(col)) rows[r] ^= rows[rank];
        ++rank;
    }
    return rank;
}

/// Labeled measured operator (for sector analysis).
struct LabeledPauli {
    std::string label;
    PauliString op;
};

/// XOR of sigma over `vars` must equal `parity` (sigma_a = 1 means the -1
/// eigenvalue of operator a).
struct SectorRule {
    std::vector<size_t> vars;
    int parity = 0;
    /// True when the rule follows from a product identity inside M alone
    /// (the operators multiply to a scalar); false when it depends on the state.
    bool intrinsic = false;
};

struct SectorAnalysis {
    size_t n_qubits = 0;
    std::vector<std::string> labels;
    std::vector<SectorRule> rules;  ///< intrinsic rules first, then state rules
    size_t rank_m = 0;              ///< symplectic rank of M
    size_t intrinsic_rules = 0;     ///< |M| - rank_m
    size_t state_rules = 0;         ///< rules contributed by the state
    /// 2^(|M| - #rules) sign patterns survive.
    size_t log2_valid_sectors() const { return labels.size() - rules.size(); }
    /// log2 of the eigenspace dimension of one consistent sign pattern.
    size_t log2_sector_dim() const { return n_qubits - rank_m; }
    /// log2 of <phi|P_sigma|phi> for each surviving sigma (the overlap is
    /// uniform over them): state_rules - rank_m.
    long log2_overlap() const { return static_cast<long>(state_rules) - static_cast<long>(rank_m); }

    bool satisfied(const std::vector<int>& sigma) const {
        for (const auto& r : rules) {
            int s = 0;
            for (size_t v : r.vars) s ^= sigma[v] & 1;
            if (s != r.parity) return false;
        }
        return true;
    }
};

namespace detail {

inline std::vector<PauliString> ops_of(const std::vector<LabeledPauli>& m) {
    std::vector<PauliString> out;
    for (const auto& lp : m) out.push_back(lp.op);
    return out;
}

/// Gaussian elimination helper over rows of equal width that also records
/// which input rows were combined. Returns the kernel (combinations that
/// reduce to zero), one basis vector per dependent input row.
inline std::vector<BitVector> gf2_kernel(const std::vector<BitVector>& vectors) {
    size_t m = vectors.size();
    std::vector<BitVector> rows, combo;
    std::vector<size_t> piv;
    std::vector<BitVector> kernel;
    for (size_t a = 0; a < m; ++a) {
        BitVector v = vectors[a];
        BitVector c(m);
        c.set(a, true);
        for (size_t r = 0; r < rows.size(); ++r)
            if (v.get(piv[r])) {
                v ^= rows[r];
                c ^= combo[r];
            }
        if (auto lead = v.lowest_set()) {
            // Keep rows fully reduced on their pivots.
            for (size_t r = 0; r < rows.size(); ++r)
                if (rows[r].get(*lead)) {
                    rows[r] ^= v;
                    combo[r] ^= c;
                }
            rows.push_back(v);
            combo.push_back(c);
            piv.push_back(*lead);
        } else {
            kernel.push_back(c);
        }
    }
    return kernel;
}

/// Reduced row echelon form of GF(2) rows with an attached constant bit.
inline void gf2_rref(std::vector<BitVector>& rows, std::vector<int>& rhs) {
    if (rows.empty()) return;
    size_t width = rows[0].size();
    size_t rank = 0;
    for (size_t col = 0; col < width && rank < rows.size(); ++col) {
        size_t p = rank;
        while (p < rows.size() && !rows[p].get(col)) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[rank], rows[p]);
        std::swap(rhs[rank], rhs[p]);
        for (size_t r = 0; r < rows.size(); ++r)
            if (r != rank && rows[r].get(col)) {
                rows[r] ^= rows[rank];
                rhs[r] ^= rhs[rank];
            }
        ++rank;
    }
    rows.resize(rank);
    rhs.resize(rank);
}

}  // namespace detail

/// Finds every parity rule on the sign pattern sigma of the commuting set M
/// that is forced by the stabilizer state of S_phi.
///
/// A combination alpha yields a rule when prod_{a in alpha} M_a = s * G with
/// G in S_phi (or G = I): then <phi|P_sigma|phi> vanishes unless
/// (-1)^{sum sigma_a} = s. The rule basis is returned in reduced echelon form,
/// the intrinsic part (G = I) first.
inline SectorAnalysis derive_sector_constraints(const StabilizerGroup& s_phi, const std::vector<LabeledPauli>& m) {
    size_t n = s_phi.n_qubits();
    if (s_phi.rank() != n) throw RankDeficient("derive_sector_constraints needs a full-rank state group");
    for (size_t a = 0; a < m.size(); ++a) {
        if (m[a].op.size() != n) throw SizeMismatch("measured operator " + m[a].label + " has wrong size");
        if (!m[a].op.is_hermitian()) throw std::invalid_argument("measured operator " + m[a].label + " is not Hermitian");
        for (size_t b = 0; b < a; ++b)
            if (!commutes(m[a].op, m[b].op))
                throw NonCommutingGenerators("measured operators " + m[a].label + " and " + m[b].label + " anticommute");
    }
    SectorAnalysis out;
    out.n_qubits = n;
    for (const auto& lp : m) out.labels.push_back(lp.label);
    size_t k = m.size();
    if (k == 0) return out;

    auto symplectic = [&](const PauliString& p) {
        BitVector v(2 * n);
        for (size_t q : p.x().ones()) v.set(q, true);
        for (size_t q : p.z().ones()) v.set(n + q, true);
        return v;
    };
    auto product = [&](const BitVector& alpha) {
        PauliString prod = PauliString::identity(n);
        for (size_t a : alpha.ones()) prod *= m[a].op;
        return prod;
    };
    auto sign_parity = [&](const PauliString& prod) -> int {
        Membership mem = s_phi.member_with_sign(prod);
        if (mem == Membership::not_member) throw InconsistentGroup("kernel element is not in the state group");
        return mem == Membership::minus ? 1 : 0;
    };

    // Intrinsic identities: combinations of M multiplying to a scalar.
    std::vector<BitVector> raw;
    for (const auto& lp : m) raw.push_back(symplectic(lp.op));
    std::vector<BitVector> intrinsic = detail::gf2_kernel(raw);
    out.rank_m = k - intrinsic.size();

    // State identities. S_phi is maximal abelian, so a Hermitian product of
    // M lies in +-S_phi iff it commutes with every generator of S_phi.
    const auto& gens = s_phi.generators();
    std::vector<BitVector> pattern;
    for (const auto& lp : m) {
        BitVector v(gens.size());
        for (size_t g = 0; g < gens.size(); ++g)
            if (!commutes(lp.op, gens[g])) v.set(g, true);
        pattern.push_back(std::move(v));
    }
    std::vector<BitVector> full = detail::gf2_kernel(pattern);

    std::vector<BitVector> irows;
    std::vector<int> irhs;
    for (const auto& alpha : intrinsic) {
        irows.push_back(alpha);
        irhs.push_back(sign_parity(product(alpha)));
    }
    detail::gf2_rref(irows, irhs);

    // Extend the intrinsic span to the full kernel.
    std::vector<BitVector> span_rows = irows;
    std::vector<size_t> span_piv;
    for (const auto& r : span_rows) span_piv.push_back(*r.lowest_set());
    std::vector<BitVector> srows;
    std::vector<int> srhs;
    for (const auto& alpha : full) {
        BitVector v = alpha;
        for (size_t r = 0; r < span_rows.size(); ++r)
            if (v.get(span_piv[r])) v ^= span_rows[r];
        if (v.none()) continue;
        // Keep the extension independent of what was kept so far.
        auto lead = *v.lowest_set();
        for (size_t r = 0; r < span_rows.size(); ++r)
            if (span_rows[r].get(lead)) span_rows[r] ^= v;
        span_rows.push_back(v);
        span_piv.push_back(lead);
        srows.push_back(v);
        srhs.push_back(0);
    }
    for (size_t r = 0; r < srows.size(); ++r) srhs[r] = sign_parity(product(srows[r]));
    detail::gf2_rref(srows, srhs);
    // Clear intrinsic pivots out of the state rules so the listing is canonical.
    for (size_t r = 0; r < srows.size(); ++r)
        for (size_t i = 0; i < irows.size(); ++i)
            if (srows[r].get(*irows[i].lowest_set())) {
                srows[r] ^= irows[i];
                srhs[r] ^= irhs[i];
            }
    for (size_t r = 0; r < srows.size(); ++r) srhs[r] = sign_parity(product(srows[r]));

    out.intrinsic_rules = irows.size();
    out.state_rules = srows.size();
    for (size_t r = 0; r < irows.size(); ++r) out.rules.push_back({irows[r].ones(), irhs[r], true});
    for (size_t r = 0; r < srows.size(); ++r) out.rules.push_back({srows[r].ones(), srhs[r], false});

    // Dimension audit, in exponents. Each of the 2^state_rules right-hand
    // sides of the state rules is a class of 2^patterns sign patterns with
    // eigenspaces of dimension 2^(n - rank M); together they rebuild 2^n. Inside
    // one class the overlaps 2^(state_rules - rank M) must sum to 1.
    if (out.rank_m != symplectic_rank(n, detail::ops_of(m)))
        throw InconsistentGroup("sector audit: rank of M disagrees with direct elimination");
    long classes = static_cast<long>(out.state_rules);
    long patterns = static_cast<long>(out.log2_valid_sectors());
    long dim = static_cast<long>(out.log2_sector_dim());
    if (out.state_rules > out.rank_m || classes + patterns + dim != static_cast<long>(n) || patterns + out.log2_overlap() != 0)
        throw InconsistentGroup("sector dimension audit failed");
    return out;
}

}  // namespace hexcode
