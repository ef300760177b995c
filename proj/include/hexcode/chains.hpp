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

// Transverse-field Ising rings and the chain ensemble image of the
// interpolated Hamiltonian.
//
// Ring convention: H = -g_c sum_i s_i X_i X_{i+1} - g_t sum_i Z_i with bond
// signs s_i = +1 except the closing bond, which carries the twist. Parity
// "even" means prod Z_i = +1.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "hexcode/eigensolver.hpp"
#include "hexcode/lattice.hpp"
#include "hexcode/models.hpp"
#include "hexcode/stabilizer.hpp"
#include "hexcode/state.hpp"

namespace hexcode {

enum class Parity : uint8_t { even = 0, odd = 1, both = 2 };

inline const char* to_string(Parity p) {
    static constexpr const char* names[] = {"even", "odd", "both"};
    return names[static_cast<int>(p)];
}

struct ChainSpec {
    size_t length = 2;
    double g_c = 1, g_t = 1;
    int twist = +1;  ///< product of bond signs
    std::optional<size_t> row;
    std::optional<Shade> shade;
};

struct ModelingMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline HamiltonianSpec chain_hamiltonian(const ChainSpec& c) {
    if (c.length < 2) throw std::invalid_argument("chain length must be at least 2");
    size_t N = c.length;
    HamiltonianSpec h{N, {}, c.g_t, c.g_c};
    for (size_t i = 0; i < N; ++i) {
        double s = (i == N - 1) ? c.twist : 1.0;
        std::vector<size_t> q{i, (i + 1) % N};
        h.terms.push_back({-c.g_c * s, PauliString::x_on(N, q), TermSource::external, i});
    }
    for (size_t i = 0; i < N; ++i) {
        std::vector<size_t> q{i};
        h.terms.push_back({-c.g_t, PauliString::z_on(N, q), TermSource::external, N + i});
    }
    deduplicate(h);
    return h;
}

/// Full spectrum of one ring restricted to a parity sector (dense).
inline std::vector<double> chain_dense_spectrum(const ChainSpec& c, Parity parity, size_t max_length = 14) {
    if (c.length > max_length) throw CapExceeded("dense chain spectrum capped at length " + std::to_string(max_length));
    CompiledHamiltonian H(chain_hamiltonian(c));
    Eigen::MatrixXd A = detail::dense_matrix<double>(H);
    std::vector<double> out;
    for (int p = 0; p < 2; ++p) {
        if (parity != Parity::both && static_cast<int>(parity) != p) continue;
        std::vector<Eigen::Index> idx;
        for (Eigen::Index b = 0; b < A.rows(); ++b)
            if ((std::popcount(static_cast<uint64_t>(b)) & 1) == p) idx.push_back(b);
        Eigen::MatrixXd S(idx.size(), idx.size());
        for (size_t i = 0; i < idx.size(); ++i)
            for (size_t j = 0; j < idx.size(); ++j) S(i, j) = A(idx[i], idx[j]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct FreeFermionModes {
    std::vector<double> momenta;
    std::vector<double> eps;  ///< E = sum eps_k (n_k - 1/2)
    bool antiperiodic = false;
    int parity = 0;  ///< required parity of sum n_k
};

/// Jordan-Wigner modes of a parity sector. The sector is antiperiodic in
/// momentum iff (even parity) == (twist +1); the k = 0 mode keeps its sign.
inline FreeFermionModes chain_ff_modes(const ChainSpec& c, Parity parity) {
    if (parity == Parity::both) throw std::invalid_argument("free-fermion modes need a definite parity");
    if (c.length < 2) throw std::invalid_argument("chain length must be at least 2");
    FreeFermionModes m;
    m.parity = static_cast<int>(parity);
    m.antiperiodic = (parity == Parity::even) == (c.twist > 0);
    size_t N = c.length;
    for (size_t j = 0; j < N; ++j) {
        double k = m.antiperiodic ? std::numbers::pi * (2.0 * j + 1) / N : 2 * std::numbers::pi * j / N;
        double e;
        if (!m.antiperiodic && j == 0) e = 2 * (c.g_t - c.g_c);
        else e = 2 * std::sqrt(std::max(0.0, c.g_t * c.g_t + c.g_c * c.g_c - 2 * c.g_t * c.g_c * std::cos(k)));
        m.momenta.push_back(k);
        m.eps.push_back(e);
    }
    return m;
}

/// The m smallest sums base + sum_{i in S} costs[i] over subsets S with
/// |S| = parity (mod 2), in nondecreasing order (best-first over subsets).
inline std::vector<double> smallest_subset_sums(double base, std::vector<double> costs, int parity, size_t m) {
    std::sort(costs.begin(), costs.end());
    std::vector<double> out;
    if (m == 0) return out;
    if (parity == 0) out.push_back(base);
    if (costs.empty()) return out;
    // Node: (sum, last index, size parity). Children of a subset with last
    // index i: add i+1, or replace i by i+1.
    using Node = std::tuple<double, size_t, int>;
    std::priority_queue<Node, std::vector<Node>, std::greater<>> heap;
    heap.push({costs[0], 0, 1});
    while (!heap.empty() && out.size() < m) {
        auto [s, i, par] = heap.top();
        heap.pop();
        if (par == parity) out.push_back(base + s);
        if (i + 1 < costs.size()) {
            heap.push({s + costs[i + 1], i + 1, par ^ 1});
            heap.push({s - costs[i] + costs[i + 1], i + 1, par});
        }
    }
    return out;
}

/// Lowest `max_levels` many-body levels of a parity sector from free
/// fermions; all 2^(N-1) levels when max_levels is 0 (requires N <= 24).
inline std::vector<double> chain_ff_spectrum(const ChainSpec& c, Parity parity, size_t max_levels = 0) {
    if (parity == Parity::both) {
        auto a = chain_ff_spectrum(c, Parity::even, max_levels);
        auto b = chain_ff_spectrum(c, Parity::odd, max_levels);
        a.insert(a.end(), b.begin(), b.end());
        std::sort(a.begin(), a.end());
        if (max_levels && a.size() > max_levels) a.resize(max_levels);
        return a;
    }
    if (max_levels == 0 && c.length > 24) throw CapExceeded("full free-fermion enumeration capped at length 24");
    size_t sector_dim = c.length >= 64 ? SIZE_MAX : (size_t{1} << (c.length - 1));
    size_t m = max_levels == 0 ? sector_dim : std::min(max_levels, sector_dim);
    auto modes = chain_ff_modes(c, parity);
    double base = 0;
    int base_parity = 0;
    std::vector<double> costs;
    for (double e : modes.eps) {
        base -= std::abs(e) / 2;
        if (e < 0) base_parity ^= 1;
        costs.push_back(std::abs(e));
    }
    return smallest_subset_sums(base, costs, modes.parity ^ base_parity, m);
}

/// E1 - E0 inside one parity sector.
inline double chain_sector_gap(const ChainSpec& c, Parity parity) {
    auto lv = chain_ff_spectrum(c, parity, 2);
    if (lv.size() < 2) throw std::invalid_argument("sector has a single level");
    return lv[1] - lv[0];
}

// ---------------------------------------------------------------------------
// Chain ensembles.

struct EnsembleRule {
    std::vector<size_t> vars;  ///< indices into ChainEnsemble::variables
    bool intrinsic = false;
};

struct EnsembleClass {
    std::vector<int> twists;  ///< per chain
    std::vector<int> rhs;     ///< per rule
    bool seed = false;        ///< the class containing the CC ground state
};

struct EnsembleSector {
    size_t cls = 0;
    std::vector<int> parities;  ///< per chain, 0 even / 1 odd
    size_t multiplicity = 1;    ///< admissible (i, j) labels
};

struct ChainEnsemble {
    std::vector<ChainSpec> chains;
    std::vector<std::string> variables;  ///< chain parities, then "i", "j"
    std::vector<EnsembleRule> rules;
    std::vector<EnsembleClass> classes;
    std::vector<EnsembleSector> sectors;
    size_t source_qubits = 0;
    std::string kind;  ///< "derived" or "naive"

    /// log2 of sum over sectors of multiplicity * prod chain sector dims.
    /// Exact integer arithmetic; returns the sum itself.
    unsigned long long total_dimension() const {
        unsigned long long total = 0;
        for (const auto& s : sectors) {
            unsigned long long d = s.multiplicity;
            for (const auto& c : chains) d <<= (c.length - 1);
            total += d;
        }
        return total;
    }
    bool audit() const { return source_qubits < 64 && total_dimension() == (1ull << source_qubits); }
};

namespace detail {

/// Solves sum_{a in alpha} vectors[a] = target over GF(2).
inline std::optional<BitVector> gf2_solve(const std::vector<BitVector>& vectors, const BitVector& target) {
    size_t m = vectors.size();
    std::vector<BitVector> rows, combo;
    std::vector<size_t> piv;
    for (size_t a = 0; a < m; ++a) {
        BitVector v = vectors[a], c(m);
        c.set(a, true);
        for (size_t r = 0; r < rows.size(); ++r)
            if (v.get(piv[r])) {
                v ^= rows[r];
                c ^= combo[r];
            }
        if (auto lead = v.lowest_set()) {
            rows.push_back(v);
            combo.push_back(c);
            piv.push_back(*lead);
        }
    }
    BitVector t = target, c(m);
    for (size_t r = 0; r < rows.size(); ++r)
        if (t.get(piv[r])) {
            t ^= rows[r];
            c ^= combo[r];
        }
    if (!t.none()) return std::nullopt;
    return c;
}

inline BitVector symplectic_vector(const PauliString& p) {
    size_t n = p.size();
    BitVector v(2 * n);
    for (size_t q : p.x().ones()) v.set(q, true);
    for (size_t q : p.z().ones()) v.set(n + q, true);
    return v;
}

}  // namespace detail

/// Measured set of the chain basis: every B_p and A_s (chain order, row by
/// row) followed by the sigma 0 TC logicals labeled i and j.
inline std::vector<LabeledPauli> chain_basis_operators(const HexTorus& t) {
    std::vector<LabeledPauli> m;
    size_t n = t.n_qubits();
    for (const auto* rows : {&t.light_rows, &t.dark_rows})
        for (const auto& ch : *rows)
            for (size_t s : ch.sites)
                m.push_back({std::string(ch.shade == Shade::light ? "r" : "w") + "[" + std::to_string(ch.row) + "," + std::to_string(t.trapezoids[s].position) + "]", t.trapezoid_op(s)});
    m.push_back({"i", t.loop(LoopKind::tc_noncontractible, PauliKind::z, 0).op(n)});
    m.push_back({"j", t.loop(LoopKind::tc_noncontractible, PauliKind::x, 0).op(n)});
    return m;
}

/// Stabilizer group of the CC ground state fixed by the X-type colored
/// logicals of colors red and blue in both directions.
inline StabilizerGroup cc_seed_group(const HexTorus& t) {
    size_t n = t.n_qubits();
    auto gens = t.cc_terms();
    for (int s = 0; s < 2; ++s)
        for (Color c : {Color::red, Color::blue}) gens.push_back(t.loop(LoopKind::cc_colored, PauliKind::x, s, c).op(n));
    return StabilizerGroup(n, gens);
}

/// Chain ensemble whose sector rules and twists come from the GF(2) sector
/// analysis of the chain basis over the CC ground state.
inline ChainEnsemble derive_ensemble(const HexTorus& t, double g_t, double g_c) {
    require_admissible(t);
    size_t n = t.n_qubits(), R = t.rows;
    auto M = chain_basis_operators(t);
    auto seed = cc_seed_group(t);
    if (seed.rank() != n) throw ModelingMismatch("CC seed group is not full rank");
    SectorAnalysis an = derive_sector_constraints(seed, M);

    ChainEnsemble e;
    e.kind = "derived";
    e.source_qubits = n;
    size_t nchains = 2 * R;
    std::vector<std::vector<size_t>> chain_vars(nchains);
    size_t a = 0;
    for (size_t c = 0; c < nchains; ++c) {
        const auto& ch = c < R ? t.light_rows[c] : t.dark_rows[c - R];
        ChainSpec spec;
        spec.length = ch.sites.size();
        spec.g_c = g_c;
        spec.g_t = g_t;
        spec.row = ch.row;
        spec.shade = ch.shade;
        e.chains.push_back(spec);
        e.variables.push_back(std::string(ch.shade == Shade::light ? "light" : "dark") + "[" + std::to_string(ch.row) + "]");
        for (size_t s = 0; s < ch.sites.size(); ++s) chain_vars[c].push_back(a++);
    }
    size_t var_i = nchains, var_j = nchains + 1;
    e.variables.push_back("i");
    e.variables.push_back("j");

    // Rules over M labels -> rules over chain parities and i, j.
    auto translate = [&](const std::vector<size_t>& vars) {
        std::set<size_t> vs(vars.begin(), vars.end());
        std::vector<size_t> out;
        for (size_t c = 0; c < nchains; ++c) {
            size_t hit = 0;
            for (size_t v : chain_vars[c]) hit += vs.count(v);
            if (hit == chain_vars[c].size()) out.push_back(c);
            else if (hit != 0) throw ModelingMismatch("a sector rule splits the sites of chain " + e.variables[c]);
        }
        if (vs.count(a)) out.push_back(var_i);
        if (vs.count(a + 1)) out.push_back(var_j);
        return out;
    };
    for (const auto& r : an.rules) e.rules.push_back({translate(r.vars), r.intrinsic});

    // Twist operators K = prod of bond terms, written in the M basis.
    std::vector<BitVector> mvec;
    for (const auto& lp : M) mvec.push_back(detail::symplectic_vector(lp.op));
    std::vector<BitVector> rule_vec;
    for (const auto& r : an.rules) rule_vec.push_back(BitVector::from_indices(M.size(), r.vars));
    struct TwistForm {
        int sign;
        BitVector coeffs;  ///< over rules
    };
    std::vector<TwistForm> twist_forms;
    for (size_t c = 0; c < nchains; ++c) {
        const auto& ch = c < R ? t.light_rows[c] : t.dark_rows[c - R];
        PauliString K = PauliString::identity(n);
        for (size_t h : ch.bonds) K *= (ch.shade == Shade::light ? t.hx(h) : t.hz(h));
        auto alpha = detail::gf2_solve(mvec, detail::symplectic_vector(K));
        if (!alpha) throw ModelingMismatch("twist operator of " + e.variables[c] + " is not generated by the chain basis");
        PauliString prod = PauliString::identity(n);
        for (size_t v : alpha->ones()) prod *= M[v].op;
        int sign;
        if (prod == K) sign = +1;
        else if (prod == K.negated()) sign = -1;
        else throw ModelingMismatch("twist operator phase mismatch");
        auto coeffs = detail::gf2_solve(rule_vec, *alpha);
        if (!coeffs) throw ModelingMismatch("twist of " + e.variables[c] + " is not fixed by the sector rules");
        twist_forms.push_back({sign, *coeffs});
    }

    // Classes: every right-hand side of the state rules; intrinsic rules keep
    // their value.
    size_t nrules = an.rules.size();
    std::vector<size_t> state_idx;
    for (size_t r = 0; r < nrules; ++r)
        if (!an.rules[r].intrinsic) state_idx.push_back(r);
    for (size_t cls = 0; cls < (size_t{1} << state_idx.size()); ++cls) {
        EnsembleClass ec;
        ec.rhs.resize(nrules);
        bool is_seed = true;
        for (size_t r = 0, s = 0; r < nrules; ++r) {
            if (an.rules[r].intrinsic) ec.rhs[r] = an.rules[r].parity;
            else {
                ec.rhs[r] = (cls >> s++) & 1u;
                if (ec.rhs[r] != an.rules[r].parity) is_seed = false;
            }
        }
        ec.seed = is_seed;
        for (const auto& tf : twist_forms) {
            int v = 0;
            for (size_t r : tf.coeffs.ones()) v ^= ec.rhs[r];
            ec.twists.push_back(v ? -tf.sign : tf.sign);
        }
        e.classes.push_back(std::move(ec));
    }

    // Sectors: parity assignments admitted by the rules, with the number of
    // admissible (i, j).
    for (size_t cls = 0; cls < e.classes.size(); ++cls) {
        const auto& ec = e.classes[cls];
        for (size_t pm = 0; pm < (size_t{1} << nchains); ++pm) {
            size_t mult = 0;
            for (size_t ij = 0; ij < 4; ++ij) {
                std::vector<int> val(nchains + 2);
                for (size_t c = 0; c < nchains; ++c) val[c] = (pm >> c) & 1u;
                val[var_i] = ij & 1u;
                val[var_j] = (ij >> 1) & 1u;
                bool ok = true;
                for (size_t r = 0; r < nrules && ok; ++r) {
                    int s = 0;
                    for (size_t v : e.rules[r].vars) s ^= val[v];
                    ok = s == ec.rhs[r];
                }
                if (ok) ++mult;
            }
            if (mult == 0) continue;
            EnsembleSector sec;
            sec.cls = cls;
            for (size_t c = 0; c < nchains; ++c) sec.parities.push_back((pm >> c) & 1u);
            sec.multiplicity = mult;
            e.sectors.push_back(std::move(sec));
        }
    }
    if (!e.audit()) throw ModelingMismatch("ensemble dimension audit failed: " + std::to_string(e.total_dimension()) + " != 2^" + std::to_string(n));
    return e;
}

/// Naive ensemble: periodic chains, one global parity constraint
/// per shade, 4-fold (i, j) multiplicity.
inline ChainEnsemble naive_ensemble(const HexTorus& t, double g_t, double g_c) {
    require_admissible(t);
    ChainEnsemble e;
    e.kind = "naive";
    e.source_qubits = t.n_qubits();
    size_t R = t.rows, nchains = 2 * R;
    for (size_t c = 0; c < nchains; ++c) {
        const auto& ch = c < R ? t.light_rows[c] : t.dark_rows[c - R];
        ChainSpec spec;
        spec.length = ch.sites.size();
        spec.g_c = g_c;
        spec.g_t = g_t;
        spec.row = ch.row;
        spec.shade = ch.shade;
        e.chains.push_back(spec);
        e.variables.push_back(std::string(ch.shade == Shade::light ? "light" : "dark") + "[" + std::to_string(ch.row) + "]");
    }
    e.variables.push_back("i");
    e.variables.push_back("j");
    EnsembleRule light, dark;
    for (size_t c = 0; c < R; ++c) light.vars.push_back(c);
    for (size_t c = R; c < nchains; ++c) dark.vars.push_back(c);
    light.intrinsic = dark.intrinsic = true;
    e.rules = {light, dark};
    e.classes.push_back({std::vector<int>(nchains, +1), {0, 0}, true});
    for (size_t pm = 0; pm < (size_t{1} << nchains); ++pm) {
        int pl = 0, pd = 0;
        for (size_t c = 0; c < nchains; ++c) (c < R ? pl : pd) ^= (pm >> c) & 1u;
        if (pl || pd) continue;
        EnsembleSector sec;
        for (size_t c = 0; c < nchains; ++c) sec.parities.push_back((pm >> c) & 1u);
        sec.multiplicity = 4;
        e.sectors.push_back(std::move(sec));
    }
    return e;
}

/// Best-first merge of sorted lists: the k smallest values of
/// sum_c lists[c][j_c] over all index tuples, ascending.
inline std::vector<double> k_smallest_sums(const std::vector<std::vector<double>>& lists, size_t k) {
    std::vector<double> out;
    if (k == 0) return out;
    for (const auto& l : lists)
        if (l.empty()) return out;
    size_t L = lists.size();
    using Tuple = std::vector<uint32_t>;
    auto value = [&](const Tuple& t) {
        double s = 0;
        for (size_t c = 0; c < L; ++c) s += lists[c][t[c]];
        return s;
    };
    // Each tuple has one parent: decrement its last nonzero coordinate.
    // Children of t therefore increment coordinates j >= last nonzero of t.
    using Node = std::pair<double, Tuple>;
    auto cmp = [](const Node& a, const Node& b) { return a.first > b.first || (a.first == b.first && a.second > b.second); };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> heap(cmp);
    Tuple z(L, 0);
    heap.push({value(z), z});
    while (!heap.empty() && out.size() < k) {
        auto [v, tup] = heap.top();
        heap.pop();
        out.push_back(v);
        size_t p = 0;
        for (size_t c = L; c-- > 0;)
            if (tup[c] != 0) {
                p = c;
                break;
            }
        for (size_t j = p; j < L; ++j) {
            if (tup[j] + 1 >= lists[j].size()) continue;
            Tuple ch = tup;
            ++ch[j];
            heap.push({value(ch), std::move(ch)});
        }
    }
    return out;
}

/// The k lowest ensemble levels (multiplicities expanded), ascending.
inline std::vector<double> assemble_k_lowest(const ChainEnsemble& e, size_t k) {
    if (k > e.total_dimension()) throw std::invalid_argument("k exceeds the admitted ensemble dimension");
    std::map<std::tuple<size_t, int, int>, std::vector<double>> cache;
    auto chain_levels = [&](size_t c, int twist, int parity) -> const std::vector<double>& {
        auto key = std::make_tuple(c, twist, parity);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        ChainSpec spec = e.chains[c];
        spec.twist = twist;
        return cache[key] = chain_ff_spectrum(spec, parity ? Parity::odd : Parity::even, k);
    };
    struct Stream {
        std::vector<double> values;
        size_t multiplicity;
    };
    std::vector<double> all;
    for (const auto& s : e.sectors) {
        std::vector<std::vector<double>> lists;
        for (size_t c = 0; c < e.chains.size(); ++c) lists.push_back(chain_levels(c, e.classes[s.cls].twists[c], s.parities[c]));
        size_t need = (k + s.multiplicity - 1) / s.multiplicity;
        for (double v : k_smallest_sums(lists, need))
            for (size_t m = 0; m < s.multiplicity; ++m) all.push_back(v);
    }
    std::sort(all.begin(), all.end());
    if (all.size() > k) all.resize(k);
    return all;
}

struct VerificationReport {
    size_t rows = 0, cols = 0;
    double g_t = 0, g_c = 0;
    size_t k = 0;
    double tol = 0;
    std::vector<double> ed, predicted, naive_predicted;
    std::vector<size_t> ed_multiplicities, predicted_multiplicities;
    double max_abs_diff = 0, naive_max_abs_diff = 0;
    bool multiplicity_ok = false;
    bool multiplicity_div4 = false;
    bool match = false;
    ChainEnsemble ensemble;
    SpectrumReport spectrum;
};

namespace detail {

/// Multiplicities of the clusters that start before index k; the list holds
/// extra levels so such clusters are complete unless they reach its end.
inline std::vector<size_t> leading_multiplicities(const std::vector<double>& v, size_t k, double rel_tol) {
    std::vector<size_t> out;
    for (auto [a, b] : cluster_levels(v, rel_tol))
        if (a < k) out.push_back(b - a + 1);
    return out;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b, size_t k) {
    double m = 0;
    for (size_t i = 0; i < k && i < a.size() && i < b.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    if (a.size() < k || b.size() < k) m = INFINITY;
    return m;
}

}  // namespace detail

/// Compares the lowest k levels of the interpolated Hamiltonian with the
/// derived chain ensemble (and the naive one).
inline VerificationReport map_verify(const HexTorus& t, double g_t, double g_c, size_t k, double tol, const SolverOptions& opt = {}, size_t extra = 12) {
    VerificationReport rep;
    rep.rows = t.rows;
    rep.cols = t.cols;
    rep.g_t = g_t;
    rep.g_c = g_c;
    rep.k = k;
    rep.tol = tol;
    rep.ensemble = derive_ensemble(t, g_t, g_c);
    auto naive = naive_ensemble(t, g_t, g_c);
    size_t kk = k + extra;
    rep.spectrum = lowest_eigs(interpolate(t, g_t, g_c), kk, opt);
    auto pred = assemble_k_lowest(rep.ensemble, kk);
    auto npred = assemble_k_lowest(naive, kk);
    rep.ed.assign(rep.spectrum.eigenvalues.begin(), rep.spectrum.eigenvalues.begin() + k);
    rep.predicted.assign(pred.begin(), pred.begin() + k);
    rep.naive_predicted.assign(npred.begin(), npred.begin() + k);
    rep.max_abs_diff = detail::max_abs_diff(rep.spectrum.eigenvalues, pred, k);
    rep.naive_max_abs_diff = detail::max_abs_diff(rep.spectrum.eigenvalues, npred, k);
    rep.ed_multiplicities = detail::leading_multiplicities(rep.spectrum.eigenvalues, k, opt.cluster_tol);
    rep.predicted_multiplicities = detail::leading_multiplicities(pred, k, opt.cluster_tol);
    rep.multiplicity_ok = rep.ed_multiplicities == rep.predicted_multiplicities;
    // Only clusters that end inside the extended list are complete.
    auto cl = cluster_levels(rep.spectrum.eigenvalues, opt.cluster_tol);
    rep.multiplicity_div4 = true;
    for (auto [a, b] : cl)
        if (a < k && b + 1 < rep.spectrum.eigenvalues.size() && (b - a + 1) % 4 != 0) rep.multiplicity_div4 = false;
    rep.match = rep.max_abs_diff <= tol && rep.multiplicity_ok;
    return rep;
}

/// Lowest levels of the ensemble up to and including the first level above
/// the ground cluster.
inline std::pair<double, double> ensemble_ground_and_gap(const ChainEnsemble& e, double cluster_tol = 1e-8) {
    size_t k = 8;
    while (true) {
        auto lv = assemble_k_lowest(e, std::min<unsigned long long>(k, e.total_dimension()));
        auto cl = cluster_levels(lv, cluster_tol);
        if (cl.size() >= 2) return {lv[0], lv[cl[1].first] - lv[0]};
        if (lv.size() >= e.total_dimension()) return {lv[0], 0.0};
        k *= 2;
    }
}

struct GapCurve {
    std::vector<double> ratios, gaps;
    size_t argmin = 0;
    double argmin_ratio() const { return ratios.at(argmin); }
};

inline std::vector<double> ratio_grid(double lo, double hi, double step) {
    if (!(step > 0) || hi < lo) throw std::invalid_argument("bad ratio grid");
    std::vector<double> out;
    size_t count = static_cast<size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (size_t i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

inline size_t argmin_of(const std::vector<double>& v) { return static_cast<size_t>(std::min_element(v.begin(), v.end()) - v.begin()); }

/// Single periodic ring, g_c = 1, g_t = ratio: gap inside the even sector,
/// which holds the ground state.
inline GapCurve chain_gap_curve(size_t length, const std::vector<double>& ratios) {
    GapCurve g;
    g.ratios = ratios;
    for (double r : ratios) {
        ChainSpec c;
        c.length = length;
        c.g_c = 1;
        c.g_t = r;
        g.gaps.push_back(chain_sector_gap(c, Parity::even));
    }
    g.argmin = argmin_of(g.gaps);
    return g;
}

/// Derived-ensemble gap (first level above the ground cluster) on a ratio
/// grid with g_c = 1, g_t = ratio.
inline GapCurve ensemble_gap_curve(const HexTorus& t, const std::vector<double>& ratios, double cluster_tol = 1e-8) {
    GapCurve g;
    g.ratios = ratios;
    for (double r : ratios) g.gaps.push_back(ensemble_ground_and_gap(derive_ensemble(t, r, 1.0), cluster_tol).second);
    g.argmin = argmin_of(g.gaps);
    return g;
}

}  // namespace hexcode
