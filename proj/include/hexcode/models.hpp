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

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hexcode/lattice.hpp"
#include "hexcode/pauli.hpp"
#include "hexcode/stabilizer.hpp"

namespace hexcode {

enum class TermSource : uint8_t { tc_light = 0, tc_dark = 1, cc_x = 2, cc_z = 3, external = 4 };

inline const char* to_string(TermSource s) {
    static constexpr const char* names[] = {"tc_light", "tc_dark", "cc_x", "cc_z", "external"};
    return names[static_cast<int>(s)];
}

struct Term {
    double coefficient = 0;
    PauliString op;
    TermSource source = TermSource::external;
    size_t index = 0;  ///< trapezoid index for TC terms, hexagon index for CC terms
};

/// Weighted Pauli sum. Coefficients already carry the minus sign of the
/// model (a frustration-free ground state has energy -sum |coefficient|).
struct HamiltonianSpec {
    size_t n_qubits = 0;
    std::vector<Term> terms;
    double g_t = 0, g_c = 0;

    double frustration_free_bound() const {
        double s = 0;
        for (const auto& t : terms) s -= std::abs(t.coefficient);
        return s;
    }
};

/// Merges terms with equal Pauli content; operators are stored with phase 0.
inline void deduplicate(HamiltonianSpec& h) {
    std::map<std::pair<BitVector, BitVector>, size_t> seen;
    std::vector<Term> out;
    for (auto t : h.terms) {
        if (t.op.size() != h.n_qubits) throw SizeMismatch("term size differs from Hamiltonian size");
        if (!t.op.is_hermitian()) throw std::invalid_argument("term " + t.op.str() + " is not Hermitian");
        if (t.op.phase() == 2) t.coefficient = -t.coefficient;
        t.op.set_phase(0);
        auto key = std::make_pair(t.op.x(), t.op.z());
        auto it = seen.find(key);
        if (it == seen.end()) {
            seen.emplace(key, out.size());
            out.push_back(std::move(t));
        } else {
            out[it->second].coefficient += t.coefficient;
        }
    }
    h.terms = std::move(out);
}

inline void require_admissible(const HexTorus& t) {
    auto rep = validate(t);
    for (const auto& c : rep.checks)
        if (!c.passed) throw InadmissibleTorus("torus is not admissible: check " + c.name + " failed (" + c.detail + ")");
}

namespace detail {

inline void append_cc(const HexTorus& t, HamiltonianSpec& h, double g) {
    for (size_t p = 0; p < t.n_hexagons(); ++p) h.terms.push_back({-g, t.hx(p), TermSource::cc_x, p});
    for (size_t p = 0; p < t.n_hexagons(); ++p) h.terms.push_back({-g, t.hz(p), TermSource::cc_z, p});
}
inline void append_tc(const HexTorus& t, HamiltonianSpec& h, double g) {
    for (size_t i : t.trapezoids_of(Shade::light)) h.terms.push_back({-g, t.trapezoid_op(i), TermSource::tc_light, i});
    for (size_t i : t.trapezoids_of(Shade::dark)) h.terms.push_back({-g, t.trapezoid_op(i), TermSource::tc_dark, i});
}

}  // namespace detail

inline HamiltonianSpec cc_hamiltonian(const HexTorus& t) {
    require_admissible(t);
    HamiltonianSpec h{t.n_qubits(), {}, 0, 1};
    detail::append_cc(t, h, 1);
    deduplicate(h);
    return h;
}

inline HamiltonianSpec tc_hamiltonian(const HexTorus& t) {
    require_admissible(t);
    HamiltonianSpec h{t.n_qubits(), {}, 1, 0};
    detail::append_tc(t, h, 1);
    deduplicate(h);
    return h;
}

/// H = -g_t * sum(TC terms) - g_c * sum(CC terms). Zero-coupling terms are
/// kept so the term list always has 4P entries.
inline HamiltonianSpec interpolate(const HexTorus& t, double g_t, double g_c) {
    if (!(g_t >= 0) || !(g_c >= 0) || !std::isfinite(g_t) || !std::isfinite(g_c)) throw std::invalid_argument("couplings must be finite and non-negative");
    if (g_t == 0 && g_c == 0) throw std::invalid_argument("couplings g_t and g_c are both zero");
    require_admissible(t);
    HamiltonianSpec h{t.n_qubits(), {}, g_t, g_c};
    detail::append_tc(t, h, g_t);
    detail::append_cc(t, h, g_c);
    deduplicate(h);
    return h;
}

struct Violation {
    TermSource source;
    size_t index;       ///< trapezoid or hexagon index
    size_t term_index;  ///< position in the Hamiltonian term list
    bool operator==(const Violation&) const = default;
};

struct Syndrome {
    std::vector<Violation> flipped;
    size_t size() const { return flipped.size(); }
    bool empty() const { return flipped.empty(); }
    size_t count(TermSource s) const {
        size_t c = 0;
        for (const auto& v : flipped)
            if (v.source == s) ++c;
        return c;
    }
};

inline Syndrome syndrome(const HamiltonianSpec& h, const PauliString& p) {
    if (p.size() != h.n_qubits) throw SizeMismatch("syndrome operator has wrong size");
    if (!p.is_hermitian()) throw std::invalid_argument("syndrome operator must be Hermitian");
    Syndrome s;
    for (size_t i = 0; i < h.terms.size(); ++i)
        if (!commutes(h.terms[i].op, p)) s.flipped.push_back({h.terms[i].source, h.terms[i].index, i});
    return s;
}

struct HomologyReport {
    Membership a_rb_z_in_tc = Membership::not_member;     ///< L_z^{0,r} L_z^{0,b} vs TC group
    Membership b_rb_z_in_cc = Membership::not_member;     ///< same product vs CC group
    Membership c_rb_x_in_tc = Membership::not_member;     ///< L_x^{0,r} L_x^{0,b} vs TC group
    std::array<Membership, 2> d_rgb_z_in_cc{};            ///< L_z^{s,r} L_z^{s,g} L_z^{s,b} vs CC group, s = 0, 1
    std::array<Membership, 2> d_rgb_x_in_cc{};
    bool expected() const {
        return a_rb_z_in_tc != Membership::not_member && b_rb_z_in_cc == Membership::not_member && c_rb_x_in_tc != Membership::not_member &&
               d_rgb_z_in_cc[0] != Membership::not_member && d_rgb_z_in_cc[1] != Membership::not_member;
    }
};

inline HomologyReport homology_check(const HexTorus& t) {
    require_admissible(t);
    size_t n = t.n_qubits();
    StabilizerGroup tc(n, t.tc_terms()), cc(n, t.cc_terms());
    auto L = [&](PauliKind k, int s, Color c) { return t.loop(LoopKind::cc_colored, k, s, c).op(n); };
    HomologyReport r;
    auto rb_z = L(PauliKind::z, 0, Color::red) * L(PauliKind::z, 0, Color::blue);
    auto rb_x = L(PauliKind::x, 0, Color::red) * L(PauliKind::x, 0, Color::blue);
    r.a_rb_z_in_tc = tc.member_with_sign(rb_z);
    r.b_rb_z_in_cc = cc.member_with_sign(rb_z);
    r.c_rb_x_in_tc = tc.member_with_sign(rb_x);
    for (int s = 0; s < 2; ++s) {
        r.d_rgb_z_in_cc[s] = cc.member_with_sign(L(PauliKind::z, s, Color::red) * L(PauliKind::z, s, Color::green) * L(PauliKind::z, s, Color::blue));
        r.d_rgb_x_in_cc[s] = cc.member_with_sign(L(PauliKind::x, s, Color::red) * L(PauliKind::x, s, Color::green) * L(PauliKind::x, s, Color::blue));
    }
    return r;
}

/// Product of all B_p (light) or A_s (dark) in a chain row.
inline PauliString row_operator(const HexTorus& t, size_t row, Shade shade) {
    const auto& ch = t.row_chain(shade, row);
    PauliString p = PauliString::identity(t.n_qubits());
    for (size_t s : ch.sites) p *= t.trapezoid_op(s);
    return p;
}

struct RowOperatorReport {
    PauliString op;
    bool squares_to_identity = false;
    bool commutes_with_cc = false;
    /// Colors (c1, c2) of the sigma 0 colored loops whose product equals the
    /// row operator modulo CC stabilizers, with the sign found.
    std::optional<std::pair<Color, Color>> pair;
    Membership sign = Membership::not_member;
};

inline RowOperatorReport row_operator_check(const HexTorus& t, size_t row, Shade shade) {
    size_t n = t.n_qubits();
    RowOperatorReport rep;
    rep.op = row_operator(t, row, shade);
    rep.squares_to_identity = (rep.op * rep.op) == PauliString::identity(n);
    auto cc_terms = t.cc_terms();
    rep.commutes_with_cc = std::all_of(cc_terms.begin(), cc_terms.end(), [&](const auto& s) { return commutes(s, rep.op); });
    StabilizerGroup cc(n, cc_terms);
    PauliKind kind = shade == Shade::light ? PauliKind::z : PauliKind::x;
    for (int a = 0; a < 3 && !rep.pair; ++a)
        for (int b = a + 1; b < 3 && !rep.pair; ++b) {
            auto la = t.loop(LoopKind::cc_colored, kind, 0, static_cast<Color>(a)).op(n);
            auto lb = t.loop(LoopKind::cc_colored, kind, 0, static_cast<Color>(b)).op(n);
            // Verified against the CC group extended by the two logicals, then
            // pinned to the product itself.
            std::vector<PauliString> extra{la, lb};
            if (cc.extended(extra).member_with_sign(rep.op) == Membership::not_member) continue;
            auto m = cc.member_with_sign(rep.op * la * lb);
            if (m != Membership::not_member) {
                rep.pair = {static_cast<Color>(a), static_cast<Color>(b)};
                rep.sign = m;
            }
        }
    return rep;
}

// Text dump: one term per line, "coefficient<TAB>pauli-literal".
inline void write_hamiltonian(std::ostream& os, const HamiltonianSpec& h) {
    char buf[64];
    for (const auto& t : h.terms) {
        std::snprintf(buf, sizeof buf, "%.17g", t.coefficient);
        os << buf << '\t' << t.op.str() << '\n';
    }
}

inline HamiltonianSpec read_hamiltonian(std::istream& is) {
    HamiltonianSpec h;
    std::string line;
    size_t lineno = 0;
    bool sized = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": missing tab");
        double c;
        try {
            size_t used = 0;
            c = std::stod(line.substr(0, tab), &used);
            if (used != tab) throw ParseError("trailing characters");
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(lineno) + ": bad coefficient");
        }
        auto p = PauliString::parse(line.substr(tab + 1));
        if (!sized) {
            h.n_qubits = p.size();
            sized = true;
        } else if (p.size() != h.n_qubits) {
            throw ParseError("line " + std::to_string(lineno) + ": term length differs");
        }
        h.terms.push_back({c, p, TermSource::external, h.terms.size()});
    }
    deduplicate(h);
    return h;
}

}  // namespace hexcode
