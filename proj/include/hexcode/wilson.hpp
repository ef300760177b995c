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

// Wilson rectangles in the weakly perturbed TC phase: the first-order trial
// state evaluated by exact stabilizer bookkeeping, the ED curve, and a
// second-order perturbative estimate.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hexcode/eigensolver.hpp"
#include "hexcode/lattice.hpp"
#include "hexcode/models.hpp"
#include "hexcode/stabilizer.hpp"
#include "hexcode/state.hpp"

namespace hexcode {

struct EdgeSet {
    std::vector<size_t> hexagons;  ///< h with h_x anticommuting with W
    size_t L = 0;
};

inline EdgeSet edge_set(const HexTorus& t, const LoopSpec& w) {
    size_t n = t.n_qubits();
    PauliString W = w.op(n);
    EdgeSet e;
    for (size_t h = 0; h < t.n_hexagons(); ++h) {
        if (!commutes(t.hx(h), W)) e.hexagons.push_back(h);
        if (!commutes(t.hz(h), W)) throw std::logic_error("an h_z term anticommutes with a Wilson loop");
    }
    e.L = e.hexagons.size();
    return e;
}

/// Stabilizer group of the TC ground state fixed by the X-type TC logicals.
inline StabilizerGroup tc_seed_group(const HexTorus& t) {
    size_t n = t.n_qubits();
    auto gens = t.tc_terms();
    for (int s = 0; s < 2; ++s) gens.push_back(t.loop(LoopKind::tc_noncontractible, PauliKind::x, s).op(n));
    return StabilizerGroup(n, gens);
}

/// Polynomials in gamma with integer coefficients (index = power).
struct TrialStateValue {
    std::vector<long long> numerator, denominator;
    long long pairs_norm = 0;   ///< sum_{a,b} <a b>
    long long pairs_edges = 0;  ///< sum_{a,b in E} <a b>, h_x only
    long long pairs_wilson = 0; ///< sum_{a,b} <a W b>
    size_t P = 0, L = 0;
    bool hz_drop_out = false;   ///< every h_z pair enters <aWb> as in <ab>

    double value(double gamma) const {
        auto ev = [&](const std::vector<long long>& c) {
            double s = 0, g = 1;
            for (long long v : c) {
                s += static_cast<double>(v) * g;
                g *= gamma;
            }
            return s;
        };
        return ev(numerator) / ev(denominator);
    }
    /// Coefficients in gamma^2 when the odd orders vanish.
    std::vector<long long> even_part(const std::vector<long long>& c) const {
        std::vector<long long> out;
        for (size_t i = 0; i < c.size(); i += 2) out.push_back(c[i]);
        return out;
    }
    std::vector<long long> closed_form_numerator() const { return {1, 0, static_cast<long long>(2 * P) - 2 * static_cast<long long>(L)}; }
    std::vector<long long> closed_form_denominator() const { return {1, 0, static_cast<long long>(2 * P)}; }
    bool matches_closed_form() const { return numerator == closed_form_numerator() && denominator == closed_form_denominator(); }
};

/// <psi|W|psi>/<psi|psi> for |psi> = (1 + gamma O)|phi_t>, O = sum_h (h_x + h_z),
/// every term evaluated as a stabilizer expectation.
inline TrialStateValue trial_state_value(const HexTorus& t, const LoopSpec& w) {
    size_t n = t.n_qubits();
    auto seed = tc_seed_group(t);
    if (seed.rank() != n) throw RankDeficient("TC seed group is not full rank");
    PauliString W = w.op(n);
    std::vector<PauliString> O;
    std::vector<bool> is_x;
    for (size_t h = 0; h < t.n_hexagons(); ++h) {
        O.push_back(t.hx(h));
        is_x.push_back(true);
        O.push_back(t.hz(h));
        is_x.push_back(false);
    }
    auto ex = [&](const PauliString& p) -> long long {
        // Non-Hermitian products pair up with their adjoints; only the real
        // part survives in the symmetric sums below.
        if (!p.is_hermitian()) return 0;
        return seed.expectation(p);
    };
    auto es = edge_set(t, w);
    std::vector<bool> in_e(t.n_hexagons(), false);
    for (size_t h : es.hexagons) in_e[h] = true;

    TrialStateValue r;
    r.P = t.n_hexagons();
    r.L = es.L;
    long long w0 = ex(W), first_w = 0, first_n = 0;
    r.hz_drop_out = true;
    for (size_t a = 0; a < O.size(); ++a) {
        first_n += 2 * ex(O[a]);
        PauliString aw = O[a];
        aw *= W;
        PauliString wa = W;
        wa *= O[a];
        first_w += ex(aw) + ex(wa);
        for (size_t b = 0; b < O.size(); ++b) {
            PauliString ab = O[a];
            ab *= O[b];
            PauliString awb = aw;
            awb *= O[b];
            long long vab = ex(ab), vawb = ex(awb);
            r.pairs_norm += vab;
            r.pairs_wilson += vawb;
            if (is_x[a] && is_x[b] && in_e[a / 2] && in_e[b / 2]) r.pairs_edges += vab;
            if ((!is_x[a] || !is_x[b]) && vab != vawb) r.hz_drop_out = false;
        }
    }
    r.numerator = {w0, first_w, r.pairs_wilson};
    r.denominator = {1, first_n, r.pairs_norm};
    return r;
}

/// Second-order estimate 1 - <W> ~ c2 gamma^2 at g_t = 1, g_c = gamma:
/// |psi_1> = sum_a a|phi_t>/dE_a with dE_a = 2 * (TC terms flipped by a), so
/// c2 = sum_{a,b} (<ab> - <aWb>)/(dE_a dE_b).
inline double perturbative_wilson_coefficient(const HexTorus& t, const LoopSpec& w) {
    size_t n = t.n_qubits();
    auto seed = tc_seed_group(t);
    PauliString W = w.op(n);
    auto tc = t.tc_terms();
    std::vector<PauliString> O;
    std::vector<double> dE;
    for (size_t h = 0; h < t.n_hexagons(); ++h)
        for (const auto& a : {t.hx(h), t.hz(h)}) {
            size_t flips = 0;
            for (const auto& s : tc) flips += !commutes(a, s);
            if (flips == 0) throw std::logic_error("a CC term commutes with every TC term");
            O.push_back(a);
            dE.push_back(2.0 * static_cast<double>(flips));
        }
    double c = 0;
    for (size_t a = 0; a < O.size(); ++a)
        for (size_t b = 0; b < O.size(); ++b) {
            PauliString ab = O[a];
            ab *= O[b];
            PauliString awb = O[a];
            awb *= W;
            awb *= O[b];
            double vab = ab.is_hermitian() ? seed.expectation(ab) : 0;
            double vawb = awb.is_hermitian() ? seed.expectation(awb) : 0;
            c += (vab - vawb) / (dE[a] * dE[b]);
        }
    return c;
}

struct WilsonCurve {
    std::vector<double> gammas;
    std::vector<std::vector<double>> values;  ///< [loop][gamma], averaged over the ground block
    std::vector<double> block_spread;         ///< per gamma, max deviation of single states from the average
    std::vector<double> fitted;               ///< c_W per loop: 1 - <W> ~ c_W gamma^2
    size_t block = 4;
};

inline std::vector<double> wilson_gamma_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 10; ++i) g.push_back(0.01 * i);
    return g;
}

/// Least squares for 1 - W = c gamma^2.
inline double fit_quadratic(const std::vector<double>& gammas, const std::vector<double>& values) {
    double num = 0, den = 0;
    for (size_t i = 0; i < gammas.size(); ++i) {
        double g2 = gammas[i] * gammas[i];
        num += (1 - values[i]) * g2;
        den += g2 * g2;
    }
    return num / den;
}

/// ED Wilson values at g_t = 1, g_c = gamma, averaged over the lowest
/// `block` states (the split TC ground block).
inline WilsonCurve ed_wilson_curve(const HexTorus& t, const std::vector<LoopSpec>& loops, const std::vector<double>& gammas, SolverOptions opt = {}, size_t block = 4) {
    WilsonCurve wc;
    wc.gammas = gammas;
    wc.block = block;
    wc.values.assign(loops.size(), {});
    size_t n = t.n_qubits();
    std::vector<PauliString> ops;
    for (const auto& l : loops) ops.push_back(l.op(n));
    opt.want_vectors = true;
    for (double g : gammas) {
        auto rep = lowest_eigs(interpolate(t, 1.0, g), block, opt);
        double spread = 0;
        for (size_t l = 0; l < loops.size(); ++l) {
            std::vector<double> single;
            for (size_t s = 0; s < block; ++s) {
                std::vector<cplx> amps(rep.vectors.rows());
                for (Eigen::Index i = 0; i < rep.vectors.rows(); ++i) amps[i] = rep.vectors(i, s);
                single.push_back(expectation(StateVector::from_amplitudes(n, std::move(amps)), ops[l]));
            }
            double avg = 0;
            for (double v : single) avg += v;
            avg /= static_cast<double>(block);
            for (double v : single) spread = std::max(spread, std::abs(v - avg));
            wc.values[l].push_back(avg);
        }
        wc.block_spread.push_back(spread);
    }
    for (const auto& v : wc.values) wc.fitted.push_back(fit_quadratic(gammas, v));
    return wc;
}

}  // namespace hexcode
