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

// Acceptance run on the 3x3 torus. One line per criterion:
//   criterion N: PASS|FAIL <details>
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "../tests/oracle.hpp"
#include "hexcode/hexcode.hpp"

using namespace hexcode;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int prec = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

template <typename T>
std::string join(const std::vector<T>& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    return os.str();
}

const HexTorus& desk() {
    static const HexTorus t = make_admissible_torus(3, 3);
    return t;
}

Outcome criterion1() {
    const auto& t = desk();
    size_t n = t.n_qubits();
    size_t tc_rank = n - StabilizerGroup(n, t.tc_terms()).rank();
    size_t cc_rank = n - StabilizerGroup(n, t.cc_terms()).rank();
    SolverOptions opt;
    auto tc = lowest_eigs(interpolate(t, 1, 0), 6, opt);
    auto cc = lowest_eigs(interpolate(t, 0, 1), 20, opt);
    size_t tc_ed = tc.multiplicities().at(0), cc_ed = cc.multiplicities().at(0);
    // The ground cluster must end before the last computed level.
    bool tc_closed = tc.clusters.size() >= 2, cc_closed = cc.clusters.size() >= 2;
    bool pass = (size_t{1} << tc_rank) == 4 && (size_t{1} << cc_rank) == 16 && tc_ed == 4 && cc_ed == 16 && tc_closed && cc_closed;
    return {pass, "rank TC 2^" + std::to_string(tc_rank) + " CC 2^" + std::to_string(cc_rank) + ", ED clusters TC " + std::to_string(tc_ed) + " CC " +
                      std::to_string(cc_ed)};
}

Outcome criterion2() {
    const auto& t = desk();
    bool pass = true;
    std::string detail;
    for (auto [gt, gc] : std::vector<std::pair<double, double>>{{1, 0.25}, {1, 1}, {0.25, 1}}) {
        auto rep = map_verify(t, gt, gc, 20, 1e-8);
        bool ok = rep.max_abs_diff <= 1e-8 && rep.multiplicity_ok && rep.multiplicity_div4;
        pass = pass && ok;
        detail += "(" + fmt(gt) + "," + fmt(gc) + "): diff " + fmt(rep.max_abs_diff) + " mult [" + join(rep.ed_multiplicities) + "]" +
                  (rep.multiplicity_ok ? " match" : " MISMATCH") + (rep.multiplicity_div4 ? "" : " not-div4") + "; ";
    }
    return {pass, detail};
}

Outcome criterion3() {
    auto grid = ratio_grid(0.5, 1.5, 0.01);
    auto g64 = chain_gap_curve(64, grid), g128 = chain_gap_curve(128, grid);
    double d64 = std::abs(g64.argmin_ratio() - 1), d128 = std::abs(g128.argmin_ratio() - 1);
    bool pass = d64 <= 0.1 && d128 <= 0.1 && d128 <= d64 + 1e-12;
    return {pass, "argmin N=64 at " + fmt(g64.argmin_ratio()) + " (gap " + fmt(g64.gaps[g64.argmin]) + "), N=128 at " + fmt(g128.argmin_ratio()) + " (gap " +
                      fmt(g128.gaps[g128.argmin]) + ")"};
}

Outcome criterion4() {
    const auto& t = desk();
    bool pass = true;
    std::string detail;
    for (const auto& w : all_wilson_rectangles(t)) {
        auto v = trial_state_value(t, w);
        bool ok = v.matches_closed_form() && 2 * v.P == 18 && v.L == edge_set(t, w).L;
        pass = pass && ok;
        detail += std::to_string(w.height) + "x" + std::to_string(w.width) + " L=" + std::to_string(v.L) + (ok ? " exact" : " MISMATCH") + "; ";
    }
    return {pass, detail};
}

Outcome criterion5() {
    const auto& t = desk();
    auto loops = all_wilson_rectangles(t);
    auto curve = ed_wilson_curve(t, loops, wilson_gamma_grid());
    std::vector<double> per_l, c2;
    std::vector<size_t> L;
    for (size_t l = 0; l < loops.size(); ++l) {
        L.push_back(edge_set(t, loops[l]).L);
        per_l.push_back(curve.fitted[l] / static_cast<double>(L[l]));
        c2.push_back(perturbative_wilson_coefficient(t, loops[l]) / static_cast<double>(L[l]));
    }
    double lo = *std::min_element(per_l.begin(), per_l.end()), hi = *std::max_element(per_l.begin(), per_l.end());
    bool constant = (hi - lo) / lo <= 0.01;
    bool same_l = true;
    for (size_t a = 0; a < loops.size(); ++a)
        for (size_t b = 0; b < a; ++b)
            if (L[a] == L[b] && std::abs(curve.fitted[a] - curve.fitted[b]) > 0.01 * std::abs(curve.fitted[b])) same_l = false;
    bool pert = true;
    for (size_t l = 0; l < loops.size(); ++l)
        if (std::abs(per_l[l] - c2[l]) > 0.01 * c2[l]) pert = false;
    double spread = *std::max_element(curve.block_spread.begin(), curve.block_spread.end());
    std::string detail = "c/L [" + join([&] {
                                std::vector<std::string> s;
                                for (double v : per_l) s.push_back(fmt(v, 6));
                                return s;
                            }()) +
                         "], second order " + fmt(c2[0], 6) + ", spread " + fmt((hi - lo) / lo) + (same_l ? ", equal-L agree" : ", equal-L DISAGREE") +
                         (pert ? ", matches perturbation" : ", OFF perturbation") + ", block spread " + fmt(spread);
    return {constant && same_l && pert, detail};
}

Outcome criterion6() {
    std::mt19937_64 rng(606);
    // Stabilizer expectations against Clifford-circuit states.
    size_t cases = 0, bad_stab = 0;
    while (cases < 1000) {
        size_t n = 1 + rng() % 10;
        auto s = oracle::random_stabilizer_state(rng, n);
        std::vector<PauliString> gens;
        for (const auto& g : s.generators) gens.push_back(PauliString::parse(g));
        StabilizerGroup G(n, gens);
        for (int q = 0; q < 4; ++q, ++cases) {
            std::string lit = oracle::random_literal(rng, n, false);
            if (rng() & 1) lit = "-" + lit;
            double dense = s.psi.dot(oracle::apply_pauli(lit, s.psi)).real();
            if (std::abs(G.expectation(PauliString::parse(lit)) - dense) > 1e-9) ++bad_stab;
        }
    }
    // Iterative eigenvalues against dense diagonalization.
    double eig_err = 0;
    for (size_t n : {8u, 10u, 12u}) {
        HamiltonianSpec h;
        h.n_qubits = n;
        std::normal_distribution<double> nd;
        std::vector<std::pair<double, std::string>> terms;
        while (h.terms.size() < 2 * n) {
            auto lit = oracle::random_literal(rng, n, false);
            auto p = PauliString::parse(lit);
            if (p.weight() == 0 || (p.num_y() & 1)) continue;
            double c = nd(rng);
            h.terms.push_back({c, p, TermSource::external, h.terms.size()});
            terms.push_back({c, lit});
        }
        deduplicate(h);
        SolverOptions opt;
        opt.dense_threshold = 0;
        opt.use_symmetries = false;
        auto rep = lowest_eigs(h, 6, opt);
        Eigen::MatrixXd H = oracle::dense_sum(terms, n).real();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
        for (size_t i = 0; i < 6; ++i) eig_err = std::max(eig_err, std::abs(rep.eigenvalues[i] - es.eigenvalues()(static_cast<Eigen::Index>(i))));
    }
    // Free fermions against dense chains.
    double ff_err = 0;
    for (size_t N = 2; N <= 12; ++N)
        for (int twist : {+1, -1})
            for (Parity p : {Parity::even, Parity::odd}) {
                ChainSpec c{N, 1, 0.8, twist, {}, {}};
                auto a = chain_ff_spectrum(c, p);
                auto b = chain_dense_spectrum(c, p);
                for (size_t i = 0; i < a.size(); ++i) ff_err = std::max(ff_err, std::abs(a[i] - b[i]));
            }
    // Ensemble assembly against the Cartesian product on the 3x2 torus.
    auto e = derive_ensemble(make_admissible_torus(3, 2), 1, 0.6);
    std::vector<double> brute;
    for (const auto& s : e.sectors) {
        std::vector<std::vector<double>> lists;
        for (size_t c = 0; c < e.chains.size(); ++c) {
            ChainSpec spec = e.chains[c];
            spec.twist = e.classes[s.cls].twists[c];
            lists.push_back(chain_ff_spectrum(spec, s.parities[c] ? Parity::odd : Parity::even));
        }
        std::vector<size_t> idx(lists.size(), 0);
        while (true) {
            double v = 0;
            for (size_t c = 0; c < lists.size(); ++c) v += lists[c][idx[c]];
            for (size_t m = 0; m < s.multiplicity; ++m) brute.push_back(v);
            size_t c = 0;
            while (c < lists.size() && ++idx[c] == lists[c].size()) idx[c++] = 0;
            if (c == lists.size()) break;
        }
    }
    std::sort(brute.begin(), brute.end());
    bool assemble_ok = brute.size() == 4096 && assemble_k_lowest(e, 4096) == brute;
    bool pass = bad_stab == 0 && eig_err <= 1e-10 && ff_err <= 1e-10 && assemble_ok;
    return {pass, "stabilizer " + std::to_string(cases - bad_stab) + "/" + std::to_string(cases) + ", eigen err " + fmt(eig_err) + ", free-fermion err " +
                      fmt(ff_err) + ", assembly " + (assemble_ok ? "exact" : "DIFFERS")};
}

oracle::Vec to_vec(const StateVector& s) {
    oracle::Vec v(static_cast<Eigen::Index>(s.dim()));
    for (size_t i = 0; i < s.dim(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
    return v;
}

Outcome criterion7() {
    const auto& t = desk();
    size_t n = t.n_qubits();
    auto hom = homology_check(t);
    bool hom_ok = hom.a_rb_z_in_tc != Membership::not_member && hom.b_rb_z_in_cc == Membership::not_member &&
                  hom.d_rgb_z_in_cc[0] != Membership::not_member && hom.d_rgb_z_in_cc[1] != Membership::not_member;
    auto phi = state_from_group(cc_seed_group(t));
    auto lz = t.loop(LoopKind::tc_noncontractible, PauliKind::z, 0).op(n);
    auto lx = t.loop(LoopKind::tc_noncontractible, PauliKind::x, 0).op(n);
    auto proj = build_projected_state(phi, {{0, lz}, {0, lx}});
    auto Hcc = cc_hamiltonian(t);
    CompiledHamiltonian H(Hcc);
    auto in_ground = [&](const StateVector& v) {
        auto hv = H.apply(v);
        hv.axpy(-Hcc.frustration_free_bound(), v);
        return hv.norm() <= 1e-10;
    };
    bool psi_ok = !proj.null && in_ground(proj.state);
    double worst = 0;
    bool images_ground = true;
    std::string per_row;
    for (size_t r = 0; r < t.rows && psi_ok; ++r) {
        auto rb = row_operator(t, r, Shade::light), ra = row_operator(t, r, Shade::dark);
        std::vector<StateVector> img{proj.state, proj.state.apply(rb), proj.state.apply(ra), proj.state.apply(ra * rb)};
        for (const auto& v : img) images_ground = images_ground && in_ground(v);
        double row_worst = 0;
        for (size_t a = 0; a < 4; ++a)
            for (size_t b = 0; b <= a; ++b) {
                double want = a == b ? 1 : 0;
                row_worst = std::max(row_worst, std::abs(img[a].inner(img[b]) - want));
            }
        worst = std::max(worst, row_worst);
        per_row += " row " + std::to_string(r) + " max overlap error " + fmt(row_worst) + ";";
    }
    bool pass = hom_ok && psi_ok && images_ground && worst <= 1e-10;
    return {pass, std::string("homology ") + (hom_ok ? "as specified" : "UNEXPECTED") + ", projected state " + (psi_ok ? "in CC ground space" : "NOT in ground space") +
                      (images_ground ? ", images in ground space" : ", images leave ground space") + ";" + per_row};
}

}  // namespace

int main() {
    std::vector<std::function<Outcome()>> checks{criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7};
    int failed = 0;
    for (size_t i = 0; i < checks.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = checks[i]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " " << o.detail << " [" << fmt(secs) << " s]" << std::endl;
        failed += !o.pass;
    }
    return failed ? 1 : 0;
}
