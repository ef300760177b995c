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

#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "hexcode/eigensolver.hpp"
#include "hexcode/symmetry.hpp"
#include "oracle.hpp"

using namespace hexcode;

namespace {

oracle::Mat dense_of(const HamiltonianSpec& h) {
    std::vector<std::pair<double, std::string>> terms;
    for (const auto& t : h.terms) terms.push_back({t.coefficient, t.op.str()});
    return oracle::dense_sum(terms, h.n_qubits);
}

std::vector<double> dense_lowest(const HamiltonianSpec& h, size_t k) {
    Eigen::SelfAdjointEigenSolver<oracle::Mat> es(dense_of(h), Eigen::EigenvaluesOnly);
    std::vector<double> out;
    for (size_t i = 0; i < k; ++i) out.push_back(es.eigenvalues()(static_cast<Eigen::Index>(i)));
    return out;
}

// Random Hermitian Pauli sum. Terms commuting with every entry of `keep`
// are the only ones accepted, so those operators stay symmetries.
HamiltonianSpec random_hamiltonian(std::mt19937_64& rng, size_t n, size_t terms, const std::vector<PauliString>& keep, bool real) {
    HamiltonianSpec h;
    h.n_qubits = n;
    std::normal_distribution<double> nd;
    while (h.terms.size() < terms) {
        auto p = PauliString::parse(oracle::random_literal(rng, n, false));
        if (p.weight() == 0) continue;
        if (real && (p.num_y() & 1)) continue;
        bool ok = true;
        for (const auto& s : keep) ok = ok && commutes(p, s);
        if (!ok) continue;
        h.terms.push_back({nd(rng), p, TermSource::external, h.terms.size()});
    }
    deduplicate(h);
    return h;
}

}  // namespace

TEST(Spectra, IterativeMatchesDense) {
    std::mt19937_64 rng(17);
    for (size_t n : {4u, 6u, 8u, 9u}) {
        for (bool real : {true, false}) {
            auto h = random_hamiltonian(rng, n, 3 * n, {}, real);
            SolverOptions opt;
            opt.dense_threshold = 0;
            opt.use_symmetries = false;
            size_t k = 10;
            auto rep = lowest_eigs(h, k, opt);
            auto ref = dense_lowest(h, k);
            ASSERT_EQ(rep.eigenvalues.size(), k);
            for (size_t i = 0; i < k; ++i) EXPECT_NEAR(rep.eigenvalues[i], ref[i], 1e-10) << "n=" << n << " real=" << real << " i=" << i;
            for (double r : rep.residuals) EXPECT_LE(r, opt.tol * 10);
            // Tiny spaces fall back to dense inside the solver.
            if (n >= 8) {
                EXPECT_EQ(rep.meta.method, "block-lanczos");
                EXPECT_GT(rep.meta.matvecs, 0u);
            }
        }
    }
}

TEST(Spectra, ElevenQubitsMatchDense) {
    std::mt19937_64 rng(99);
    auto h = random_hamiltonian(rng, 11, 30, {}, true);
    SolverOptions opt;
    opt.dense_threshold = 0;
    opt.use_symmetries = false;
    auto rep = lowest_eigs(h, 6, opt);
    auto ref = dense_lowest(h, 6);
    for (size_t i = 0; i < 6; ++i) EXPECT_NEAR(rep.eigenvalues[i], ref[i], 1e-10) << i;
}

TEST(Spectra, SectorPathMatchesDense) {
    std::mt19937_64 rng(3);
    for (size_t n : {6u, 8u, 10u}) {
        std::vector<PauliString> keep{PauliString::parse(std::string(n, 'Z')), PauliString::parse("XX" + std::string(n - 2, 'I'))};
        auto h = random_hamiltonian(rng, n, 3 * n, keep, n != 8);
        auto sym = central_symmetries(h);
        EXPECT_GE(sym.rank(), 2u);
        for (const auto& s : keep) EXPECT_TRUE(sym.contains_up_to_sign(s));
        SolverOptions opt;
        opt.dense_threshold = 0;
        size_t k = 12;
        auto rep = lowest_eigs(h, k, opt);
        auto ref = dense_lowest(h, k);
        EXPECT_EQ(rep.meta.method.rfind("sectors(", 0), 0u);
        for (size_t i = 0; i < k; ++i) EXPECT_NEAR(rep.eigenvalues[i], ref[i], 1e-10) << "n=" << n << " i=" << i;
    }
}

TEST(Spectra, EigenvectorsHaveSmallResiduals) {
    std::mt19937_64 rng(8);
    auto h = random_hamiltonian(rng, 7, 20, {}, false);
    SolverOptions opt;
    opt.dense_threshold = 0;
    opt.use_symmetries = false;
    opt.want_vectors = true;
    auto rep = lowest_eigs(h, 5, opt);
    auto H = dense_of(h);
    ASSERT_EQ(rep.vectors.cols(), 5);
    for (Eigen::Index i = 0; i < 5; ++i) {
        oracle::Vec v = rep.vectors.col(i);
        EXPECT_NEAR(v.norm(), 1.0, 1e-10);
        EXPECT_LT((H * v - rep.eigenvalues[static_cast<size_t>(i)] * v).norm(), 1e-8);
    }
}

TEST(Spectra, DenseFallbackBelowThreshold) {
    std::mt19937_64 rng(4);
    auto h = random_hamiltonian(rng, 5, 12, {}, true);
    auto rep = lowest_eigs(h, 32);
    auto ref = dense_lowest(h, 32);
    for (size_t i = 0; i < 32; ++i) EXPECT_NEAR(rep.eigenvalues[i], ref[i], 1e-10);
    EXPECT_THROW(lowest_eigs(h, 33), std::invalid_argument);
}

TEST(Spectra, ToricAndColorCodeGroundSpaces) {
    auto t = make_admissible_torus(3, 2);
    auto tc = spectral_gap(tc_hamiltonian(t));
    EXPECT_NEAR(tc.e0, -12.0, 1e-9);
    EXPECT_EQ(tc.degeneracy, 4u);
    EXPECT_NEAR(tc.gap, 4.0, 1e-9);
    auto cc = spectral_gap(cc_hamiltonian(t), {}, 24);
    EXPECT_NEAR(cc.e0, -12.0, 1e-9);
    EXPECT_EQ(cc.degeneracy, 16u);
}

TEST(Spectra, ClusterLevels) {
    auto c = cluster_levels({-1.0, -1.0 + 1e-12, 0.0, 0.5, 0.5}, 1e-8);
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c[0], (std::pair<size_t, size_t>{0, 1}));
    EXPECT_EQ(c[2], (std::pair<size_t, size_t>{3, 4}));
}

TEST(Spectra, ProjectedStates) {
    StabilizerGroup g(2, {PauliString::parse("XX"), PauliString::parse("ZZ")});
    auto phi = state_from_group(g);
    EXPECT_NEAR(std::abs(phi[0]), 1 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(std::abs(phi[3]), 1 / std::sqrt(2.0), 1e-12);
    // (1 - ZZ) annihilates the state; (1 + ZI)(1 + IZ) keeps |00>.
    auto nul = build_projected_state(phi, {{1, PauliString::parse("ZZ")}});
    EXPECT_TRUE(nul.null);
    auto keep = build_projected_state(phi, {{0, PauliString::parse("ZI")}, {0, PauliString::parse("IZ")}});
    EXPECT_FALSE(keep.null);
    EXPECT_NEAR(std::abs(keep.state[0]), 1.0, 1e-12);
    EXPECT_NEAR(keep.norm, 2 * std::sqrt(2.0), 1e-12);
    EXPECT_THROW(build_projected_state(phi, {{0, PauliString::parse("ZI")}, {0, PauliString::parse("XI")}}), NonCommutingGenerators);
    EXPECT_THROW(state_from_group(StabilizerGroup(2, {PauliString::parse("ZZ")})), RankDeficient);
    EXPECT_THROW(StateVector(30), CapExceeded);
}
