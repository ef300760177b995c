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

#include <algorithm>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "hexcode/chains.hpp"
#include "oracle.hpp"

using namespace hexcode;

namespace {

// Ring spectrum straight from Kronecker products, split by parity of the
// Z string when `parity` is even or odd.
std::vector<double> oracle_ring(const ChainSpec& c, Parity parity) {
    size_t N = c.length;
    Eigen::Index d = Eigen::Index{1} << N;
    oracle::Mat H = oracle::Mat::Zero(d, d);
    for (size_t i = 0; i < N; ++i) {
        std::string xx(N, 'I'), z(N, 'I');
        xx[i] = xx[(i + 1) % N] = 'X';
        z[i] = 'Z';
        double s = i == N - 1 ? c.twist : 1.0;
        if (N == 2 && i == 1) xx = "XX";
        H -= c.g_c * s * oracle::pauli_matrix(xx);
        H -= c.g_t * oracle::pauli_matrix(z);
    }
    std::vector<Eigen::Index> keep;
    for (Eigen::Index b = 0; b < d; ++b) {
        int p = std::popcount(static_cast<uint64_t>(b)) & 1;
        if (parity == Parity::both || p == static_cast<int>(parity)) keep.push_back(b);
    }
    oracle::Mat S(keep.size(), keep.size());
    for (size_t a = 0; a < keep.size(); ++a)
        for (size_t b = 0; b < keep.size(); ++b) S(a, b) = H(keep[a], keep[b]);
    Eigen::SelfAdjointEigenSolver<oracle::Mat> es(S, Eigen::EigenvaluesOnly);
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

void expect_all_near(const std::vector<double>& a, const std::vector<double>& b, double tol, const std::string& what) {
    ASSERT_EQ(a.size(), b.size()) << what;
    for (size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol) << what << " level " << i;
}

}  // namespace

TEST(Chains, SpectrumExamples) {
    ChainSpec free_spins{2, 0, 1, +1, {}, {}};
    expect_all_near(chain_ff_spectrum(free_spins, Parity::both), {-2, 0, 0, 2}, 1e-12, "N=2 g_c=0");
    expect_all_near(chain_ff_spectrum(free_spins, Parity::even), {-2, 2}, 1e-12, "N=2 even");
    ChainSpec ising{3, 1, 0, +1, {}, {}};
    auto lv = chain_ff_spectrum(ising, Parity::both);
    EXPECT_NEAR(lv[0], -3, 1e-12);
    EXPECT_NEAR(lv[1], -3, 1e-12);
    EXPECT_GT(lv[2], -3 + 1e-6);
}

TEST(Chains, DenseMatchesKroneckerOracle) {
    for (size_t N : {2u, 3u, 5u, 7u})
        for (int twist : {+1, -1})
            for (Parity p : {Parity::even, Parity::odd, Parity::both}) {
                ChainSpec c{N, 1, 0.7, twist, {}, {}};
                expect_all_near(chain_dense_spectrum(c, p), oracle_ring(c, p), 1e-10,
                                "N=" + std::to_string(N) + " twist=" + std::to_string(twist) + " " + to_string(p));
            }
}

TEST(Chains, FreeFermionsMatchDense) {
    for (size_t N = 2; N <= 12; ++N)
        for (int twist : {+1, -1})
            for (auto [gc, gt] : std::vector<std::pair<double, double>>{{1, 1}, {1, 0.3}, {0.4, 1}, {1, 0}, {0, 1}}) {
                // The two largest rings get one coupling; their dense blocks dominate.
                if (N > 10 && gc != 0.4) continue;
                for (Parity p : {Parity::even, Parity::odd}) {
                    ChainSpec c{N, gc, gt, twist, {}, {}};
                    expect_all_near(chain_ff_spectrum(c, p), chain_dense_spectrum(c, p), 1e-10,
                                    "N=" + std::to_string(N) + " twist=" + std::to_string(twist) + " g=" + std::to_string(gc) + "," + std::to_string(gt) + " " + to_string(p));
                }
            }
}

TEST(Chains, TruncatedFreeFermionsArePrefixes) {
    ChainSpec c{14, 1, 0.9, -1, {}, {}};
    auto full = chain_ff_spectrum(c, Parity::odd);
    auto head = chain_ff_spectrum(c, Parity::odd, 50);
    ASSERT_EQ(head.size(), 50u);
    for (size_t i = 0; i < 50; ++i) EXPECT_NEAR(head[i], full[i], 1e-12);
    EXPECT_THROW(chain_ff_spectrum(ChainSpec{30, 1, 1, 1, {}, {}}, Parity::even), CapExceeded);
}

TEST(Chains, SubsetAndTupleSums) {
    EXPECT_EQ(smallest_subset_sums(0, {1, 2, 3}, 0, 4), (std::vector<double>{0, 3, 4, 5}));
    EXPECT_EQ(smallest_subset_sums(0, {3, 1, 2}, 1, 4), (std::vector<double>{1, 2, 3, 6}));
    EXPECT_EQ(k_smallest_sums({{0, 1}, {0, 10}}, 4), (std::vector<double>{0, 1, 10, 11}));
    EXPECT_EQ(k_smallest_sums({{0, 1}, {}}, 4), std::vector<double>{});
    EXPECT_EQ(k_smallest_sums({{1, 2, 3}}, 2), (std::vector<double>{1, 2}));
}

TEST(Chains, DerivedEnsembleGolden) {
    auto t = make_admissible_torus(3, 3);
    auto an = derive_sector_constraints(cc_seed_group(t), chain_basis_operators(t));
    EXPECT_EQ(an.rules.size(), 6u);
    EXPECT_EQ(an.intrinsic_rules, 2u);
    auto e = derive_ensemble(t, 1, 0.5);
    EXPECT_EQ(e.chains.size(), 6u);
    EXPECT_EQ(e.rules.size(), 6u);
    EXPECT_EQ(e.classes.size(), 16u);
    EXPECT_EQ(e.sectors.size(), 64u);
    EXPECT_EQ(std::count_if(e.classes.begin(), e.classes.end(), [](const auto& c) { return c.seed; }), 1);
    EXPECT_EQ(e.total_dimension(), 1ull << 18);
    EXPECT_TRUE(e.audit());
    for (const auto& c : e.chains) EXPECT_EQ(c.length, 3u);
    auto naive = naive_ensemble(t, 1, 0.5);
    EXPECT_TRUE(naive.audit());
}

TEST(Chains, AuditAcrossSizes) {
    for (auto [r, c] : std::vector<std::pair<size_t, size_t>>{{3, 2}, {3, 4}, {6, 2}, {3, 5}}) {
        auto e = derive_ensemble(make_admissible_torus(r, c), 1, 1);
        EXPECT_TRUE(e.audit()) << r << "x" << c;
        EXPECT_EQ(e.chains.size(), 2 * r);
    }
}

TEST(Chains, AssembleMatchesCartesianProduct) {
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
    ASSERT_EQ(brute.size(), 4096u);
    auto fast = assemble_k_lowest(e, 4096);
    EXPECT_EQ(fast, brute);
    EXPECT_THROW(assemble_k_lowest(e, 4097), std::invalid_argument);
}

TEST(Chains, MapVerifySmallTorus) {
    auto t = make_admissible_torus(3, 2);
    for (auto [gt, gc] : std::vector<std::pair<double, double>>{{1, 0.25}, {1, 1}, {0.25, 1}}) {
        auto rep = map_verify(t, gt, gc, 20, 1e-8);
        EXPECT_TRUE(rep.match) << gt << "," << gc << " diff " << rep.max_abs_diff;
        EXPECT_LE(rep.max_abs_diff, 1e-8);
        EXPECT_EQ(rep.ed_multiplicities, rep.predicted_multiplicities);
    }
}

TEST(Chains, MapVerifyLimitsOnThreeByThree) {
    auto t = make_admissible_torus(3, 3);
    auto tc = map_verify(t, 1, 0, 20, 1e-8);
    EXPECT_TRUE(tc.match);
    EXPECT_EQ(tc.ed_multiplicities.at(0), 4u);
    auto cc = map_verify(t, 0, 1, 20, 1e-8);
    EXPECT_TRUE(cc.match);
    EXPECT_EQ(cc.ed_multiplicities.at(0), 16u);
    EXPECT_GT(cc.naive_max_abs_diff, 1.0);
}

TEST(Chains, GapMinimumAtCriticalRatio) {
    auto grid = ratio_grid(0.5, 1.5, 0.01);
    ASSERT_EQ(grid.size(), 101u);
    for (size_t N : {64u, 128u}) {
        auto g = chain_gap_curve(N, grid);
        EXPECT_NEAR(g.argmin_ratio(), 1.0, 1e-9) << N;
    }
    // The critical gap closes like 1/N.
    ChainSpec a{64, 1, 1, 1, {}, {}}, b{128, 1, 1, 1, {}, {}};
    EXPECT_NEAR(chain_sector_gap(a, Parity::even) / chain_sector_gap(b, Parity::even), 2.0, 0.01);
    EXPECT_THROW(ratio_grid(1, 0, 0.1), std::invalid_argument);
}

TEST(Chains, EnsembleGapMatchesDiagonalization) {
    auto t = make_admissible_torus(3, 2);
    for (double r : {0.5, 1.5}) {
        auto e = derive_ensemble(t, r, 1);
        auto [e0, gap] = ensemble_ground_and_gap(e);
        auto ed = spectral_gap(interpolate(t, r, 1));
        EXPECT_NEAR(e0, ed.e0, 1e-8) << r;
        EXPECT_NEAR(gap, ed.gap, 1e-8) << r;
    }
}
