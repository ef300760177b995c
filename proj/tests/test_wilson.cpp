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

#include <gtest/gtest.h>

#include "hexcode/wilson.hpp"
#include "oracle.hpp"

using namespace hexcode;

namespace {

oracle::Vec to_vec(const StateVector& s) {
    oracle::Vec v(static_cast<Eigen::Index>(s.dim()));
    for (size_t i = 0; i < s.dim(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
    return v;
}

// <psi|W|psi> / <psi|psi> for psi = (1 + gamma sum_h (h_x + h_z)) |TC>,
// evaluated on dense vectors.
double dense_trial_value(const HexTorus& t, const LoopSpec& w, double gamma) {
    size_t n = t.n_qubits();
    oracle::Vec tc = to_vec(state_from_group(tc_seed_group(t)));
    oracle::Vec psi = tc;
    for (size_t h = 0; h < t.n_hexagons(); ++h) {
        psi += gamma * oracle::apply_pauli(t.hx(h).str(), tc);
        psi += gamma * oracle::apply_pauli(t.hz(h).str(), tc);
    }
    oracle::Vec wpsi = oracle::apply_pauli(w.op(n).str(), psi);
    return psi.dot(wpsi).real() / psi.squaredNorm();
}

}  // namespace

TEST(Wilson, EdgeSetsOnThreeByThree) {
    auto t = make_admissible_torus(3, 3);
    std::vector<size_t> L;
    for (const auto& w : all_wilson_rectangles(t)) L.push_back(edge_set(t, w).L);
    EXPECT_EQ(L, (std::vector<size_t>{2, 2, 4, 4}));
}

TEST(Wilson, TrialStateClosedForm) {
    for (auto [r, c] : std::vector<std::pair<size_t, size_t>>{{3, 3}, {3, 4}, {3, 5}}) {
        auto t = make_admissible_torus(r, c);
        for (const auto& w : all_wilson_rectangles(t)) {
            auto v = trial_state_value(t, w);
            EXPECT_TRUE(v.matches_closed_form()) << r << "x" << c << " " << w.name();
            EXPECT_TRUE(v.hz_drop_out);
            EXPECT_EQ(v.P, t.n_hexagons());
            EXPECT_EQ(v.L, edge_set(t, w).L);
            EXPECT_EQ(v.pairs_norm, static_cast<long long>(2 * v.P));
            EXPECT_EQ(v.pairs_edges, static_cast<long long>(v.L));
            EXPECT_EQ(v.pairs_wilson, static_cast<long long>(2 * v.P - 2 * v.L));
        }
    }
}

TEST(Wilson, TwoColumnTorusHasExtraPairs) {
    // With two columns, six hexagon pairs overlap on the toric ground state.
    auto t = make_admissible_torus(3, 2);
    for (const auto& w : all_wilson_rectangles(t)) {
        auto v = trial_state_value(t, w);
        EXPECT_EQ(v.pairs_norm, 18);
        EXPECT_FALSE(v.matches_closed_form());
    }
}

TEST(Wilson, TrialStateMatchesDenseVectors) {
    auto t = make_admissible_torus(3, 2);
    for (const auto& w : all_wilson_rectangles(t)) {
        auto v = trial_state_value(t, w);
        for (double g : {0.0, 0.05, 0.3, 1.0}) EXPECT_NEAR(v.value(g), dense_trial_value(t, w, g), 1e-12) << w.name() << " gamma " << g;
    }
}

TEST(Wilson, PerturbativeCoefficient) {
    for (auto [r, c] : std::vector<std::pair<size_t, size_t>>{{3, 3}, {3, 4}}) {
        auto t = make_admissible_torus(r, c);
        for (const auto& w : all_wilson_rectangles(t)) {
            double L = static_cast<double>(edge_set(t, w).L);
            EXPECT_NEAR(perturbative_wilson_coefficient(t, w), L / 8, 1e-12) << r << "x" << c << " " << w.name();
        }
    }
}

TEST(Wilson, QuadraticFit) {
    std::vector<double> g{0.1, 0.2, 0.3}, v;
    for (double x : g) v.push_back(1 - 0.7 * x * x);
    EXPECT_NEAR(fit_quadratic(g, v), 0.7, 1e-12);
    EXPECT_EQ(wilson_gamma_grid().size(), 10u);
}

TEST(Wilson, DiagonalizationFollowsPerturbation) {
    auto t = make_admissible_torus(3, 3);
    auto loops = all_wilson_rectangles(t);
    auto curve = ed_wilson_curve(t, loops, {0.03, 0.06});
    ASSERT_EQ(curve.fitted.size(), loops.size());
    for (size_t l = 0; l < loops.size(); ++l) {
        double c2 = perturbative_wilson_coefficient(t, loops[l]);
        EXPECT_NEAR(curve.fitted[l] / c2, 1.0, 0.01) << loops[l].name();
        for (double v : curve.values[l]) EXPECT_LT(v, 1.0);
    }
}
