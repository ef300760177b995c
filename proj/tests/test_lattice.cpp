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

#include <set>

#include <gtest/gtest.h>

#include "hexcode/lattice.hpp"

using namespace hexcode;

TEST(Lattice, GeometryCounts) {
    auto t = build_hex_torus(3, 3);
    EXPECT_EQ(t.n_qubits(), 18u);
    EXPECT_EQ(t.n_hexagons(), 9u);
    EXPECT_EQ(t.edges.size(), 27u);
    // Every qubit sits in exactly three hexagons.
    std::vector<int> count(t.n_qubits(), 0);
    for (const auto& h : t.hexagons) {
        std::set<size_t> distinct(h.qubits.begin(), h.qubits.end());
        EXPECT_EQ(distinct.size(), 6u);
        for (size_t q : h.qubits) ++count[q];
    }
    for (int c : count) EXPECT_EQ(c, 3);
}

TEST(Lattice, AdmissibleSizes) {
    for (auto [r, c] : std::vector<std::pair<size_t, size_t>>{{3, 2}, {3, 3}, {3, 4}, {6, 2}}) {
        auto t = make_admissible_torus(r, c);
        auto rep = validate(t);
        EXPECT_TRUE(rep.admissible()) << r << "x" << c;
        EXPECT_EQ(t.trapezoids.size(), 2 * r * c);
        EXPECT_EQ(t.light_rows.size(), r);
        EXPECT_EQ(t.dark_rows.size(), r);
        for (const auto& ch : t.light_rows) EXPECT_EQ(ch.sites.size(), c);
    }
}

TEST(Lattice, NotThreeColorable) {
    EXPECT_THROW(three_color(build_hex_torus(2, 2)), NotThreeColorable);
    EXPECT_THROW(three_color(build_hex_torus(2, 3)), NotThreeColorable);
    EXPECT_THROW(make_admissible_torus(2, 2), InadmissibleTorus);
    auto rep = validate(build_hex_torus(2, 3));
    EXPECT_FALSE(rep.admissible());
    ASSERT_NE(rep.find("coloring"), nullptr);
    EXPECT_FALSE(rep.find("coloring")->passed);
}

TEST(Lattice, ValidationChecksNamed) {
    auto rep = validate(make_admissible_torus(3, 3));
    for (const char* name : {"incidence", "edges", "coloring", "edge_coloring", "shading", "trapezoid_split", "chess_pattern", "tc_commutation",
                             "row_property", "row_cycles", "trapezoid_products", "cc_commutation", "loops"}) {
        ASSERT_NE(rep.find(name), nullptr) << name;
        EXPECT_TRUE(rep.find(name)->passed) << name << ": " << rep.find(name)->detail;
    }
}

TEST(Lattice, CorruptedColoringIsCaught) {
    auto t = make_admissible_torus(3, 3);
    t.hexagons[0].color = t.hexagons[3].color;  // row 1 touches row 0
    auto rep = validate(t);
    EXPECT_FALSE(rep.admissible());
    EXPECT_FALSE(rep.find("coloring")->passed);
}

TEST(Lattice, CcTermsAreHexagonStrings) {
    auto t = make_admissible_torus(3, 3);
    auto cc = t.cc_terms();
    EXPECT_EQ(cc.size(), 18u);
    for (const auto& p : cc) EXPECT_EQ(p.weight(), 6u);
    auto tc = t.tc_terms();
    EXPECT_EQ(tc.size(), 18u);
    for (const auto& p : tc) EXPECT_EQ(p.weight(), 4u);
    for (size_t a = 0; a < tc.size(); ++a)
        for (size_t b = 0; b < a; ++b) EXPECT_TRUE(commutes(tc[a], tc[b]));
}

TEST(Lattice, LoopsCommuteWithTheirModel) {
    auto t = make_admissible_torus(3, 3);
    size_t n = t.n_qubits();
    auto cc = t.cc_terms();
    auto tc = t.tc_terms();
    size_t colored = 0;
    for (const auto& l : t.loops) {
        auto op = l.op(n);
        if (l.kind == LoopKind::cc_colored) {
            ++colored;
            for (const auto& s : cc) EXPECT_TRUE(commutes(op, s)) << l.name();
        }
        if (l.kind == LoopKind::tc_noncontractible && l.sigma == 0)
            for (const auto& s : tc) EXPECT_TRUE(commutes(op, s)) << l.name();
    }
    EXPECT_EQ(colored, 12u);  // 2 types x 2 directions x 3 colors
    // Opposite types in crossing directions anticommute for the same color pair.
    auto zr0 = t.loop(LoopKind::cc_colored, PauliKind::z, 0, Color::red).op(n);
    auto xb1 = t.loop(LoopKind::cc_colored, PauliKind::x, 1, Color::blue).op(n);
    EXPECT_FALSE(commutes(zr0, xb1));
}

TEST(Lattice, WilsonRectangles) {
    auto t = make_admissible_torus(3, 3);
    auto loops = all_wilson_rectangles(t);
    ASSERT_EQ(loops.size(), 4u);
    std::vector<size_t> support;
    for (const auto& l : loops) {
        EXPECT_EQ(l.enclosed.size(), l.height * l.width);
        support.push_back(l.qubits.size());
    }
    EXPECT_EQ(support, (std::vector<size_t>{4, 8, 6, 10}));
    // Support size does not depend on the anchor.
    for (size_t a : t.trapezoids_of(Shade::light))
        for (const auto& l : loops) EXPECT_EQ(wilson_rectangle(t, l.height, l.width, a).qubits.size(), l.qubits.size());
    EXPECT_THROW(wilson_rectangle(t, 3, 1, t.light_rows[0].sites[0]), DoesNotFit);
    EXPECT_THROW(wilson_rectangle(t, 1, 1, t.dark_rows[0].sites[0]), DoesNotFit);
}
