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

#include <sstream>

#include <gtest/gtest.h>

#include "hexcode/models.hpp"
#include "hexcode/state.hpp"

using namespace hexcode;

namespace {
const HexTorus& torus33() {
    static const HexTorus t = make_admissible_torus(3, 3);
    return t;
}
}  // namespace

TEST(Models, TermCounts) {
    const auto& t = torus33();
    EXPECT_EQ(tc_hamiltonian(t).terms.size(), 18u);
    EXPECT_EQ(cc_hamiltonian(t).terms.size(), 18u);
    auto h = interpolate(t, 0.5, 0);
    EXPECT_EQ(h.terms.size(), 36u);
    EXPECT_DOUBLE_EQ(h.frustration_free_bound(), -9.0);
    EXPECT_THROW(interpolate(t, 0, 0), std::invalid_argument);
    EXPECT_THROW(interpolate(t, -1, 1), std::invalid_argument);
    EXPECT_THROW(interpolate(build_hex_torus(3, 3), 1, 1), InadmissibleTorus);
}

TEST(Models, GroundDegeneracyFromRank) {
    for (auto [r, c] : std::vector<std::pair<size_t, size_t>>{{3, 2}, {3, 3}, {3, 4}, {6, 2}}) {
        auto t = make_admissible_torus(r, c);
        size_t n = t.n_qubits();
        EXPECT_EQ(n - StabilizerGroup(n, t.tc_terms()).rank(), 2u) << r << "x" << c;
        EXPECT_EQ(n - StabilizerGroup(n, t.cc_terms()).rank(), 4u) << r << "x" << c;
    }
}

TEST(Models, FrustrationFreeGroundStates) {
    // A state fixed by every term reaches the bound -sum|g|, which no state
    // can go below.
    const auto& t = torus33();
    size_t n = t.n_qubits();
    for (int model = 0; model < 2; ++model) {
        auto h = model == 0 ? tc_hamiltonian(t) : cc_hamiltonian(t);
        std::vector<PauliString> gens;
        for (const auto& term : h.terms) gens.push_back(term.op);
        if (model == 0)
            for (int s = 0; s < 2; ++s) gens.push_back(t.loop(LoopKind::tc_noncontractible, PauliKind::z, s).op(n));
        else
            for (int s = 0; s < 2; ++s)
                for (Color c : {Color::red, Color::blue}) gens.push_back(t.loop(LoopKind::cc_colored, PauliKind::z, s, c).op(n));
        StabilizerGroup g(n, gens);
        ASSERT_EQ(g.rank(), n);
        auto psi = state_from_group(g);
        EXPECT_NEAR(expectation(psi, h), h.frustration_free_bound(), 1e-10);
        EXPECT_NEAR(h.frustration_free_bound(), -18.0, 0);
    }
}

TEST(Models, HomologyRelations) {
    auto r = homology_check(torus33());
    EXPECT_EQ(r.a_rb_z_in_tc, Membership::plus);
    EXPECT_EQ(r.b_rb_z_in_cc, Membership::not_member);
    EXPECT_EQ(r.c_rb_x_in_tc, Membership::plus);
    for (int s = 0; s < 2; ++s) {
        EXPECT_EQ(r.d_rgb_z_in_cc[s], Membership::plus) << s;
        EXPECT_EQ(r.d_rgb_x_in_cc[s], Membership::plus) << s;
    }
    EXPECT_TRUE(r.expected());
    for (auto [rows, cols] : std::vector<std::pair<size_t, size_t>>{{3, 2}, {3, 4}, {6, 2}}) EXPECT_TRUE(homology_check(make_admissible_torus(rows, cols)).expected());
}

TEST(Models, RowOperators) {
    const auto& t = torus33();
    for (Shade sh : {Shade::light, Shade::dark})
        for (size_t row = 0; row < t.rows; ++row) {
            auto rep = row_operator_check(t, row, sh);
            EXPECT_TRUE(rep.squares_to_identity);
            EXPECT_TRUE(rep.commutes_with_cc);
            EXPECT_TRUE(rep.pair.has_value()) << to_string(sh) << " row " << row;
            EXPECT_NE(rep.sign, Membership::not_member);
        }
    EXPECT_THROW(row_operator(t, 3, Shade::light), std::out_of_range);
}

TEST(Models, Syndromes) {
    const auto& t = torus33();
    size_t n = t.n_qubits();
    auto h = interpolate(t, 1, 1);
    // A single X flips the two light trapezoids and the three Z hexagons on it.
    auto s = syndrome(h, PauliString::single(n, 0, 'X'));
    EXPECT_EQ(s.count(TermSource::tc_light), 2u);
    EXPECT_EQ(s.count(TermSource::tc_dark), 0u);
    EXPECT_EQ(s.count(TermSource::cc_z), 3u);
    EXPECT_EQ(s.count(TermSource::cc_x), 0u);
    auto y = syndrome(h, PauliString::single(n, 0, 'Y'));
    EXPECT_EQ(y.size(), 10u);
    auto hz = syndrome(h, t.hz(0));
    EXPECT_EQ(hz.count(TermSource::cc_x) + hz.count(TermSource::cc_z) + hz.count(TermSource::tc_light), 0u);
    EXPECT_THROW(syndrome(h, PauliString::single(n + 1, 0, 'X')), SizeMismatch);
}

TEST(Models, HamiltonianTextRoundTrip) {
    auto h = interpolate(torus33(), 0.25, 1);
    std::stringstream ss;
    write_hamiltonian(ss, h);
    auto back = read_hamiltonian(ss);
    ASSERT_EQ(back.terms.size(), h.terms.size());
    for (size_t i = 0; i < h.terms.size(); ++i) {
        EXPECT_EQ(back.terms[i].coefficient, h.terms[i].coefficient);
        EXPECT_EQ(back.terms[i].op, h.terms[i].op);
    }
    std::stringstream bad("0.5 XX\n");
    EXPECT_THROW(read_hamiltonian(bad), ParseError);
    std::stringstream mixed("1\tXX\n1\tXXX\n");
    EXPECT_THROW(read_hamiltonian(mixed), ParseError);
    std::stringstream dup("1\tXZ\n0.5\t-XZ\n");
    auto d = read_hamiltonian(dup);
    ASSERT_EQ(d.terms.size(), 1u);
    EXPECT_DOUBLE_EQ(d.terms[0].coefficient, 0.5);
}
