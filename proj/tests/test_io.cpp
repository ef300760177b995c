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

#include "hexcode/hexcode.hpp"

using namespace hexcode;

namespace {
std::string replace_first(std::string s, const std::string& from, const std::string& to) {
    auto p = s.find(from);
    if (p != std::string::npos) s.replace(p, from.size(), to);
    return s;
}
}  // namespace

TEST(Io, Sha256KnownVectors) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Io, InstanceRoundTrip) {
    for (auto [r, c] : std::vector<std::pair<size_t, size_t>>{{3, 2}, {3, 3}, {6, 2}}) {
        auto t = make_admissible_torus(r, c);
        std::string text = write_instance(t);
        std::istringstream is(text);
        auto back = read_instance(is);
        EXPECT_EQ(write_instance(back), text);
        EXPECT_EQ(instance_hash(back), instance_hash(t));
        ASSERT_EQ(back.loops.size(), t.loops.size());
        for (size_t i = 0; i < t.loops.size(); ++i) EXPECT_EQ(back.loops[i].qubits, t.loops[i].qubits);
        EXPECT_TRUE(validate(back).admissible());
    }
    EXPECT_NE(instance_hash(make_admissible_torus(3, 3)), instance_hash(make_admissible_torus(3, 4)));
}

TEST(Io, InstanceHashIsStable) {
    EXPECT_EQ(instance_hash(make_admissible_torus(3, 3)), instance_hash(make_admissible_torus(3, 3)));
    EXPECT_EQ(instance_hash(make_admissible_torus(3, 3)).size(), 64u);
}

TEST(Io, InstanceParseErrors) {
    auto text = write_instance(make_admissible_torus(3, 3));
    auto parse = [](const std::string& s) {
        std::istringstream is(s);
        return read_instance(is);
    };
    EXPECT_THROW(parse(""), ParseError);
    EXPECT_THROW(parse(replace_first(text, "hexcode-instance 1", "hexcode-instance 2")), ParseError);
    EXPECT_THROW(parse(replace_first(text, "hexcode-instance", "bogus")), ParseError);
    EXPECT_THROW(parse(replace_first(text, "end\n", "")), ParseError);
    EXPECT_THROW(parse(replace_first(text, "end\n", "wormhole 1\nend\n")), ParseError);
    EXPECT_THROW(parse(replace_first(text, "hexagon 0 0 0 red", "hexagon 0 0 1 red")), ParseError);
    EXPECT_THROW(parse(replace_first(text, "hexagon 0 0 0 red", "hexagon 0 0 0 purple")), ParseError);
    // Well formed but inconsistent: the coloring check rejects it.
    EXPECT_THROW(parse(replace_first(text, "hexagon 0 0 0 red", "hexagon 0 0 0 green")), InadmissibleTorus);
}

TEST(Io, JsonShapes) {
    auto t = make_admissible_torus(3, 2);
    auto v = to_json(validate(t));
    EXPECT_TRUE(v["admissible"].get<bool>());
    EXPECT_EQ(v["checks"].size(), validate(t).checks.size());
    auto h = to_json(homology_check(t));
    EXPECT_EQ(h["b_rb_z_in_cc"], "not_member");
    EXPECT_TRUE(h["expected"].get<bool>());
    auto e = to_json(derive_ensemble(t, 1, 1));
    EXPECT_EQ(e["kind"], "derived");
    EXPECT_TRUE(e["audit"].get<bool>());
    auto w = to_json(trial_state_value(make_admissible_torus(3, 3), all_wilson_rectangles(make_admissible_torus(3, 3))[0]));
    EXPECT_EQ(w["num_coeffs"], json({1, 14}));
    EXPECT_EQ(w["den_coeffs"], json({1, 18}));
    EXPECT_TRUE(w["matches_closed_form"].get<bool>());
    auto s = to_json(lowest_eigs(tc_hamiltonian(t), 4));
    EXPECT_EQ(s["multiplicities"], json({4}));
    for (const char* key : {"method", "iterations", "matvecs", "seed"}) EXPECT_TRUE(s["meta"].contains(key)) << key;
    auto g = to_json(chain_gap_curve(16, ratio_grid(0.9, 1.1, 0.1)));
    EXPECT_EQ(g["ratios"].size(), 3u);
    EXPECT_TRUE(g.contains("argmin_ratio"));
}
