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

#include <gtest/gtest.h>

#include "hexcode/pauli.hpp"
#include "oracle.hpp"

using namespace hexcode;

TEST(BitVector, SetFlipPopcount) {
    BitVector b(130);
    b.set(0, true);
    b.set(64, true);
    b.flip(129);
    EXPECT_EQ(b.popcount(), 3u);
    EXPECT_EQ(b.ones(), (std::vector<size_t>{0, 64, 129}));
    EXPECT_EQ(*b.lowest_set(), 0u);
    b.flip(0);
    EXPECT_EQ(*b.lowest_set(), 64u);
    BitVector c = BitVector::from_indices(130, std::vector<size_t>{64, 100});
    EXPECT_EQ(b.overlap(c), 1u);
}

TEST(BitVector, SizeMismatchThrows) {
    BitVector a(5), b(6);
    EXPECT_THROW(a ^= b, SizeMismatch);
}

TEST(PauliString, ParsePrintRoundTrip) {
    for (const char* s : {"-ZZIZ", "+XIY", "iXX", "-iYYZ", "IIII", "", "-"}) {
        auto p = PauliString::parse(s);
        auto q = PauliString::parse(p.str());
        EXPECT_EQ(p, q) << s;
    }
    EXPECT_EQ(PauliString::parse("-ZZIZ").str(), "-ZZIZ");
    EXPECT_EQ(PauliString::parse("+XIY").str(), "+XIY");
    EXPECT_EQ(PauliString::parse("-iYYZ").str(), "-iYYZ");
}

TEST(PauliString, ParseRejectsGarbage) {
    EXPECT_THROW(PauliString::parse("XQZ"), ParseError);
    EXPECT_THROW(PauliString::parse("i-X"), ParseError);
    EXPECT_THROW(PauliString::parse("--X"), ParseError);
}

TEST(PauliString, WeightSupportHermitian) {
    auto p = PauliString::parse("XIYZI");
    EXPECT_EQ(p.weight(), 3u);
    EXPECT_EQ(p.support(), (std::vector<size_t>{0, 2, 3}));
    EXPECT_TRUE(p.is_hermitian());
    EXPECT_FALSE(PauliString::parse("iXIYZI").is_hermitian());
}

TEST(PauliString, SingleQubitProducts) {
    EXPECT_EQ(PauliString::parse("X") * PauliString::parse("Y"), PauliString::parse("iZ"));
    EXPECT_EQ(PauliString::parse("Y") * PauliString::parse("X"), PauliString::parse("-iZ"));
    EXPECT_EQ(PauliString::parse("Z") * PauliString::parse("X"), PauliString::parse("iY"));
    EXPECT_EQ(PauliString::parse("Y") * PauliString::parse("Y"), PauliString::parse("I"));
}

TEST(PauliString, ProductMatchesDenseMatrices) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 400; ++trial) {
        size_t n = 1 + rng() % 4;
        auto a = oracle::random_literal(rng, n), b = oracle::random_literal(rng, n);
        auto pa = PauliString::parse(a), pb = PauliString::parse(b);
        auto prod = pa * pb;
        oracle::Mat expect = oracle::pauli_matrix(a) * oracle::pauli_matrix(b);
        EXPECT_LT((oracle::pauli_matrix(prod.str()) - expect).norm(), 1e-12) << a << " * " << b << " = " << prod.str();
        oracle::Mat comm = oracle::pauli_matrix(a) * oracle::pauli_matrix(b) - oracle::pauli_matrix(b) * oracle::pauli_matrix(a);
        EXPECT_EQ(commutes(pa, pb), comm.norm() < 1e-12) << a << " " << b;
    }
}

TEST(PauliString, LargeRegisterProductAcrossWords) {
    size_t n = 150;
    auto a = PauliString::single(n, 3, 'X') * PauliString::single(n, 140, 'Z');
    auto b = PauliString::single(n, 140, 'X');
    EXPECT_FALSE(commutes(a, b));
    auto ab = a * b, ba = b * a;
    EXPECT_EQ(ab, ba.negated());
    EXPECT_EQ(ab.at(140), 'Y');
}

TEST(PauliString, SizeMismatch) {
    EXPECT_THROW(PauliString::parse("XX") * PauliString::parse("XXX"), SizeMismatch);
}
