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

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hexcode {

struct SizeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Fixed-length bit vector stored as 64-bit words.
///
/// Bit i lives in word i / 64 at position i % 64 (little endian). Unused high
/// bits of the last word are always zero, so word-wise comparisons and
/// popcounts need no masking.
class BitVector {
  public:
    BitVector() = default;
    explicit BitVector(size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    static BitVector from_indices(size_t n, std::span<const size_t> indices) {
        BitVector v(n);
        for (size_t i : indices) v.flip(i);
        return v;
    }

    size_t size() const { return n_; }
    size_t num_words() const { return words_.size(); }
    uint64_t word(size_t w) const { return words_[w]; }
    std::span<const uint64_t> words() const { return words_; }

    bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(size_t i, bool v) {
        uint64_t m = uint64_t{1} << (i & 63);
        if (v) words_[i >> 6] |= m;
        else words_[i >> 6] &= ~m;
    }
    void flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }

    BitVector& operator^=(const BitVector& o) {
        check_size(o);
        for (size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
        return *this;
    }
    BitVector& operator&=(const BitVector& o) {
        check_size(o);
        for (size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
        return *this;
    }
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }

    size_t popcount() const {
        size_t c = 0;
        for (uint64_t w : words_) c += std::popcount(w);
        return c;
    }
    /// popcount(a & b), without materializing the intersection.
    size_t overlap(const BitVector& o) const {
        check_size(o);
        size_t c = 0;
        for (size_t w = 0; w < words_.size(); ++w) c += std::popcount(words_[w] & o.words_[w]);
        return c;
    }
    bool none() const {
        for (uint64_t w : words_)
            if (w) return false;
        return true;
    }
    std::optional<size_t> lowest_set() const {
        for (size_t w = 0; w < words_.size(); ++w)
            if (words_[w]) return w * 64 + std::countr_zero(words_[w]);
        return std::nullopt;
    }
    std::vector<size_t> ones() const {
        std::vector<size_t> out;
        for (size_t w = 0; w < words_.size(); ++w) {
            uint64_t x = words_[w];
            while (x) {
                out.push_back(w * 64 + std::countr_zero(x));
                x &= x - 1;
            }
        }
        return out;
    }
    /// Low 64 bits; only meaningful for n <= 64.
    uint64_t low_word() const { return words_.empty() ? 0 : words_[0]; }

    bool operator==(const BitVector&) const = default;
    auto operator<=>(const BitVector& o) const {
        if (auto c = n_ <=> o.n_; c != 0) return c;
        return words_ <=> o.words_;
    }

  private:
    void check_size(const BitVector& o) const {
        if (o.n_ != n_) throw SizeMismatch("bit vector length mismatch");
    }
    size_t n_ = 0;
    std::vector<uint64_t> words_;
};

/// n-qubit Pauli operator i^phase * (sigma_0 ⊗ sigma_1 ⊗ ...).
///
/// sigma_j is read from (x_j, z_j): (0,0) I, (1,0) X, (0,1) Z, (1,1) Y. The
/// phase is relative to the Y-aware tensor product, so a Hermitian operator
/// always has an even phase and X * Z = -iY carries phase 3.
class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(size_t n) : x_(n), z_(n) {}
    PauliString(BitVector x, BitVector z, uint8_t phase = 0) : x_(std::move(x)), z_(std::move(z)), phase_(phase & 3) {
        if (x_.size() != z_.size()) throw SizeMismatch("x and z masks differ in length");
    }

    static PauliString identity(size_t n) { return PauliString(n); }
    static PauliString z_on(size_t n, std::span<const size_t> qubits) {
        return PauliString(BitVector(n), BitVector::from_indices(n, qubits));
    }
    static PauliString x_on(size_t n, std::span<const size_t> qubits) {
        return PauliString(BitVector::from_indices(n, qubits), BitVector(n));
    }
    static PauliString single(size_t n, size_t q, char p) {
        PauliString s(n);
        s.set(q, p);
        return s;
    }

    /// Parses `[+|-][i]?[IXYZ]*` with qubit 0 leftmost, e.g. "-ZZIZ" or "+iXY".
    static PauliString parse(std::string_view text) {
        size_t pos = 0;
        uint8_t coeff = 0;  // exponent of i in front of the tensor product
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            if (text[pos] == '-') coeff = 2;
            ++pos;
        }
        if (pos < text.size() && text[pos] == 'i') {
            coeff = (coeff + 1) & 3;
            ++pos;
        }
        std::string_view body = text.substr(pos);
        PauliString p(body.size());
        for (size_t q = 0; q < body.size(); ++q) {
            char c = body[q];
            if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z' && c != '_')
                throw ParseError("bad Pauli character '" + std::string(1, c) + "' in \"" + std::string(text) + "\"");
            p.set(q, c);
        }
        p.phase_ = coeff;
        return p;
    }

    std::string str() const {
        static constexpr const char* prefix[4] = {"+", "+i", "-", "-i"};
        std::string out = prefix[phase_];
        out.reserve(out.size() + size());
        for (size_t q = 0; q < size(); ++q) out.push_back(at(q));
        return out;
    }

    size_t size() const { return x_.size(); }
    const BitVector& x() const { return x_; }
    const BitVector& z() const { return z_; }
    uint8_t phase() const { return phase_; }
    void set_phase(uint8_t p) { phase_ = p & 3; }

    char at(size_t q) const {
        bool xb = x_.get(q), zb = z_.get(q);
        return xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
    }
    void set(size_t q, char p) {
        x_.set(q, p == 'X' || p == 'Y');
        z_.set(q, p == 'Z' || p == 'Y');
    }

    bool is_hermitian() const { return (phase_ & 1) == 0; }
    /// True when the tensor part is the identity (the phase may be anything).
    bool is_scalar() const { return x_.none() && z_.none(); }
    size_t weight() const { return x_.popcount() + z_.popcount() - x_.overlap(z_); }
    size_t num_y() const { return x_.overlap(z_); }
    std::vector<size_t> support() const { return (x_ ^ (x_ & z_) ^ z_).ones(); }

    PauliString negated() const { return PauliString(x_, z_, static_cast<uint8_t>(phase_ + 2)); }

    PauliString& operator*=(const PauliString& b) {
        if (b.size() != size()) throw SizeMismatch("Pauli size mismatch: " + std::to_string(size()) + " vs " + std::to_string(b.size()));
        // Convert both to the X^x Z^z form, multiply, convert back.
        size_t xz_phase = phase_ + num_y() + b.phase_ + b.num_y() + 2 * z_.overlap(b.x_);
        x_ ^= b.x_;
        z_ ^= b.z_;
        phase_ = static_cast<uint8_t>((xz_phase + 4 * size() - num_y()) & 3);
        return *this;
    }
    friend PauliString operator*(PauliString a, const PauliString& b) { return a *= b; }

    bool operator==(const PauliString&) const = default;
    auto operator<=>(const PauliString&) const = default;

  private:
    BitVector x_, z_;
    uint8_t phase_ = 0;
};

/// Symplectic product test: true iff a and b commute.
inline bool commutes(const PauliString& a, const PauliString& b) {
    if (a.size() != b.size()) throw SizeMismatch("Pauli size mismatch in commutes()");
    return ((a.x().overlap(b.z()) + a.z().overlap(b.x())) & 1) == 0;
}

}  // namespace hexcode
