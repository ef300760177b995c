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

// Dense reference implementations for tests. Deliberately naive: matrices
// are built from single-qubit factors with Kronecker products.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat single(char c) {
    Mat m(2, 2);
    switch (c) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: throw std::invalid_argument("bad Pauli letter");
    }
    return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Matrix of a literal like "-iXZY"; qubit 0 is the least significant bit
/// of the basis index, so it is the rightmost Kronecker factor.
inline Mat pauli_matrix(const std::string& lit) {
    size_t pos = 0;
    cplx phase = 1;
    if (pos < lit.size() && (lit[pos] == '+' || lit[pos] == '-')) phase = lit[pos++] == '-' ? -1.0 : 1.0;
    if (pos < lit.size() && lit[pos] == 'i') {
        phase *= cplx(0, 1);
        ++pos;
    }
    Mat m = Mat::Identity(1, 1);
    for (size_t q = pos; q < lit.size(); ++q) m = kron(single(lit[q]), m);
    return phase * m;
}

/// Applies a Pauli literal to a vector qubit by qubit.
inline Vec apply_pauli(const std::string& lit, const Vec& v) {
    size_t pos = 0;
    cplx phase = 1;
    if (pos < lit.size() && (lit[pos] == '+' || lit[pos] == '-')) phase = lit[pos++] == '-' ? -1.0 : 1.0;
    if (pos < lit.size() && lit[pos] == 'i') {
        phase *= cplx(0, 1);
        ++pos;
    }
    Vec out = v;
    for (size_t q = 0; pos + q < lit.size(); ++q) {
        char c = lit[pos + q];
        if (c == 'I') continue;
        Vec next = Vec::Zero(out.size());
        for (Eigen::Index b = 0; b < out.size(); ++b) {
            bool bit = (b >> q) & 1;
            Eigen::Index f = b ^ (Eigen::Index{1} << q);
            switch (c) {
                case 'X': next(f) += out(b); break;
                case 'Y': next(f) += (bit ? cplx(0, -1) : cplx(0, 1)) * out(b); break;
                case 'Z': next(b) += (bit ? -1.0 : 1.0) * out(b); break;
            }
        }
        out = next;
    }
    return phase * out;
}

inline std::string random_literal(std::mt19937_64& rng, size_t n, bool allow_phase = true) {
    static const char letters[] = "IXYZ";
    std::string s;
    if (allow_phase) {
        int p = static_cast<int>(rng() % 4);
        if (p & 2) s += '-';
        if (p & 1) s += 'i';
    }
    for (size_t q = 0; q < n; ++q) s += letters[rng() % 4];
    return s;
}

// Random Clifford circuit on dense vectors. Generators of the output state
// are recovered column by column from U Z_i U^dagger, so they never pass
// through the library's own Pauli algebra.
struct Gate {
    int kind;  // 0 H, 1 S, 2 CNOT
    size_t a, b;
};

inline void apply_gate(const Gate& g, Vec& v, bool inverse) {
    Eigen::Index d = v.size();
    Eigen::Index ma = Eigen::Index{1} << g.a, mb = Eigen::Index{1} << g.b;
    switch (g.kind) {
        case 0: {
            const double s = 1 / std::sqrt(2.0);
            for (Eigen::Index i = 0; i < d; ++i)
                if (!(i & ma)) {
                    cplx x = v(i), y = v(i | ma);
                    v(i) = s * (x + y);
                    v(i | ma) = s * (x - y);
                }
            break;
        }
        case 1:
            for (Eigen::Index i = 0; i < d; ++i)
                if (i & ma) v(i) *= inverse ? cplx(0, -1) : cplx(0, 1);
            break;
        default:
            for (Eigen::Index i = 0; i < d; ++i)
                if ((i & ma) && !(i & mb)) std::swap(v(i), v(i | mb));
    }
}

struct StabilizerState {
    size_t n = 0;
    Vec psi;
    std::vector<std::string> generators;  ///< literals
};

inline StabilizerState random_stabilizer_state(std::mt19937_64& rng, size_t n) {
    std::vector<Gate> circuit;
    size_t len = 4 * n + rng() % (4 * n);
    for (size_t i = 0; i < len; ++i) {
        Gate g{static_cast<int>(rng() % 3), rng() % n, 0};
        if (g.kind == 2) {
            if (n < 2) g.kind = 0;
            else do g.b = rng() % n;
            while (g.b == g.a);
        }
        circuit.push_back(g);
    }
    Eigen::Index d = Eigen::Index{1} << n;
    auto U = [&](Vec v) {
        for (const auto& g : circuit) apply_gate(g, v, false);
        return v;
    };
    auto Udag = [&](Vec v) {
        for (auto it = circuit.rbegin(); it != circuit.rend(); ++it) apply_gate(*it, v, true);
        return v;
    };
    StabilizerState s{n, U(Vec::Unit(d, 0)), {}};
    std::vector<Vec> pre;  // U^dagger |b> for b = 0 and b = e_q
    pre.push_back(Udag(Vec::Unit(d, 0)));
    for (size_t q = 0; q < n; ++q) pre.push_back(Udag(Vec::Unit(d, Eigen::Index{1} << q)));
    for (size_t i = 0; i < n; ++i) {
        auto column = [&](size_t which) {
            Vec v = pre[which];
            for (Eigen::Index j = 0; j < d; ++j)
                if ((j >> i) & 1) v(j) = -v(j);
            return U(v);
        };
        Vec c0 = column(0);
        Eigen::Index x = 0;
        c0.cwiseAbs().maxCoeff(&x);
        std::string letters;
        for (size_t q = 0; q < n; ++q) {
            Vec cq = column(q + 1);
            Eigen::Index row = x ^ (Eigen::Index{1} << q);
            bool zq = std::abs(cq(row) / c0(x) + 1.0) < 1e-6;
            bool xq = (x >> q) & 1;
            letters += xq ? (zq ? 'Y' : 'X') : (zq ? 'Z' : 'I');
        }
        cplx c = c0(x) / apply_pauli(letters, Vec::Unit(d, 0))(x);
        if (std::abs(c - 1.0) < 1e-6) s.generators.push_back("+" + letters);
        else if (std::abs(c + 1.0) < 1e-6) s.generators.push_back("-" + letters);
        else throw std::logic_error("recovered generator is not Hermitian");
    }
    return s;
}

/// Dense matrix of sum_t c_t P_t from (coefficient, literal) pairs.
inline Mat dense_sum(const std::vector<std::pair<double, std::string>>& terms, size_t n) {
    Mat m = Mat::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
    for (const auto& [c, lit] : terms) m += c * pauli_matrix(lit);
    return m;
}

}  // namespace oracle
