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

// Honeycomb torus geometry.
//
// Hexagon (r, c), 0 <= r < rows, 0 <= c < cols, is centered at c*(3,0) +
// r*(3/2, sqrt(3)/2), so every hexagon row is a staircase going up and to the
// right and both indices wrap. Each hexagon owns two vertices: R(r,c) (its
// rightmost corner, qubit 2*(r*cols + c)) and L(r,c) (its leftmost corner,
// qubit 2*(r*cols + c) + 1). Corners of hexagon (r,c) in counter-clockwise
// order starting from the right:
//
//   slot 0  R(r,c)        slot 3  L(r,c)
//   slot 1  L(r+1,c)      slot 4  R(r-1,c)
//   slot 2  R(r+1,c-1)    slot 5  L(r-1,c+1)

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hexcode/pauli.hpp"
#include "hexcode/stabilizer.hpp"

namespace hexcode {

enum class Color : uint8_t { red = 0, green = 1, blue = 2 };
enum class Shade : uint8_t { light = 0, dark = 1 };
enum class PauliKind : uint8_t { z = 0, x = 1 };

inline const char* to_string(Color c) {
    static constexpr const char* names[] = {"red", "green", "blue"};
    return names[static_cast<int>(c)];
}
inline const char* to_string(Shade s) { return s == Shade::light ? "light" : "dark"; }
inline const char* to_string(PauliKind k) { return k == PauliKind::z ? "Z" : "X"; }

struct NotThreeColorable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ShadingInfeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RoutingFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DoesNotFit : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InadmissibleTorus : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Hexagon {
    long row = 0, col = 0;
    std::array<size_t, 6> qubits{};  ///< corner slots 0..5
    std::optional<Color> color;
};

/// Lattice edge between qubits u and v (u is the corner at slot k, v at
/// slot k+1 of `hexagons[0]`).
struct Edge {
    size_t u = 0, v = 0;
    std::array<size_t, 2> hexagons{};  ///< the two hexagons containing the edge
    std::array<size_t, 2> ends{};      ///< hexagons at the u and v end, not containing the edge
    long dr = 0, dc = 0;               ///< cover displacement from ends[0] to ends[1]
    std::optional<Color> color;
};

struct Trapezoid {
    size_t hexagon = 0;
    std::array<size_t, 4> qubits{};
    Shade shade = Shade::light;
    size_t row = 0;       ///< chain row (hexagon row of its bond operators)
    size_t position = 0;  ///< index along the row's chain
};

/// One row chain: `sites[i]` and `sites[i+1 mod N]` are trapezoids joined by
/// the CC term of hexagon `bonds[i]`.
struct RowChain {
    Shade shade = Shade::light;
    size_t row = 0;
    std::vector<size_t> sites;
    std::vector<size_t> bonds;
};

enum class LoopKind : uint8_t { cc_colored = 0, tc_noncontractible = 1, wilson_rectangle = 2 };

inline const char* to_string(LoopKind k) {
    static constexpr const char* names[] = {"cc_colored", "tc_noncontractible", "wilson_rectangle"};
    return names[static_cast<int>(k)];
}

struct LoopSpec {
    LoopKind kind = LoopKind::cc_colored;
    PauliKind type = PauliKind::z;
    int sigma = 0;  ///< 0: winds along hexagon rows, 1: winds across rows
    std::optional<Color> color;
    std::vector<size_t> qubits;  ///< sorted support
    size_t height = 0, width = 0;
    std::vector<size_t> enclosed;  ///< light trapezoid indices for Wilson rectangles

    PauliString op(size_t n) const {
        return type == PauliKind::z ? PauliString::z_on(n, qubits) : PauliString::x_on(n, qubits);
    }
    std::string name() const {
        std::string s = to_string(kind);
        s += type == PauliKind::z ? "/Z" : "/X";
        if (kind == LoopKind::wilson_rectangle) return s + "/" + std::to_string(height) + "x" + std::to_string(width);
        s += "/sigma" + std::to_string(sigma);
        if (color) s += std::string("/") + to_string(*color);
        return s;
    }
};

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    size_t rows = 0, cols = 0;
    std::vector<ValidationCheck> checks;
    bool admissible() const {
        return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
    }
    const ValidationCheck* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

class HexTorus {
  public:
    size_t rows = 0, cols = 0;
    std::vector<Hexagon> hexagons;
    std::vector<Edge> edges;
    std::vector<std::array<size_t, 3>> qubit_hexagons;  ///< hexagons containing each qubit
    /// Per hexagon: cut axis a in {0,1,2} (the cut joins slots a and a+3) and
    /// whether the slots a..a+3 side is light.
    std::vector<uint8_t> cut_axis;
    std::vector<uint8_t> first_side_light;
    std::vector<Trapezoid> trapezoids;
    std::vector<RowChain> light_rows, dark_rows;
    std::vector<LoopSpec> loops;

    size_t n_qubits() const { return 2 * rows * cols; }
    size_t n_hexagons() const { return rows * cols; }
    bool colored() const { return !hexagons.empty() && hexagons[0].color.has_value(); }
    bool shaded() const { return !trapezoids.empty(); }

    size_t hex_index(long r, long c) const {
        long R = static_cast<long>(rows), C = static_cast<long>(cols);
        return static_cast<size_t>(((r % R) + R) % R * C + ((c % C) + C) % C);
    }
    size_t qubit_r(long r, long c) const { return 2 * hex_index(r, c); }
    size_t qubit_l(long r, long c) const { return 2 * hex_index(r, c) + 1; }

    PauliString hx(size_t h) const { return PauliString::x_on(n_qubits(), hexagons[h].qubits); }
    PauliString hz(size_t h) const { return PauliString::z_on(n_qubits(), hexagons[h].qubits); }
    /// B_p (light, Z-type) or A_s (dark, X-type) of a trapezoid.
    PauliString trapezoid_op(size_t t) const {
        const auto& tr = trapezoids[t];
        return tr.shade == Shade::light ? PauliString::z_on(n_qubits(), tr.qubits) : PauliString::x_on(n_qubits(), tr.qubits);
    }
    std::vector<size_t> trapezoids_of(Shade s) const {
        std::vector<size_t> out;
        for (size_t i = 0; i < trapezoids.size(); ++i)
            if (trapezoids[i].shade == s) out.push_back(i);
        return out;
    }
    const RowChain& row_chain(Shade s, size_t row) const {
        const auto& v = s == Shade::light ? light_rows : dark_rows;
        if (row >= v.size()) throw std::out_of_range("row index " + std::to_string(row) + " out of range");
        return v[row];
    }
    const LoopSpec& loop(LoopKind kind, PauliKind type, int sigma, std::optional<Color> color = std::nullopt) const {
        for (const auto& l : loops)
            if (l.kind == kind && l.type == type && l.sigma == sigma && l.color == color) return l;
        throw std::out_of_range("no such loop routed");
    }

    std::vector<PauliString> cc_terms() const {
        std::vector<PauliString> out;
        for (size_t h = 0; h < n_hexagons(); ++h) out.push_back(hx(h));
        for (size_t h = 0; h < n_hexagons(); ++h) out.push_back(hz(h));
        return out;
    }
    std::vector<PauliString> tc_terms() const {
        std::vector<PauliString> out;
        for (size_t t : trapezoids_of(Shade::light)) out.push_back(trapezoid_op(t));
        for (size_t t : trapezoids_of(Shade::dark)) out.push_back(trapezoid_op(t));
        return out;
    }
};

namespace geom {

struct Cell {
    long r, c;
    bool operator==(const Cell&) const = default;
    auto operator<=>(const Cell&) const = default;
};
/// Unwrapped vertex owned by hexagon (r, c); side 0 = R, 1 = L.
struct Vertex {
    long r, c;
    int side;
    bool operator==(const Vertex&) const = default;
};

inline Vertex slot(Cell h, int k) {
    switch (((k % 6) + 6) % 6) {
        case 0: return {h.r, h.c, 0};
        case 1: return {h.r + 1, h.c, 1};
        case 2: return {h.r + 1, h.c - 1, 0};
        case 3: return {h.r, h.c, 1};
        case 4: return {h.r - 1, h.c, 0};
        default: return {h.r - 1, h.c + 1, 1};
    }
}

inline std::array<Cell, 3> containing(Vertex v) {
    if (v.side == 0) return {Cell{v.r, v.c}, Cell{v.r - 1, v.c + 1}, Cell{v.r + 1, v.c}};
    return {Cell{v.r, v.c}, Cell{v.r - 1, v.c}, Cell{v.r + 1, v.c - 1}};
}

}  // namespace geom

inline size_t vertex_qubit(const HexTorus& t, geom::Vertex v) {
    return v.side == 0 ? t.qubit_r(v.r, v.c) : t.qubit_l(v.r, v.c);
}

/// Periodic honeycomb with rows * cols hexagons and 2 * rows * cols qubits.
inline HexTorus build_hex_torus(size_t rows, size_t cols) {
    if (rows < 2 || cols < 2) throw std::invalid_argument("torus needs at least 2 rows and 2 columns");
    HexTorus t;
    t.rows = rows;
    t.cols = cols;
    size_t n = t.n_qubits();
    t.hexagons.resize(t.n_hexagons());
    std::vector<std::vector<size_t>> inc(n);
    for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c) {
            size_t h = t.hex_index(r, c);
            auto& hex = t.hexagons[h];
            hex.row = static_cast<long>(r);
            hex.col = static_cast<long>(c);
            for (int k = 0; k < 6; ++k) {
                hex.qubits[k] = vertex_qubit(t, geom::slot({hex.row, hex.col}, k));
                inc[hex.qubits[k]].push_back(h);
            }
        }
    t.qubit_hexagons.resize(n);
    for (size_t q = 0; q < n; ++q)
        for (size_t i = 0; i < 3 && i < inc[q].size(); ++i) t.qubit_hexagons[q][i] = inc[q][i];

    std::set<std::pair<size_t, size_t>> seen;
    for (size_t h = 0; h < t.n_hexagons(); ++h) {
        geom::Cell H{t.hexagons[h].row, t.hexagons[h].col};
        for (int k = 0; k < 6; ++k) {
            geom::Vertex a = geom::slot(H, k), b = geom::slot(H, k + 1);
            Edge e;
            e.u = vertex_qubit(t, a);
            e.v = vertex_qubit(t, b);
            auto key = std::minmax(e.u, e.v);
            if (!seen.insert(key).second) continue;
            auto ca = geom::containing(a), cb = geom::containing(b);
            std::optional<geom::Cell> across, end_a, end_b;
            for (auto x : ca)
                if (!(x == H) && std::find(cb.begin(), cb.end(), x) != cb.end()) across = x;
            for (auto x : ca)
                if (!(x == H) && !(across && x == *across)) end_a = x;
            for (auto x : cb)
                if (!(x == H) && !(across && x == *across)) end_b = x;
            e.hexagons = {h, t.hex_index(across->r, across->c)};
            e.ends = {t.hex_index(end_a->r, end_a->c), t.hex_index(end_b->r, end_b->c)};
            e.dr = end_b->r - end_a->r;
            e.dc = end_b->c - end_a->c;
            t.edges.push_back(e);
        }
    }
    return t;
}

/// Proper 3-coloring of the hexagon adjacency graph by backtracking, plus the
/// induced edge colors (an edge takes the color of the two hexagons at its
/// ends). Throws NotThreeColorable.
inline HexTorus three_color(HexTorus t) {
    size_t P = t.n_hexagons();
    std::vector<std::set<size_t>> adj(P);
    for (const auto& e : t.edges) {
        adj[e.hexagons[0]].insert(e.hexagons[1]);
        adj[e.hexagons[1]].insert(e.hexagons[0]);
    }
    auto fail = [&](const std::string& why) {
        return NotThreeColorable(std::to_string(t.rows) + "x" + std::to_string(t.cols) + " torus: " + why);
    };
    for (size_t h = 0; h < P; ++h)
        if (adj[h].count(h)) throw fail("hexagon adjacent to itself");
    std::vector<int> color(P, -1);
    std::vector<int> next(P, 0);
    size_t h = 0;
    while (h < P) {
        bool placed = false;
        while (next[h] < 3) {
            int c = next[h]++;
            bool ok = true;
            for (size_t g : adj[h])
                if (color[g] == c) ok = false;
            if (ok) {
                color[h] = c;
                placed = true;
                break;
            }
        }
        if (placed) {
            ++h;
            if (h < P) next[h] = 0;
            continue;
        }
        color[h] = -1;
        if (h == 0) throw fail("hexagon adjacency graph has no proper 3-coloring");
        --h;
        color[h] = -1;
    }
    for (size_t i = 0; i < P; ++i) t.hexagons[i].color = static_cast<Color>(color[i]);
    for (auto& e : t.edges) {
        int a = color[e.ends[0]], b = color[e.ends[1]];
        if (a != b) throw fail("edge ends have different colors");
        e.color = static_cast<Color>(a);
    }
    return t;
}

namespace detail {

inline std::array<size_t, 4> trapezoid_slots(const Hexagon& h, int axis, bool first) {
    int s = first ? axis : axis + 3;
    return {h.qubits[s % 6], h.qubits[(s + 1) % 6], h.qubits[(s + 2) % 6], h.qubits[(s + 3) % 6]};
}

inline bool contains(const std::array<size_t, 4>& a, size_t q) { return std::find(a.begin(), a.end(), q) != a.end(); }

inline size_t overlap(const std::array<size_t, 4>& a, const std::array<size_t, 6>& b) {
    size_t c = 0;
    for (size_t q : a)
        if (std::find(b.begin(), b.end(), q) != b.end()) ++c;
    return c;
}

/// Builds the trapezoid list and the row chains from the per-hexagon cut
/// choices. Returns an empty optional (with a reason) if the row property or
/// chain structure fails.
inline std::optional<std::string> assemble_rows(HexTorus& t) {
    size_t P = t.n_hexagons();
    t.trapezoids.clear();
    for (size_t h = 0; h < P; ++h) {
        bool lf = t.first_side_light[h];
        Trapezoid a{h, trapezoid_slots(t.hexagons[h], t.cut_axis[h], lf), Shade::light, 0, 0};
        Trapezoid b{h, trapezoid_slots(t.hexagons[h], t.cut_axis[h], !lf), Shade::dark, 0, 0};
        t.trapezoids.push_back(a);
        t.trapezoids.push_back(b);
    }
    t.light_rows.clear();
    t.dark_rows.clear();
    for (Shade shade : {Shade::light, Shade::dark}) {
        // Graph on trapezoids of this shade; CC terms of the opposite Pauli
        // type on hexagon h are the bonds.
        std::vector<std::vector<std::pair<size_t, size_t>>> nbr(t.trapezoids.size());
        for (size_t h = 0; h < P; ++h) {
            std::vector<size_t> hit;
            for (size_t i = 0; i < t.trapezoids.size(); ++i)
                if (t.trapezoids[i].shade == shade && overlap(t.trapezoids[i].qubits, t.hexagons[h].qubits) % 2 == 1) hit.push_back(i);
            if (hit.size() != 2) return std::string("hexagon ") + std::to_string(h) + " anticommutes with " + std::to_string(hit.size()) + " " + to_string(shade) + " trapezoids";
            nbr[hit[0]].push_back({hit[1], h});
            nbr[hit[1]].push_back({hit[0], h});
        }
        std::vector<bool> done(t.trapezoids.size(), false);
        std::vector<RowChain> chains;
        for (size_t s = 0; s < t.trapezoids.size(); ++s) {
            if (t.trapezoids[s].shade != shade || done[s]) continue;
            if (nbr[s].size() != 2) return std::string("trapezoid ") + std::to_string(s) + " has chain degree " + std::to_string(nbr[s].size());
            RowChain ch;
            ch.shade = shade;
            size_t cur = s, prev = SIZE_MAX, prev_bond = SIZE_MAX;
            while (true) {
                ch.sites.push_back(cur);
                done[cur] = true;
                auto cand = nbr[cur];
                std::sort(cand.begin(), cand.end());
                std::optional<std::pair<size_t, size_t>> step;
                for (auto& [m, b] : cand)
                    if (!(m == prev && b == prev_bond)) {
                        step = {m, b};
                        break;
                    }
                ch.bonds.push_back(step->second);
                prev = cur;
                prev_bond = step->second;
                cur = step->first;
                if (cur == s) break;
                if (done[cur] || ch.sites.size() > t.trapezoids.size()) return std::string("chain through trapezoid ") + std::to_string(s) + " is not a simple cycle";
            }
            long row = t.hexagons[ch.bonds[0]].row;
            for (size_t b : ch.bonds)
                if (t.hexagons[b].row != row) return std::string("chain bonds span several hexagon rows");
            if (ch.sites.size() != t.cols) return std::string("chain length ") + std::to_string(ch.sites.size()) + " != " + std::to_string(t.cols);
            ch.row = static_cast<size_t>(row);
            chains.push_back(std::move(ch));
        }
        if (chains.size() != t.rows) return std::string("found ") + std::to_string(chains.size()) + " " + to_string(shade) + " chains, expected one per row";
        std::sort(chains.begin(), chains.end(), [](const auto& a, const auto& b) { return a.row < b.row; });
        for (size_t r = 0; r < chains.size(); ++r) {
            if (chains[r].row != r) return std::string("two chains share a row");
            for (size_t i = 0; i < chains[r].sites.size(); ++i) {
                t.trapezoids[chains[r].sites[i]].row = r;
                t.trapezoids[chains[r].sites[i]].position = i;
            }
        }
        (shade == Shade::light ? t.light_rows : t.dark_rows) = std::move(chains);
    }
    // All toric-code terms must commute.
    auto terms = t.tc_terms();
    for (size_t a = 0; a < terms.size(); ++a)
        for (size_t b = a + 1; b < terms.size(); ++b)
            if (!commutes(terms[a], terms[b])) return std::string("toric-code terms do not commute");
    return std::nullopt;
}

/// Lattice edges shared by trapezoids must separate opposite shades.
inline bool chess_ok_partial(const HexTorus& t, const std::vector<int>& choice) {
    for (const auto& e : t.edges) {
        size_t h0 = e.hexagons[0], h1 = e.hexagons[1];
        if (choice[h0] < 0 || choice[h1] < 0) continue;
        std::optional<bool> s0, s1;
        for (int side = 0; side < 2; ++side) {
            auto q0 = trapezoid_slots(t.hexagons[h0], choice[h0] / 2, side == 0);
            if (contains(q0, e.u) && contains(q0, e.v)) s0 = (side == 0) == static_cast<bool>(choice[h0] % 2 == 0);
            auto q1 = trapezoid_slots(t.hexagons[h1], choice[h1] / 2, side == 0);
            if (contains(q1, e.u) && contains(q1, e.v)) s1 = (side == 0) == static_cast<bool>(choice[h1] % 2 == 0);
        }
        if (s0 && s1 && *s0 == *s1) return false;
    }
    return true;
}

}  // namespace detail

/// Splits every hexagon into two trapezoids and shades them. The cut and
/// shading are searched so that CC terms bond trapezoids into one ring per
/// row and shade. Choice (axis 0, first side light) is tried first.
inline HexTorus partition_trapezoids(HexTorus t, size_t node_budget = 2'000'000) {
    size_t P = t.n_hexagons(), n = t.n_qubits();
    // choice = 2 * axis + (first side light ? 0 : 1)
    std::vector<int> choice(P, -1);
    std::vector<int> cuts(n, 0), light(n, 0), dark(n, 0), assigned(n, 0);
    auto apply = [&](size_t h, int ch, int sgn) {
        int axis = ch / 2;
        bool first_light = ch % 2 == 0;
        const auto& hex = t.hexagons[h];
        cuts[hex.qubits[axis]] += sgn;
        cuts[hex.qubits[axis + 3]] += sgn;
        for (bool first : {true, false}) {
            auto q = detail::trapezoid_slots(hex, axis, first);
            for (size_t x : q) ((first == first_light) ? light : dark)[x] += sgn;
        }
        for (size_t x : hex.qubits) assigned[x] += sgn;
    };
    auto local_ok = [&](size_t h) {
        for (size_t x : t.hexagons[h].qubits) {
            if (cuts[x] > 1 || light[x] > 2 || dark[x] > 2) return false;
            if (assigned[x] == 3 && (cuts[x] != 1 || light[x] != 2 || dark[x] != 2)) return false;
        }
        return detail::chess_ok_partial(t, choice);
    };
    size_t nodes = 0;
    std::string last_reason = "no candidate";
    std::vector<int> next(P, 0);
    size_t h = 0;
    while (true) {
        if (h == P) {
            t.cut_axis.assign(P, 0);
            t.first_side_light.assign(P, 0);
            for (size_t i = 0; i < P; ++i) {
                t.cut_axis[i] = static_cast<uint8_t>(choice[i] / 2);
                t.first_side_light[i] = choice[i] % 2 == 0;
            }
            auto why = detail::assemble_rows(t);
            if (!why) return t;
            last_reason = *why;
            --h;
            apply(h, choice[h], -1);
            choice[h] = -1;
            continue;
        }
        bool placed = false;
        while (next[h] < 6) {
            int ch = next[h]++;
            if (++nodes > node_budget) throw ShadingInfeasible("trapezoid search exceeded its node budget");
            choice[h] = ch;
            apply(h, ch, +1);
            if (local_ok(h)) {
                placed = true;
                break;
            }
            apply(h, ch, -1);
            choice[h] = -1;
        }
        if (placed) {
            ++h;
            if (h < P) next[h] = 0;
            continue;
        }
        if (h == 0) break;
        --h;
        apply(h, choice[h], -1);
        choice[h] = -1;
    }
    t.trapezoids.clear();
    t.light_rows.clear();
    t.dark_rows.clear();
    throw ShadingInfeasible(std::to_string(t.rows) + "x" + std::to_string(t.cols) + " torus admits no valid shading (last failure: " + last_reason + ")");
}

namespace detail {

/// Shortest path through the links of one color, from hexagon `start` to a
/// cover translate of itself. sigma 0 needs displacement (0, +-cols); sigma 1
/// needs +-(rows, wind * cols).
inline std::optional<std::vector<size_t>> route_color(const HexTorus& t, Color color, size_t start, int sigma, long wind = 0) {
    long R = static_cast<long>(t.rows), C = static_cast<long>(t.cols);
    long br = 2 * R + 2, bc = 3 * C + 2;
    std::map<std::pair<long, long>, std::pair<std::pair<long, long>, size_t>> parent;
    std::deque<std::pair<long, long>> queue;
    parent[{0, 0}] = {{0, 0}, SIZE_MAX};
    queue.push_back({0, 0});
    std::vector<std::vector<std::pair<size_t, int>>> links(t.n_hexagons());
    for (size_t e = 0; e < t.edges.size(); ++e) {
        if (t.edges[e].color != color) continue;
        links[t.edges[e].ends[0]].push_back({e, +1});
        links[t.edges[e].ends[1]].push_back({e, -1});
    }
    auto is_target = [&](long dr, long dc) {
        if (sigma == 0) return dr == 0 && dc != 0 && dc % C == 0 && std::abs(dc) == C;
        return (dr == R && dc == wind * C) || (dr == -R && dc == -wind * C);
    };
    long sr = t.hexagons[start].row, sc = t.hexagons[start].col;
    while (!queue.empty()) {
        auto [dr, dc] = queue.front();
        queue.pop_front();
        if (is_target(dr, dc)) {
            std::vector<size_t> path;
            std::pair<long, long> cur{dr, dc};
            while (parent[cur].second != SIZE_MAX) {
                path.push_back(parent[cur].second);
                cur = parent[cur].first;
            }
            std::reverse(path.begin(), path.end());
            return path;
        }
        size_t h = t.hex_index(sr + dr, sc + dc);
        for (auto [e, dir] : links[h]) {
            std::pair<long, long> nxt{dr + dir * t.edges[e].dr, dc + dir * t.edges[e].dc};
            if (std::abs(nxt.first) > br || std::abs(nxt.second) > bc || parent.count(nxt)) continue;
            parent[nxt] = {{dr, dc}, e};
            queue.push_back(nxt);
        }
    }
    return std::nullopt;
}

inline std::vector<size_t> path_support(const HexTorus& t, const std::vector<size_t>& path) {
    BitVector b(t.n_qubits());
    for (size_t e : path) {
        b.flip(t.edges[e].u);
        b.flip(t.edges[e].v);
    }
    return b.ones();
}

}  // namespace detail

/// Routes colored CC logicals (all colors, both directions, Z and X type) and
/// TC logicals L_Z^sigma, L_x^sigma. The sigma 0 TC pair commutes with every
/// CC term; the sigma 1 pair only with the TC terms.
inline std::vector<LoopSpec> noncontractible_loops(const HexTorus& t) {
    if (!t.colored() || !t.shaded()) throw RoutingFailed("loops need a colored and shaded torus");
    size_t n = t.n_qubits();
    std::vector<LoopSpec> out;
    auto cc = t.cc_terms();
    auto tc = t.tc_terms();
    StabilizerGroup tc_group(n, tc);
    StabilizerGroup cc_group(n, cc);
    auto commutes_all = [&](const PauliString& p, const std::vector<PauliString>& terms) {
        return std::all_of(terms.begin(), terms.end(), [&](const auto& s) { return commutes(p, s); });
    };
    // All three colors of one direction share the winding, so that their
    // product is a CC stabilizer; sigma 1 tries winding numbers in turn.
    for (int sigma = 0; sigma < 2; ++sigma) {
        bool routed = false;
        for (long wind : {0L, 1L, -1L, 2L, -2L}) {
            if (sigma == 0 && wind != 0) break;
            std::vector<LoopSpec> batch;
            bool ok = true;
            for (int c = 0; c < 3 && ok; ++c) {
                Color color = static_cast<Color>(c);
                std::optional<std::vector<size_t>> path;
                for (size_t h = 0; h < t.n_hexagons() && !path; ++h)
                    if (t.hexagons[h].color == color) path = detail::route_color(t, color, h, sigma, wind);
                if (!path) {
                    ok = false;
                    break;
                }
                for (PauliKind type : {PauliKind::z, PauliKind::x}) {
                    LoopSpec l;
                    l.kind = LoopKind::cc_colored;
                    l.type = type;
                    l.sigma = sigma;
                    l.color = color;
                    l.qubits = detail::path_support(t, *path);
                    auto op = l.op(n);
                    if (!commutes_all(op, cc) || cc_group.contains_up_to_sign(op))
                        throw RoutingFailed("routed " + l.name() + " is not a CC logical");
                    batch.push_back(l);
                }
            }
            if (!ok) continue;
            for (PauliKind type : {PauliKind::z, PauliKind::x}) {
                PauliString prod = PauliString::identity(n);
                for (const auto& l : batch)
                    if (l.type == type) prod *= l.op(n);
                if (cc_group.member_with_sign(prod) == Membership::not_member) ok = false;
            }
            if (!ok) continue;
            out.insert(out.end(), batch.begin(), batch.end());
            routed = true;
            break;
        }
        if (!routed) throw RoutingFailed("no colored loop triple in direction " + std::to_string(sigma) + " multiplies to a CC stabilizer");
    }
    // sigma 0: the TC logical of each type that commutes with every CC term.
    // Candidates are products of same-type CC terms and colored loops that
    // also commute with the opposite-type TC terms.
    auto opposite_terms = [&](PauliKind type) {
        std::vector<PauliString> v;
        for (size_t i = 0; i < t.trapezoids.size(); ++i)
            if (t.trapezoids[i].shade == (type == PauliKind::z ? Shade::dark : Shade::light)) v.push_back(t.trapezoid_op(i));
        return v;
    };
    auto kernel_candidates = [&](const std::vector<PauliString>& basis, const std::vector<PauliString>& against) {
        std::vector<BitVector> pattern;
        for (const auto& b : basis) {
            BitVector v(against.size());
            for (size_t j = 0; j < against.size(); ++j)
                if (!commutes(b, against[j])) v.set(j, true);
            pattern.push_back(std::move(v));
        }
        std::vector<PauliString> cands;
        for (size_t i = 0; i < basis.size(); ++i)
            if (pattern[i].none()) cands.push_back(basis[i]);
        for (const auto& alpha : detail::gf2_kernel(pattern)) {
            PauliString p = PauliString::identity(n);
            for (size_t i : alpha.ones()) p *= basis[i];
            p.set_phase(0);
            cands.push_back(p);
        }
        return cands;
    };
    // Lower the weight by multiplying with same-type TC terms while it helps.
    auto shorten = [&](PauliString p, PauliKind type) {
        std::vector<PauliString> same;
        for (size_t i = 0; i < t.trapezoids.size(); ++i)
            if (t.trapezoids[i].shade == (type == PauliKind::z ? Shade::light : Shade::dark)) same.push_back(t.trapezoid_op(i));
        for (bool improved = true; improved;) {
            improved = false;
            for (const auto& s : same) {
                PauliString q = p * s;
                if (q.weight() < p.weight()) {
                    p = q;
                    p.set_phase(0);
                    improved = true;
                }
            }
        }
        return p;
    };
    auto make_loop = [&](const PauliString& p, PauliKind type, int sigma) {
        LoopSpec l;
        l.kind = LoopKind::tc_noncontractible;
        l.type = type;
        l.sigma = sigma;
        l.qubits = (type == PauliKind::z ? p.z() : p.x()).ones();
        return l;
    };
    std::array<PauliString, 2> tc0;
    for (PauliKind type : {PauliKind::z, PauliKind::x}) {
        std::vector<PauliString> basis;
        for (const auto& l : out)
            if (l.kind == LoopKind::cc_colored && l.type == type) basis.push_back(l.op(n));
        for (size_t h = 0; h < t.n_hexagons(); ++h) basis.push_back(type == PauliKind::z ? t.hz(h) : t.hx(h));
        std::optional<PauliString> found;
        for (const auto& c : kernel_candidates(basis, opposite_terms(type)))
            if (!tc_group.contains_up_to_sign(c) && commutes_all(c, cc)) {
                found = c;
                break;
            }
        if (!found) throw RoutingFailed(std::string("no TC ") + to_string(type) + " loop commuting with all CC terms");
        tc0[type == PauliKind::z ? 0 : 1] = *found;
    }
    // sigma 1: the TC logical of each type that anticommutes with the sigma 0
    // logical of the other type. No such operator commutes with every CC term.
    std::array<PauliString, 2> tc1;
    for (PauliKind type : {PauliKind::z, PauliKind::x}) {
        std::vector<PauliString> basis;
        for (size_t q = 0; q < n; ++q) basis.push_back(PauliString::single(n, q, type == PauliKind::z ? 'Z' : 'X'));
        const PauliString& partner = tc0[type == PauliKind::z ? 1 : 0];
        std::optional<PauliString> found;
        for (const auto& c : kernel_candidates(basis, opposite_terms(type)))
            if (!commutes(c, partner)) {
                found = c;
                break;
            }
        if (!found) throw RoutingFailed(std::string("no TC ") + to_string(type) + " loop in direction 1");
        tc1[type == PauliKind::z ? 0 : 1] = shorten(*found, type);
    }
    for (PauliKind type : {PauliKind::z, PauliKind::x}) out.push_back(make_loop(tc0[type == PauliKind::z ? 0 : 1], type, 0));
    for (PauliKind type : {PauliKind::z, PauliKind::x}) out.push_back(make_loop(tc1[type == PauliKind::z ? 0 : 1], type, 1));
    return out;
}

/// Wilson loop: product of the light B_p in chain rows [row0, row0+height),
/// chain positions [pos0, pos0+width) where (row0, pos0) is the anchor
/// trapezoid's place.
inline LoopSpec wilson_rectangle(const HexTorus& t, size_t height, size_t width, size_t anchor) {
    if (!t.shaded()) throw DoesNotFit("torus has no trapezoid partition");
    if (anchor >= t.trapezoids.size() || t.trapezoids[anchor].shade != Shade::light)
        throw DoesNotFit("anchor must be a light trapezoid");
    if (height > t.rows - 1 || width > t.cols - 1)
        throw DoesNotFit(std::to_string(height) + "x" + std::to_string(width) + " rectangle wraps the " + std::to_string(t.rows) + "x" + std::to_string(t.cols) + " torus");
    LoopSpec l;
    l.kind = LoopKind::wilson_rectangle;
    l.type = PauliKind::z;
    l.height = height;
    l.width = width;
    size_t r0 = t.trapezoids[anchor].row, p0 = t.trapezoids[anchor].position;
    BitVector b(t.n_qubits());
    for (size_t dr = 0; dr < height; ++dr) {
        const auto& ch = t.light_rows[(r0 + dr) % t.rows];
        for (size_t dp = 0; dp < width; ++dp) {
            size_t tr = ch.sites[(p0 + dp) % t.cols];
            l.enclosed.push_back(tr);
            for (size_t q : t.trapezoids[tr].qubits) b.flip(q);
        }
    }
    std::sort(l.enclosed.begin(), l.enclosed.end());
    l.qubits = b.ones();
    // The boundary string must be the product of the enclosed B_p.
    std::vector<PauliString> enclosed_ops;
    for (size_t tr : l.enclosed) enclosed_ops.push_back(t.trapezoid_op(tr));
    StabilizerGroup g(t.n_qubits(), enclosed_ops);
    if (g.member_with_sign(l.op(t.n_qubits())) != Membership::plus) throw DoesNotFit("boundary is not the product of enclosed plaquettes");
    return l;
}

/// All rectangles that fit, anchored at the first light trapezoid.
inline std::vector<LoopSpec> all_wilson_rectangles(const HexTorus& t) {
    std::vector<LoopSpec> out;
    size_t anchor = t.light_rows.at(0).sites.at(0);
    for (size_t h = 1; h < t.rows; ++h)
        for (size_t w = 1; w < t.cols; ++w) out.push_back(wilson_rectangle(t, h, w, anchor));
    return out;
}

/// Runs every structural check on the torus as stored.
inline ValidationReport validate(const HexTorus& t) {
    ValidationReport rep;
    rep.rows = t.rows;
    rep.cols = t.cols;
    size_t n = t.n_qubits(), P = t.n_hexagons();
    auto add = [&](std::string name, bool ok, std::string detail) { rep.checks.push_back({std::move(name), ok, std::move(detail)}); };

    {
        std::vector<std::set<size_t>> inc(n);
        bool ok = t.hexagons.size() == P;
        for (size_t h = 0; h < t.hexagons.size(); ++h) {
            std::set<size_t> qs(t.hexagons[h].qubits.begin(), t.hexagons[h].qubits.end());
            if (qs.size() != 6) ok = false;
            for (size_t q : qs) {
                if (q >= n) ok = false;
                else inc[q].insert(h);
            }
        }
        size_t bad = 0;
        for (size_t q = 0; q < n; ++q)
            if (inc[q].size() != 3) ++bad;
        add("incidence", ok && bad == 0, bad ? std::to_string(bad) + " qubits not in exactly 3 hexagons" : "every qubit in 3 hexagons");
    }
    {
        bool ok = t.edges.size() == 3 * n / 2;
        add("edges", ok, std::to_string(t.edges.size()) + " edges");
    }
    if (!t.colored()) {
        add("coloring", false, "torus is not 3-colored");
    } else {
        size_t bad = 0;
        for (const auto& e : t.edges)
            if (t.hexagons[e.hexagons[0]].color == t.hexagons[e.hexagons[1]].color) ++bad;
        add("coloring", bad == 0, bad ? std::to_string(bad) + " edges between same-colored hexagons" : "proper");
        size_t bad_edges = 0;
        for (const auto& e : t.edges) {
            auto c = e.color;
            if (!c || t.hexagons[e.ends[0]].color != c || t.hexagons[e.ends[1]].color != c || t.hexagons[e.hexagons[0]].color == c ||
                t.hexagons[e.hexagons[1]].color == c)
                ++bad_edges;
        }
        add("edge_coloring", bad_edges == 0, bad_edges ? std::to_string(bad_edges) + " inconsistent edge colors" : "consistent");
    }
    if (!t.shaded()) {
        add("shading", false, "torus has no trapezoid partition");
    } else {
        bool split_ok = t.trapezoids.size() == 2 * P;
        for (size_t h = 0; h < P && split_ok; ++h) {
            std::set<size_t> u;
            size_t count = 0;
            std::vector<const Trapezoid*> mine;
            for (const auto& tr : t.trapezoids)
                if (tr.hexagon == h) mine.push_back(&tr);
            if (mine.size() != 2 || mine[0]->shade == mine[1]->shade) {
                split_ok = false;
                break;
            }
            for (auto* tr : mine)
                for (size_t q : tr->qubits) {
                    u.insert(q);
                    ++count;
                    if (std::find(t.hexagons[h].qubits.begin(), t.hexagons[h].qubits.end(), q) == t.hexagons[h].qubits.end()) split_ok = false;
                }
            if (u.size() != 6 || count != 8) split_ok = false;
        }
        add("trapezoid_split", split_ok, split_ok ? "every hexagon split into a light and a dark 4-qubit trapezoid" : "bad split");

        std::vector<int> light(n, 0), dark(n, 0);
        for (const auto& tr : t.trapezoids)
            for (size_t q : tr.qubits) (tr.shade == Shade::light ? light : dark)[q]++;
        size_t bad = 0;
        for (size_t q = 0; q < n; ++q)
            if (light[q] != 2 || dark[q] != 2) ++bad;
        add("shading", bad == 0, bad ? std::to_string(bad) + " qubits without 2 light and 2 dark trapezoids" : "2 light + 2 dark per qubit");

        size_t chess_bad = 0;
        for (const auto& e : t.edges) {
            std::vector<Shade> s;
            for (const auto& tr : t.trapezoids)
                if (detail::contains(tr.qubits, e.u) && detail::contains(tr.qubits, e.v)) s.push_back(tr.shade);
            if (s.size() != 2 || s[0] == s[1]) ++chess_bad;
        }
        add("chess_pattern", chess_bad == 0, chess_bad ? std::to_string(chess_bad) + " edges not separating opposite shades" : "edge-sharing trapezoids differ");

        auto tc = t.tc_terms();
        size_t anti = 0;
        for (size_t a = 0; a < tc.size(); ++a)
            for (size_t b = a + 1; b < tc.size(); ++b)
                if (!commutes(tc[a], tc[b])) ++anti;
        add("tc_commutation", anti == 0, std::to_string(anti) + " anticommuting TC pairs");

        // Row property, recomputed independently of the stored chains.
        size_t row_bad = 0;
        for (size_t h = 0; h < P; ++h)
            for (Shade sh : {Shade::light, Shade::dark}) {
                auto op = sh == Shade::light ? t.hx(h) : t.hz(h);
                std::vector<size_t> hit;
                for (size_t i = 0; i < t.trapezoids.size(); ++i)
                    if (t.trapezoids[i].shade == sh && !commutes(op, t.trapezoid_op(i))) hit.push_back(i);
                if (hit.size() != 2) {
                    ++row_bad;
                    continue;
                }
                const auto& a = t.trapezoids[hit[0]];
                const auto& b = t.trapezoids[hit[1]];
                size_t d = (a.position + t.cols - b.position) % t.cols;
                if (a.row != b.row || a.row != static_cast<size_t>(t.hexagons[h].row) || (d != 1 && d != t.cols - 1)) ++row_bad;
            }
        add("row_property", row_bad == 0, row_bad ? std::to_string(row_bad) + " CC terms violate the two-neighbor row rule" : "each CC term bonds two row neighbors");

        bool rows_ok = t.light_rows.size() == t.rows && t.dark_rows.size() == t.rows;
        for (const auto* set : {&t.light_rows, &t.dark_rows})
            for (const auto& ch : *set) {
                if (ch.sites.size() != t.cols || ch.bonds.size() != t.cols) rows_ok = false;
                std::set<size_t> s(ch.sites.begin(), ch.sites.end());
                if (s.size() != ch.sites.size()) rows_ok = false;
                for (size_t i = 0; i < ch.sites.size() && rows_ok; ++i) {
                    auto op = ch.shade == Shade::light ? t.hx(ch.bonds[i]) : t.hz(ch.bonds[i]);
                    if (commutes(op, t.trapezoid_op(ch.sites[i])) || commutes(op, t.trapezoid_op(ch.sites[(i + 1) % ch.sites.size()]))) rows_ok = false;
                }
            }
        add("row_cycles", rows_ok, rows_ok ? "one ring of cols sites per row and shade" : "row chains malformed");

        PauliString all_light = PauliString::identity(n), all_dark = PauliString::identity(n);
        for (size_t i = 0; i < t.trapezoids.size(); ++i) (t.trapezoids[i].shade == Shade::light ? all_light : all_dark) *= t.trapezoid_op(i);
        StabilizerGroup trivial(n);
        bool prod_ok = trivial.member_with_sign(all_light) == Membership::plus && trivial.member_with_sign(all_dark) == Membership::plus;
        add("trapezoid_products", prod_ok, "product of all light Z and all dark X");
    }
    {
        auto cc = t.cc_terms();
        size_t anti = 0;
        for (size_t a = 0; a < cc.size(); ++a)
            for (size_t b = a + 1; b < cc.size(); ++b)
                if (!commutes(cc[a], cc[b])) ++anti;
        add("cc_commutation", anti == 0, std::to_string(anti) + " anticommuting CC pairs");
    }
    if (t.colored() && t.shaded()) {
        if (t.loops.empty()) {
            add("loops", false, "no loops routed");
        } else {
            auto cc = t.cc_terms();
            auto tc = t.tc_terms();
            StabilizerGroup cc_group(n, cc), tc_group(n, tc);
            size_t bad = 0;
            for (const auto& l : t.loops) {
                auto op = l.op(n);
                bool ok = std::all_of(cc.begin(), cc.end(), [&](const auto& s) { return commutes(op, s); });
                if (l.kind == LoopKind::tc_noncontractible && l.sigma == 1) ok = true;
                if (l.kind == LoopKind::cc_colored) ok = ok && !cc_group.contains_up_to_sign(op);
                if (l.kind == LoopKind::tc_noncontractible)
                    ok = ok && !tc_group.contains_up_to_sign(op) && std::all_of(tc.begin(), tc.end(), [&](const auto& s) { return commutes(op, s); });
                if (!ok) ++bad;
            }
            add("loops", bad == 0, std::to_string(t.loops.size()) + " loops, " + std::to_string(bad) + " failing");
        }
    }
    return rep;
}

/// Builds, colors, shades and routes a torus; throws InadmissibleTorus with
/// the failing check when any step fails.
inline HexTorus make_admissible_torus(size_t rows, size_t cols) {
    HexTorus t = build_hex_torus(rows, cols);
    try {
        t = three_color(std::move(t));
        t = partition_trapezoids(std::move(t));
        t.loops = noncontractible_loops(t);
    } catch (const std::runtime_error& e) {
        throw InadmissibleTorus(e.what());
    }
    auto rep = validate(t);
    if (!rep.admissible()) {
        for (const auto& c : rep.checks)
            if (!c.passed) throw InadmissibleTorus("check " + c.name + " failed: " + c.detail);
    }
    return t;
}

}  // namespace hexcode
