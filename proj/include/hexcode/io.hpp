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

// Serialization: instance files, JSON reports, SHA-256 digests.

#pragma once

#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "json.hpp"

#include "hexcode/chains.hpp"
#include "hexcode/eigensolver.hpp"
#include "hexcode/lattice.hpp"
#include "hexcode/models.hpp"
#include "hexcode/stabilizer.hpp"
#include "hexcode/wilson.hpp"

namespace hexcode {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";

inline std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 || EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx, md, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("SHA-256 digest failed");
    }
    EVP_MD_CTX_free(ctx);
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

// ---------------------------------------------------------------------------
// Instance file.
//
//   hexcode-instance 1
//   size R C
//   hexagon i row col color q0..q5
//   cut i axis first_side_light
//   trapezoid i hexagon shade row position q0..q3
//   chain shade row N s_0..s_{N-1} b_0..b_{N-1}
//   loop kind type sigma color|- height width count q... ; enclosed...
//   end

inline std::string write_instance(const HexTorus& t) {
    std::ostringstream os;
    os << "hexcode-instance 1\n";
    os << "size " << t.rows << ' ' << t.cols << '\n';
    for (size_t i = 0; i < t.hexagons.size(); ++i) {
        const auto& h = t.hexagons[i];
        os << "hexagon " << i << ' ' << h.row << ' ' << h.col << ' ' << (h.color ? to_string(*h.color) : "-");
        for (size_t q : h.qubits) os << ' ' << q;
        os << '\n';
    }
    for (size_t i = 0; i < t.cut_axis.size(); ++i) os << "cut " << i << ' ' << int(t.cut_axis[i]) << ' ' << int(t.first_side_light[i]) << '\n';
    for (size_t i = 0; i < t.trapezoids.size(); ++i) {
        const auto& tr = t.trapezoids[i];
        os << "trapezoid " << i << ' ' << tr.hexagon << ' ' << to_string(tr.shade) << ' ' << tr.row << ' ' << tr.position;
        for (size_t q : tr.qubits) os << ' ' << q;
        os << '\n';
    }
    for (const auto* rows : {&t.light_rows, &t.dark_rows})
        for (const auto& ch : *rows) {
            os << "chain " << to_string(ch.shade) << ' ' << ch.row << ' ' << ch.sites.size();
            for (size_t s : ch.sites) os << ' ' << s;
            for (size_t b : ch.bonds) os << ' ' << b;
            os << '\n';
        }
    for (const auto& l : t.loops) {
        os << "loop " << to_string(l.kind) << ' ' << to_string(l.type) << ' ' << l.sigma << ' ' << (l.color ? to_string(*l.color) : "-") << ' ' << l.height << ' '
           << l.width << ' ' << l.qubits.size();
        for (size_t q : l.qubits) os << ' ' << q;
        os << " ;";
        for (size_t e : l.enclosed) os << ' ' << e;
        os << '\n';
    }
    os << "end\n";
    return os.str();
}

inline std::string instance_hash(const HexTorus& t) { return sha256_hex(write_instance(t)); }

namespace detail {

inline Color parse_color(const std::string& s) {
    for (int c = 0; c < 3; ++c)
        if (s == to_string(static_cast<Color>(c))) return static_cast<Color>(c);
    throw ParseError("unknown color '" + s + "'");
}
inline Shade parse_shade(const std::string& s) {
    if (s == "light") return Shade::light;
    if (s == "dark") return Shade::dark;
    throw ParseError("unknown shade '" + s + "'");
}
inline LoopKind parse_loop_kind(const std::string& s) {
    for (int k = 0; k < 3; ++k)
        if (s == to_string(static_cast<LoopKind>(k))) return static_cast<LoopKind>(k);
    throw ParseError("unknown loop kind '" + s + "'");
}

}  // namespace detail

/// Rebuilds a torus from an instance file. The geometry is regenerated from
/// the size line and must agree with the recorded hexagon corners; coloring,
/// trapezoid split and loop routes are taken from the file. The result is
/// validated.
inline HexTorus read_instance(std::istream& is) {
    std::string line;
    size_t lineno = 0;
    auto next = [&]() -> std::istringstream {
        while (std::getline(is, line)) {
            ++lineno;
            if (!line.empty() && line[0] != '#') return std::istringstream(line);
        }
        throw ParseError("unexpected end of instance file");
    };
    auto fail = [&](const std::string& why) { return ParseError("instance line " + std::to_string(lineno) + ": " + why); };
    {
        auto ls = next();
        std::string magic;
        int version = 0;
        if (!(ls >> magic >> version) || magic != "hexcode-instance") throw fail("missing hexcode-instance header");
        if (version != 1) throw fail("unsupported instance version " + std::to_string(version));
    }
    size_t R = 0, C = 0;
    {
        auto ls = next();
        std::string key;
        if (!(ls >> key >> R >> C) || key != "size") throw fail("expected size line");
    }
    HexTorus t = build_hex_torus(R, C);
    t.cut_axis.assign(t.n_hexagons(), 0);
    t.first_side_light.assign(t.n_hexagons(), 0);
    while (true) {
        auto ls = next();
        std::string key;
        ls >> key;
        if (key == "end") break;
        if (key == "hexagon") {
            size_t i;
            long r, c;
            std::string color;
            if (!(ls >> i >> r >> c >> color) || i >= t.hexagons.size()) throw fail("bad hexagon line");
            auto& h = t.hexagons[i];
            if (h.row != r || h.col != c) throw fail("hexagon coordinates disagree with the geometry");
            for (size_t k = 0; k < 6; ++k) {
                size_t q;
                if (!(ls >> q) || q != h.qubits[k]) throw fail("hexagon corners disagree with the geometry");
            }
            if (color != "-") h.color = detail::parse_color(color);
        } else if (key == "cut") {
            size_t i;
            int axis, first;
            if (!(ls >> i >> axis >> first) || i >= t.n_hexagons() || axis < 0 || axis > 2) throw fail("bad cut line");
            t.cut_axis[i] = static_cast<uint8_t>(axis);
            t.first_side_light[i] = static_cast<uint8_t>(first != 0);
        } else if (key == "trapezoid") {
            Trapezoid tr;
            size_t i;
            std::string shade;
            if (!(ls >> i >> tr.hexagon >> shade >> tr.row >> tr.position) || i != t.trapezoids.size()) throw fail("bad trapezoid line");
            tr.shade = detail::parse_shade(shade);
            for (auto& q : tr.qubits)
                if (!(ls >> q) || q >= t.n_qubits()) throw fail("bad trapezoid qubit");
            t.trapezoids.push_back(tr);
        } else if (key == "chain") {
            RowChain ch;
            std::string shade;
            size_t N;
            if (!(ls >> shade >> ch.row >> N)) throw fail("bad chain line");
            ch.shade = detail::parse_shade(shade);
            ch.sites.resize(N);
            ch.bonds.resize(N);
            for (auto& s : ch.sites)
                if (!(ls >> s)) throw fail("bad chain site");
            for (auto& b : ch.bonds)
                if (!(ls >> b)) throw fail("bad chain bond");
            (ch.shade == Shade::light ? t.light_rows : t.dark_rows).push_back(std::move(ch));
        } else if (key == "loop") {
            LoopSpec l;
            std::string kind, type, color, sep;
            size_t count;
            if (!(ls >> kind >> type >> l.sigma >> color >> l.height >> l.width >> count)) throw fail("bad loop line");
            l.kind = detail::parse_loop_kind(kind);
            if (type == "Z") l.type = PauliKind::z;
            else if (type == "X") l.type = PauliKind::x;
            else throw fail("bad loop type");
            if (color != "-") l.color = detail::parse_color(color);
            l.qubits.resize(count);
            for (auto& q : l.qubits)
                if (!(ls >> q) || q >= t.n_qubits()) throw fail("bad loop qubit");
            if (!(ls >> sep) || sep != ";") throw fail("missing ';' in loop line");
            size_t e;
            while (ls >> e) l.enclosed.push_back(e);
            t.loops.push_back(std::move(l));
        } else {
            throw fail("unknown record '" + key + "'");
        }
    }
    // Edge colors follow from the hexagon colors at the edge ends.
    for (auto& e : t.edges)
        if (auto c = t.hexagons[e.ends[0]].color) e.color = c;
    auto rep = validate(t);
    for (const auto& c : rep.checks)
        if (!c.passed) throw InadmissibleTorus("instance check " + c.name + " failed: " + c.detail);
    return t;
}

// ---------------------------------------------------------------------------
// JSON.

inline json to_json(const ValidationReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return {{"rows", r.rows}, {"cols", r.cols}, {"admissible", r.admissible()}, {"checks", checks}};
}

inline json to_json(const SpectrumReport& r) {
    json clusters = json::array();
    for (auto [a, b] : r.clusters) clusters.push_back({a, b});
    return {{"eigenvalues", r.eigenvalues},
            {"clusters", clusters},
            {"multiplicities", r.multiplicities()},
            {"residuals", r.residuals},
            {"meta",
             {{"method", r.meta.method},
              {"iterations", r.meta.iterations},
              {"restarts", r.meta.restarts},
              {"matvecs", r.meta.matvecs},
              {"block", r.meta.block},
              {"max_basis", r.meta.max_basis},
              {"seed", r.meta.seed}}}};
}

inline json to_json(const SectorAnalysis& a) {
    json rules = json::array();
    for (const auto& r : a.rules) {
        json vars = json::array();
        for (size_t v : r.vars) vars.push_back(a.labels[v]);
        rules.push_back({{"vars", vars}, {"parity", r.parity}, {"intrinsic", r.intrinsic}});
    }
    return {{"n_qubits", a.n_qubits},
            {"labels", a.labels},
            {"rank_m", a.rank_m},
            {"intrinsic_rules", a.intrinsic_rules},
            {"state_rules", a.state_rules},
            {"log2_valid_sectors", a.log2_valid_sectors()},
            {"log2_sector_dim", a.log2_sector_dim()},
            {"log2_overlap", a.log2_overlap()},
            {"rules", rules}};
}

inline json to_json(const ChainEnsemble& e) {
    json chains = json::array();
    for (const auto& c : e.chains) {
        json j = {{"length", c.length}, {"g_c", c.g_c}, {"g_t", c.g_t}};
        if (c.row) j["row"] = *c.row;
        if (c.shade) j["shade"] = to_string(*c.shade);
        chains.push_back(j);
    }
    json rules = json::array();
    for (const auto& r : e.rules) {
        json vars = json::array();
        for (size_t v : r.vars) vars.push_back(e.variables[v]);
        rules.push_back({{"vars", vars}, {"intrinsic", r.intrinsic}});
    }
    json classes = json::array();
    for (const auto& c : e.classes) classes.push_back({{"twists", c.twists}, {"rhs", c.rhs}, {"seed", c.seed}});
    return {{"kind", e.kind},
            {"chains", chains},
            {"variables", e.variables},
            {"rules", rules},
            {"classes", classes},
            {"sectors", e.sectors.size()},
            {"total_dimension", e.total_dimension()},
            {"source_qubits", e.source_qubits},
            {"audit", e.audit()}};
}

inline json to_json(const VerificationReport& r) {
    return {{"rows", r.rows},
            {"cols", r.cols},
            {"g_t", r.g_t},
            {"g_c", r.g_c},
            {"k", r.k},
            {"tol", r.tol},
            {"ed", r.ed},
            {"predicted", r.predicted},
            {"naive_predicted", r.naive_predicted},
            {"ed_multiplicities", r.ed_multiplicities},
            {"predicted_multiplicities", r.predicted_multiplicities},
            {"max_abs_diff", r.max_abs_diff},
            {"naive_max_abs_diff", r.naive_max_abs_diff},
            {"multiplicity_ok", r.multiplicity_ok},
            {"multiplicity_div4", r.multiplicity_div4},
            {"match", r.match},
            {"rules", to_json(r.ensemble)["rules"]},
            {"ensemble", to_json(r.ensemble)},
            {"solver", to_json(r.spectrum)["meta"]}};
}

inline json to_json(const HomologyReport& h) {
    return {{"a_rb_z_in_tc", to_string(h.a_rb_z_in_tc)},
            {"b_rb_z_in_cc", to_string(h.b_rb_z_in_cc)},
            {"c_rb_x_in_tc", to_string(h.c_rb_x_in_tc)},
            {"d_rgb_z_in_cc", {to_string(h.d_rgb_z_in_cc[0]), to_string(h.d_rgb_z_in_cc[1])}},
            {"d_rgb_x_in_cc", {to_string(h.d_rgb_x_in_cc[0]), to_string(h.d_rgb_x_in_cc[1])}},
            {"expected", h.expected()}};
}

inline json to_json(const LoopSpec& l) {
    json j = {{"name", l.name()}, {"kind", to_string(l.kind)}, {"type", to_string(l.type)}, {"qubits", l.qubits}, {"weight", l.qubits.size()}};
    if (l.kind == LoopKind::wilson_rectangle) {
        j["height"] = l.height;
        j["width"] = l.width;
        j["enclosed"] = l.enclosed;
    } else {
        j["sigma"] = l.sigma;
        if (l.color) j["color"] = to_string(*l.color);
    }
    return j;
}

inline json to_json(const TrialStateValue& v) {
    return {{"num_coeffs", v.even_part(v.numerator)},
            {"den_coeffs", v.even_part(v.denominator)},
            {"odd_coeffs_zero", v.numerator[1] == 0 && v.denominator[1] == 0},
            {"pairs_norm", v.pairs_norm},
            {"pairs_edges", v.pairs_edges},
            {"pairs_wilson", v.pairs_wilson},
            {"P", v.P},
            {"L", v.L},
            {"closed_form", {{"num_coeffs", v.even_part(v.closed_form_numerator())}, {"den_coeffs", v.even_part(v.closed_form_denominator())}}},
            {"matches_closed_form", v.matches_closed_form()},
            {"hz_drop_out", v.hz_drop_out}};
}

inline json to_json(const GapCurve& g) {
    return {{"ratios", g.ratios}, {"gaps", g.gaps}, {"argmin", g.argmin}, {"argmin_ratio", g.argmin_ratio()}};
}

}  // namespace hexcode
