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

// Batch front-end. Every output is one JSON document (or CSV with --format
// csv) carrying the effective configuration, the instance hash and the tool
// version. Exit codes: 0 ok, 1 computational failure or inadmissible input,
// 2 usage.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "hexcode/hexcode.hpp"

namespace fs = std::filesystem;
using namespace hexcode;

namespace {

struct RunConfig {
    size_t rows = 3, cols = 3;
    double g_t = 1, g_c = 0;
    size_t k = 20;
    double tol = 1e-10, cluster_tol = 1e-8, energy_tol = 1e-8;
    uint64_t seed = 20260101;
    unsigned workers = 1;
    std::string cache_dir, format = "json", output, instance, save_instance;
    // gap-scan
    size_t chain_n = 0;
    double lo = 0.5, hi = 1.5, step = 0.01;
    bool ed = false;
    bool no_cache = false;

    json echo(const std::string& command) const {
        json j = {{"command", command}, {"rows", rows},         {"cols", cols},           {"g_t", g_t},       {"g_c", g_c},   {"k", k},
                  {"tol", tol},         {"cluster_tol", cluster_tol}, {"energy_tol", energy_tol}, {"seed", seed}, {"format", format}};
        if (command == "gap-scan") {
            j["chain_n"] = chain_n;
            j["lo"] = lo;
            j["hi"] = hi;
            j["step"] = step;
        }
        if (command == "gap-scan" || command == "wilson") j["ed"] = ed;
        if (!instance.empty()) j["instance"] = instance;
        return j;
    }
    SolverOptions solver() const {
        SolverOptions o;
        o.tol = tol;
        o.cluster_tol = cluster_tol;
        o.seed = seed;
        o.workers = workers;
        return o;
    }
};

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

HexTorus load_torus(const RunConfig& c) {
    if (!c.instance.empty()) {
        std::ifstream is(c.instance);
        if (!is) throw Failure("cannot open instance file " + c.instance);
        return read_instance(is);
    }
    return make_admissible_torus(c.rows, c.cols);
}

/// Result JSON, cached under SHA-256 of the canonical request when a cache
/// directory is configured.
json cached(const RunConfig& c, const json& request, const std::function<json()>& compute) {
    std::string dir = c.cache_dir;
    if (dir.empty())
        if (const char* env = std::getenv("HEXCODE_CACHE_DIR")) dir = env;
    if (dir.empty() || c.no_cache) return compute();
    std::string key = sha256_hex(request.dump());
    fs::path file = fs::path(dir) / (key + ".json");
    if (fs::exists(file)) {
        std::ifstream is(file);
        try {
            json j = json::parse(is);
            std::cerr << "cache hit " << key << "\n";
            return j;
        } catch (const json::exception&) {
            std::cerr << "ignoring unreadable cache entry " << key << "\n";
        }
    }
    json result = compute();
    fs::create_directories(dir);
    fs::path tmp = file;
    tmp += ".tmp";
    {
        std::ofstream os(tmp);
        os << result.dump();
    }
    fs::rename(tmp, file);
    return result;
}

json envelope(const RunConfig& c, const std::string& command, const std::string& hash, json result) {
    return {{"tool", "hexcode"}, {"version", kToolVersion}, {"config", c.echo(command)}, {"instance_hash", hash}, {"result", std::move(result)}};
}

json request_key(const RunConfig& c, const std::string& command, const std::string& hash) {
    json r = c.echo(command);
    r.erase("format");
    r["instance_hash"] = hash;
    r["version"] = kToolVersion;
    return r;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit(const RunConfig& c, const std::string& text) {
    if (c.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(c.output);
    if (!os) throw Failure("cannot write " + c.output);
    os << text;
}

// ---------------------------------------------------------------------------

int cmd_validate(const RunConfig& c) {
    ValidationReport rep;
    rep.rows = c.rows;
    rep.cols = c.cols;
    std::string hash;
    try {
        HexTorus t = load_torus(c);
        rep = validate(t);
        hash = instance_hash(t);
        if (!c.save_instance.empty() && rep.admissible()) {
            std::ofstream os(c.save_instance);
            if (!(os << write_instance(t))) throw Failure("cannot write instance file " + c.save_instance);
        }
    } catch (const InadmissibleTorus& e) {
        rep.checks.push_back({"admissibility", false, e.what()});
    } catch (const std::invalid_argument& e) {
        rep.checks.push_back({"dimensions", false, e.what()});
    }
    json out = envelope(c, "validate", hash, to_json(rep));
    if (c.format == "csv") {
        std::ostringstream os;
        os << "check,passed,detail\n";
        for (const auto& ch : rep.checks) os << ch.name << ',' << (ch.passed ? 1 : 0) << ",\"" << ch.detail << "\"\n";
        emit(c, os.str());
    } else {
        emit(c, out.dump(2) + "\n");
    }
    return rep.admissible() ? 0 : 1;
}

int cmd_spectrum(const RunConfig& c) {
    HexTorus t = load_torus(c);
    std::string hash = instance_hash(t);
    json res = cached(c, request_key(c, "spectrum", hash), [&] { return to_json(lowest_eigs(interpolate(t, c.g_t, c.g_c), c.k, c.solver())); });
    if (c.format == "csv") {
        std::ostringstream os;
        os << "index,eigenvalue,residual,cluster\n";
        const auto& ev = res["eigenvalues"];
        std::vector<size_t> cl(ev.size());
        for (size_t i = 0; i < res["clusters"].size(); ++i)
            for (size_t j = res["clusters"][i][0]; j <= res["clusters"][i][1].get<size_t>(); ++j) cl[j] = i;
        for (size_t i = 0; i < ev.size(); ++i) os << i << ',' << fmt(ev[i]) << ',' << fmt(res["residuals"][i]) << ',' << cl[i] << '\n';
        emit(c, os.str());
    } else {
        emit(c, envelope(c, "spectrum", hash, res).dump(2) + "\n");
    }
    return 0;
}

int cmd_map_verify(const RunConfig& c) {
    HexTorus t = load_torus(c);
    std::string hash = instance_hash(t);
    json res = cached(c, request_key(c, "map-verify", hash), [&] { return to_json(map_verify(t, c.g_t, c.g_c, c.k, c.energy_tol, c.solver())); });
    if (c.format == "csv") {
        std::ostringstream os;
        os << "index,ed,predicted,naive_predicted\n";
        for (size_t i = 0; i < res["ed"].size(); ++i) os << i << ',' << fmt(res["ed"][i]) << ',' << fmt(res["predicted"][i]) << ',' << fmt(res["naive_predicted"][i]) << '\n';
        emit(c, os.str());
    } else {
        emit(c, envelope(c, "map-verify", hash, res).dump(2) + "\n");
    }
    return 0;
}

int cmd_gap_scan(const RunConfig& c, bool have_dims) {
    auto ratios = ratio_grid(c.lo, c.hi, c.step);
    std::string hash;
    std::optional<HexTorus> t;
    if (have_dims || c.ed) {
        t = load_torus(c);
        hash = instance_hash(*t);
    }
    if (c.chain_n == 0 && !t) throw CLI::ValidationError("gap-scan needs --chain-n or lattice dimensions");
    json res = cached(c, request_key(c, "gap-scan", hash), [&] {
        json r = {{"ratios", ratios}};
        if (c.chain_n) {
            auto g = chain_gap_curve(c.chain_n, ratios);
            r["chain"] = to_json(g);
        }
        if (t) {
            auto g = ensemble_gap_curve(*t, ratios, c.cluster_tol);
            r["ensemble"] = to_json(g);
        }
        if (c.ed) {
            std::vector<double> gaps(ratios.size());
            std::vector<std::exception_ptr> errors(ratios.size());
            unsigned w = std::max(1u, c.workers);
            auto work = [&](size_t lo) {
                SolverOptions o = c.solver();
                o.workers = 1;
                for (size_t i = lo; i < ratios.size(); i += w) {
                    try {
                        gaps[i] = spectral_gap(interpolate(*t, ratios[i], 1.0), o).gap;
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            };
            std::vector<std::thread> pool;
            for (unsigned i = 0; i < w; ++i) pool.emplace_back(work, i);
            for (auto& th : pool) th.join();
            for (auto& e : errors)
                if (e) std::rethrow_exception(e);
            GapCurve g{ratios, gaps, argmin_of(gaps)};
            r["ed"] = to_json(g);
        }
        return r;
    });
    if (c.format == "csv") {
        std::ostringstream os;
        os << "ratio,ed_gap,chain_gap,argmin";
        if (res.contains("ensemble")) os << ",ensemble_gap";
        os << '\n';
        // The argmin marker follows the chain curve when present.
        std::string marker = res.contains("chain") ? "chain" : res.contains("ed") ? "ed" : "ensemble";
        size_t am = res[marker]["argmin"];
        for (size_t i = 0; i < ratios.size(); ++i) {
            os << fmt(ratios[i]) << ',' << (res.contains("ed") ? fmt(res["ed"]["gaps"][i]) : "") << ',' << (res.contains("chain") ? fmt(res["chain"]["gaps"][i]) : "") << ','
               << (i == am ? 1 : 0);
            if (res.contains("ensemble")) os << ',' << fmt(res["ensemble"]["gaps"][i]);
            os << '\n';
        }
        emit(c, os.str());
    } else {
        emit(c, envelope(c, "gap-scan", hash, res).dump(2) + "\n");
    }
    return 0;
}

int cmd_wilson(const RunConfig& c) {
    HexTorus t = load_torus(c);
    std::string hash = instance_hash(t);
    json res = cached(c, request_key(c, "wilson", hash), [&] {
        auto loops = all_wilson_rectangles(t);
        auto cc_seed = cc_seed_group(t);
        json arr = json::array();
        std::optional<WilsonCurve> curve;
        if (c.ed) curve = ed_wilson_curve(t, loops, wilson_gamma_grid(), c.solver());
        for (size_t i = 0; i < loops.size(); ++i) {
            const auto& l = loops[i];
            auto es = edge_set(t, l);
            json j = {{"loop", to_json(l)},
                      {"height", l.height},
                      {"width", l.width},
                      {"area", l.enclosed.size()},
                      {"perimeter", 2 * (l.height + l.width)},
                      {"L", es.L},
                      {"edge_hexagons", es.hexagons},
                      {"trial_state", to_json(trial_state_value(t, l))},
                      {"perturbative_c2", perturbative_wilson_coefficient(t, l)},
                      {"cc_phase_expectation", cc_seed.expectation(l.op(t.n_qubits()))}};
            if (curve) {
                j["ed_values"] = curve->values[i];
                j["fitted_c"] = curve->fitted[i];
                j["fitted_c_over_L"] = curve->fitted[i] / static_cast<double>(es.L);
            }
            arr.push_back(j);
        }
        json r = {{"loops", arr}};
        if (curve) {
            r["gammas"] = curve->gammas;
            r["block"] = curve->block;
            r["block_spread"] = curve->block_spread;
            r["fit_window"] = {curve->gammas.front(), curve->gammas.back()};
        }
        return r;
    });
    if (c.format == "csv") {
        std::ostringstream os;
        os << "loop,height,width,area,L,trial_num_g2,trial_den_g2,perturbative_c2,fitted_c\n";
        for (const auto& j : res["loops"])
            os << j["loop"]["name"].get<std::string>() << ',' << j["height"] << ',' << j["width"] << ',' << j["area"] << ',' << j["L"] << ','
               << j["trial_state"]["num_coeffs"][1] << ',' << j["trial_state"]["den_coeffs"][1] << ',' << fmt(j["perturbative_c2"]) << ','
               << (j.contains("fitted_c") ? fmt(j["fitted_c"]) : "") << '\n';
        emit(c, os.str());
    } else {
        emit(c, envelope(c, "wilson", hash, res).dump(2) + "\n");
    }
    return 0;
}

int cmd_sectors(const RunConfig& c) {
    HexTorus t = load_torus(c);
    std::string hash = instance_hash(t);
    auto analysis = derive_sector_constraints(cc_seed_group(t), chain_basis_operators(t));
    auto ens = derive_ensemble(t, c.g_t, c.g_c);
    auto naive = naive_ensemble(t, c.g_t, c.g_c);
    json res = {{"analysis", to_json(analysis)}, {"ensemble", to_json(ens)}, {"naive_ensemble", to_json(naive)}};
    if (c.format == "csv") {
        std::ostringstream os;
        os << "rule,intrinsic,vars\n";
        for (size_t i = 0; i < ens.rules.size(); ++i) {
            os << i << ',' << (ens.rules[i].intrinsic ? 1 : 0) << ',';
            for (size_t v = 0; v < ens.rules[i].vars.size(); ++v) os << (v ? " " : "") << ens.variables[ens.rules[i].vars[v]];
            os << '\n';
        }
        emit(c, os.str());
    } else {
        emit(c, envelope(c, "sectors", hash, res).dump(2) + "\n");
    }
    return 0;
}

int cmd_logicals(const RunConfig& c) {
    HexTorus t = load_torus(c);
    std::string hash = instance_hash(t);
    json loops = json::array();
    for (const auto& l : t.loops) loops.push_back(to_json(l));
    json rows = json::array();
    for (Shade s : {Shade::light, Shade::dark})
        for (size_t r = 0; r < t.rows; ++r) {
            auto rep = row_operator_check(t, r, s);
            json j = {{"shade", to_string(s)}, {"row", r}, {"op", rep.op.str()}, {"squares_to_identity", rep.squares_to_identity}, {"commutes_with_cc", rep.commutes_with_cc}};
            if (rep.pair) {
                j["pair"] = {to_string(rep.pair->first), to_string(rep.pair->second)};
                j["sign"] = to_string(rep.sign);
            }
            rows.push_back(j);
        }
    json res = {{"loops", loops}, {"homology", to_json(homology_check(t))}, {"row_operators", rows}};
    if (c.format == "csv") {
        std::ostringstream os;
        os << "name,weight\n";
        for (const auto& l : t.loops) os << l.name() << ',' << l.qubits.size() << '\n';
        emit(c, os.str());
    } else {
        emit(c, envelope(c, "logicals", hash, res).dump(2) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig c;
    CLI::App app{"hexcode: color-code / toric-code torus toolkit"};
    app.set_config("--config", "", "key=value configuration file");
    app.require_subcommand(1, 1);
    app.fallthrough();
    auto* rows = app.add_option("--rows", c.rows, "hexagon rows");
    auto* cols = app.add_option("--cols", c.cols, "hexagon columns");
    app.add_option("--instance", c.instance, "instance file to load instead of building");
    app.add_option("--save-instance", c.save_instance, "validate: write the admissible instance to this file");
    app.add_option("--gt", c.g_t, "toric-code coupling g_t")->check(CLI::NonNegativeNumber);
    app.add_option("--gc", c.g_c, "color-code coupling g_c")->check(CLI::NonNegativeNumber);
    app.add_option("--k", c.k, "number of levels")->check(CLI::PositiveNumber);
    app.add_option("--tol", c.tol, "eigenvector residual tolerance")->check(CLI::PositiveNumber);
    app.add_option("--cluster-tol", c.cluster_tol, "relative cluster tolerance")->check(CLI::PositiveNumber);
    app.add_option("--energy-tol", c.energy_tol, "map-verify energy tolerance")->check(CLI::PositiveNumber);
    app.add_option("--seed", c.seed, "start-vector seed");
    app.add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--cache-dir", c.cache_dir, "result cache directory (default $HEXCODE_CACHE_DIR)");
    app.add_flag("--no-cache", c.no_cache, "bypass the cache");
    app.add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--output,-o", c.output, "output file (default stdout)");
    app.add_option("--chain-n", c.chain_n, "chain length for gap-scan");
    app.add_option("--lo", c.lo, "lowest ratio g_t/g_c");
    app.add_option("--hi", c.hi, "highest ratio g_t/g_c");
    app.add_option("--step", c.step, "ratio step")->check(CLI::PositiveNumber);
    app.add_flag("--ed", c.ed, "include exact diagonalization curves");

    auto* validate_cmd = app.add_subcommand("validate", "build and validate a torus; exit 0 iff admissible");
    auto* spectrum_cmd = app.add_subcommand("spectrum", "lowest levels of the interpolated Hamiltonian");
    auto* map_cmd = app.add_subcommand("map-verify", "compare ED with the chain-ensemble prediction");
    auto* gap_cmd = app.add_subcommand("gap-scan", "gap curves on a ratio grid");
    auto* wilson_cmd = app.add_subcommand("wilson", "Wilson rectangles: trial state, perturbation theory, ED");
    auto* sectors_cmd = app.add_subcommand("sectors", "sector rules of the chain basis");
    auto* logicals_cmd = app.add_subcommand("logicals", "loop operators and homology report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        if (validate_cmd->parsed()) return cmd_validate(c);
        if (spectrum_cmd->parsed()) return cmd_spectrum(c);
        if (map_cmd->parsed()) return cmd_map_verify(c);
        if (gap_cmd->parsed()) return cmd_gap_scan(c, rows->count() > 0 || cols->count() > 0 || !c.instance.empty());
        if (wilson_cmd->parsed()) return cmd_wilson(c);
        if (sectors_cmd->parsed()) return cmd_sectors(c);
        if (logicals_cmd->parsed()) return cmd_logicals(c);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        json err = {{"error", "failure"}, {"message", e.what()}};
        std::cout << err.dump() << "\n";
        return 1;
    }
    return 2;
}
