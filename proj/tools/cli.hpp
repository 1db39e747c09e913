// Copyright 2026 The cmispread Authors
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

// Command-line driver. Lives in a header so tests can call run_cli in-process.

#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cmispread/analytics.hpp"
#include "cmispread/bell.hpp"
#include "cmispread/circuits.hpp"
#include "cmispread/clipped.hpp"
#include "cmispread/dense.hpp"
#include "cmispread/format.hpp"
#include "cmispread/oracle.hpp"
#include "cmispread/parallel.hpp"
#include "cmispread/version.hpp"

namespace cmispread::cli {

using nlohmann::json;

enum ExitCode { kOk = 0, kConfigError = 1, kInvariantViolation = 2 };

/// Error reading inputs or writing outputs; reported with exit code 1.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline std::string utc_now() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// "field.csv" -> "field.manifest.json".
inline std::string manifest_path_for(const std::string &out) {
    auto slash = out.find_last_of('/');
    auto dot = out.find_last_of('.');
    std::string stem = (dot != std::string::npos && (slash == std::string::npos || dot > slash)) ? out.substr(0, dot) : out;
    return stem + ".manifest.json";
}

inline std::ofstream open_output(const std::string &path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open " + path + " for writing");
    return f;
}

/// Tracks one run's inputs and outputs and writes the manifest at the end.
struct Manifest {
    std::string subcommand;
    json config = json::object();
    std::uint64_t seed = 0;
    std::string start = utc_now();
    std::chrono::steady_clock::time_point clock = std::chrono::steady_clock::now();
    std::vector<std::string> outputs;

    void write(const std::string &path) const {
        json j;
        j["subcommand"] = subcommand;
        j["config"] = config;
        j["seed"] = seed;
        j["version"] = std::string("v") + kVersion;
        j["start"] = start;
        j["end"] = utc_now();
        j["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock).count();
        j["outputs"] = outputs;
        auto f = open_output(path);
        f << j.dump(2) << "\n";
    }
};

/// Writes `body` to `path`, or to `out` when path is empty.
inline void emit(const std::string &path, const std::string &body, std::ostream &out, Manifest &manifest) {
    if (path.empty()) {
        out << body;
        return;
    }
    auto f = open_output(path);
    f << body;
    manifest.outputs.push_back(path);
}

inline void finish(const std::string &primary, const Manifest &manifest) {
    if (!primary.empty()) manifest.write(manifest_path_for(primary));
}

/// Reads a flat key=value file. Blank lines and lines starting with '#' are
/// skipped; '_' in keys is read as '-'.
inline std::vector<std::pair<std::string, std::string>> read_config_file(const std::string &path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file " + path);
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(f, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = trim(line.substr(0, eq));
        for (auto &ch : key) {
            if (ch == '_') ch = '-';
        }
        entries.emplace_back(key, trim(line.substr(eq + 1)));
    }
    return entries;
}

inline constexpr std::string_view kSubcommands[] = {"spread", "fourblock", "ansatz", "collapse",
                                                    "bell",   "toy",       "oracle-check"};

/// Removes --config FILE from args and splices the file's entries in right
/// after the subcommand, skipping keys already given on the command line.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw ConfigError("--config needs a file name");
            config_path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (config_path.empty()) return args;
    std::size_t sub = 0;
    while (sub < args.size() && std::find(std::begin(kSubcommands), std::end(kSubcommands), args[sub]) == std::end(kSubcommands)) {
        ++sub;
    }
    if (sub == args.size()) throw ConfigError("--config needs a subcommand");
    std::vector<std::string> extra;
    for (const auto &[key, value] : read_config_file(config_path)) {
        const std::string flag = "--" + key;
        bool given = false;
        for (const auto &a : args) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
        }
        if (!given) extra.push_back(flag + "=" + value);
    }
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub + 1), extra.begin(), extra.end());
    return args;
}

struct SpreadOptions {
    CircuitConfig cfg;
    std::string out;
    std::string dump_errors;
    std::string dump_tableau;
};

struct FourBlockOptions {
    std::size_t m = 64;
    double p = 0.25;
    std::size_t seeds = 20;
    std::uint64_t seed = 1;
    std::string out;
};

struct AnsatzOptions {
    std::size_t n = 128;
    std::size_t k = 128;
    std::size_t samples = 1000;
    std::uint64_t seed = 1;
    std::string out;
};

struct CollapseOptions {
    std::vector<double> p_list = {1.0 / 64, 3.0 / 128};
    std::size_t n_blocks = 256;
    std::size_t m = 4;
    std::size_t t_max = 0;
    std::size_t realizations = 100;
    std::uint64_t seed = 1;
    std::vector<std::size_t> x_list;
    std::string out_prefix;
};

struct BellOptions {
    std::size_t n_blocks = 32;
    std::size_t m = 4;
    double p = 1.0 / 32;
    std::size_t t = 0;
    std::size_t x = 1;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::string out;
};

struct ToyOptions {
    std::vector<double> p_grid = default_toy_grid();
    std::size_t seeds = 64;
    std::uint64_t seed = 2024;
    std::string out;
};

struct OracleOptions {
    std::size_t circuits = 200;
    std::size_t max_qubits = 6;
    double p = 0.05;
    std::uint64_t seed = 1;
    std::string out;
};

/// floor(1/(2p)), the timestep at which the analytic state is fully mixed.
inline std::size_t critical_step(double p) {
    if (!(p > 0)) throw std::invalid_argument("p must be positive");
    return static_cast<std::size_t>(std::floor(1.0 / (2.0 * p)));
}

inline json circuit_json(const CircuitConfig &cfg) {
    return {{"n_blocks", cfg.n_blocks}, {"m", cfg.m},
            {"p", cfg.p},               {"t_max", cfg.t_max},
            {"x_values", cfg.x_values}, {"realizations", cfg.realizations},
            {"seed", cfg.seed},         {"stop_when_mixed", cfg.stop_when_mixed},
            {"spot_checks", cfg.spot_checks}};
}

inline void run_spread(SpreadOptions o, std::size_t threads, std::ostream &out) {
    if (o.cfg.x_values.empty()) o.cfg.x_values = CircuitConfig::full_x_grid(o.cfg.n_blocks);
    o.cfg.validate();
    Manifest manifest{"spread", circuit_json(o.cfg), o.cfg.seed};
    auto runs = run_ensemble(o.cfg, threads);
    std::ostringstream csv;
    write_spreading_csv(csv, average(o.cfg, runs));
    emit(o.out, csv.str(), out, manifest);
    if (!o.dump_errors.empty()) {
        for (std::size_t i = 0; i < runs.size(); ++i) {
            std::string path = o.dump_errors + std::to_string(i) + ".rle";
            auto f = open_output(path);
            f << runs[i].errors.to_rle();
            manifest.outputs.push_back(path);
        }
    }
    if (!o.dump_tableau.empty()) {
        auto f = open_output(o.dump_tableau);
        f << evolve_state(o.cfg, 0, o.cfg.t_max).to_text();
        manifest.outputs.push_back(o.dump_tableau);
    }
    finish(o.out, manifest);
}

inline void run_fourblock(const FourBlockOptions &o, std::size_t threads, std::ostream &out) {
    Manifest manifest{"fourblock", {{"m", o.m}, {"p", o.p}, {"seeds", o.seeds}, {"seed", o.seed}}, o.seed};
    auto records = four_block_ensemble(o.m, o.p, o.seeds, o.seed, threads);
    std::ostringstream csv;
    csv << "seed_index,i_ab,i_bc,i_a_bc,cmi\n";
    double sums[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto &r = records[i];
        csv << i << "," << r.i_ab << "," << r.i_bc << "," << r.i_a_bc << "," << r.cmi << "\n";
        sums[0] += static_cast<double>(r.i_ab);
        sums[1] += static_cast<double>(r.i_bc);
        sums[2] += static_cast<double>(r.i_a_bc);
        sums[3] += static_cast<double>(r.cmi);
    }
    emit(o.out, csv.str(), out, manifest);
    if (!o.out.empty() && !records.empty()) {
        const double scale = static_cast<double>(records.size() * o.m);
        out << "mean/m: I(A:B)=" << format_double(sums[0] / scale) << " I(B:C)=" << format_double(sums[1] / scale)
            << " I(A:BC)=" << format_double(sums[2] / scale) << " I(A:C|B)=" << format_double(sums[3] / scale) << "\n";
    }
    finish(o.out, manifest);
}

inline void run_ansatz(const AnsatzOptions &o, std::size_t threads, std::ostream &out) {
    Manifest manifest{"ansatz", {{"n", o.n}, {"k", o.k}, {"samples", o.samples}, {"seed", o.seed}}, o.seed};
    auto stats = length_deviation_stats(o.samples, o.n, o.k, o.seed, threads);
    std::ostringstream csv;
    write_length_stats_csv(csv, stats, o.seed);
    emit(o.out, csv.str(), out, manifest);
    if (!o.out.empty()) {
        out << "mean |delta|=" << format_double(stats.mean_abs_delta())
            << " P(|delta|>10)=" << format_double(stats.tail_fraction(10)) << "\n";
    }
    finish(o.out, manifest);
}

inline void run_collapse(const CollapseOptions &o, std::size_t threads, std::ostream &out) {
    if (o.p_list.empty()) throw std::invalid_argument("--p-list is empty");
    json config = {{"p_list", o.p_list},         {"n_blocks", o.n_blocks}, {"m", o.m},
                   {"t_max", o.t_max},           {"realizations", o.realizations},
                   {"seed", o.seed},             {"x_list", o.x_list}};
    Manifest manifest{"collapse", config, o.seed};
    const FitWindow window;
    std::ostringstream merged;
    merged << "p,m,t,t_tilde,x_dec_tilde,x_dec_tilde_stderr,analytic_x_dec_tilde\n";
    for (double p : o.p_list) {
        detail::require_rate(p);
        CircuitConfig cfg;
        cfg.n_blocks = o.n_blocks;
        cfg.m = o.m;
        cfg.p = p;
        cfg.t_max = o.t_max ? o.t_max : critical_step(p) + 8;
        cfg.x_values = o.x_list.empty() ? CircuitConfig::full_x_grid(o.n_blocks) : o.x_list;
        cfg.realizations = o.realizations;
        cfg.seed = o.seed;
        cfg.stop_when_mixed = true;
        cfg.validate();
        auto runs = run_ensemble(cfg, threads);
        auto points = collapse_curve(average(cfg, runs), window);
        parallel_for(points.size(), threads, [&](std::size_t i) {
            if (points[i].fit.accepted()) {
                points[i].x_dec_jackknife_stderr = jackknife_xdec_stderr(cfg, runs, points[i].t, window);
            }
        });
        std::ostringstream csv;
        write_collapse_csv(csv, points, window);
        std::string path = o.out_prefix.empty() ? std::string() : o.out_prefix + "p" + format_double(p) + ".csv";
        emit(path, csv.str(), out, manifest);
        for (const auto &pt : points) {
            if (!pt.fit.accepted()) continue;
            merged << format_double(pt.p) << "," << pt.m << "," << pt.t << "," << format_double(pt.t_tilde) << ","
                   << format_double(pt.x_dec_tilde()) << "," << format_double(2 * pt.p * pt.x_dec_jackknife_stderr)
                   << ",";
            if (pt.t_tilde < 1) merged << format_double(analytic_xdec_rescaled(pt.t_tilde));
            merged << "\n";
        }
    }
    std::string merged_path = o.out_prefix.empty() ? std::string() : o.out_prefix + "merged.csv";
    emit(merged_path, merged.str(), out, manifest);
    finish(merged_path, manifest);
}

inline void run_bell(const BellOptions &o, std::size_t threads, std::ostream &out) {
    CircuitConfig cfg;
    cfg.n_blocks = o.n_blocks;
    cfg.m = o.m;
    cfg.p = o.p;
    cfg.seed = o.seed;
    const std::size_t t = o.t ? o.t : critical_step(o.p) - 1;
    cfg.t_max = t;
    cfg.validate();
    if (t == 0) throw std::invalid_argument("t must be at least 1");
    Manifest manifest{"bell", {{"circuit", circuit_json(cfg)}, {"t", t}, {"x", o.x}, {"trials", o.trials}}, o.seed};
    std::vector<BellTrial> trials(o.trials);
    parallel_for(o.trials, threads, [&](std::size_t i) { trials[i] = run_bell_trial(cfg, t, o.x, i); });

    std::ostringstream lines;
    std::size_t mi_ok = 0, witness_ok = 0, bound_ok = 0, k4 = 0, k4_nonempty = 0, total_bell = 0;
    for (const auto &tr : trials) {
        const auto &c = tr.certificate;
        json j = {{"trial", tr.index},
                  {"seed", o.seed},
                  {"rows", tr.rows},
                  {"n_bell", c.n_bell},
                  {"cmi_pre", c.cmi_pre},
                  {"mi_ac_post", c.mi_ac_post},
                  {"clauses", {{"mutual_information", c.mutual_information_ok}, {"witness", c.witness_ok}, {"bound", c.bound_ok}}}};
        lines << j.dump() << "\n";
        mi_ok += c.mutual_information_ok;
        witness_ok += c.witness_ok;
        bound_ok += c.bound_ok;
        total_bell += c.n_bell;
        if (tr.rows >= 4) {
            ++k4;
            k4_nonempty += c.n_bell > 0;
        }
    }
    auto rate = [](std::size_t a, std::size_t b) { return b ? static_cast<double>(a) / static_cast<double>(b) : 0.0; };
    json agg = {{"trials", o.trials},
                {"mutual_information_rate", rate(mi_ok, o.trials)},
                {"witness_rate", rate(witness_ok, o.trials)},
                {"bound_rate", rate(bound_ok, o.trials)},
                {"trials_with_k_ge_4", k4},
                {"nonempty_rate_k_ge_4", rate(k4_nonempty, k4)},
                {"mean_n_bell", rate(total_bell, o.trials)}};
    lines << json{{"aggregate", agg}}.dump() << "\n";
    emit(o.out, lines.str(), out, manifest);
    finish(o.out, manifest);
}

inline void run_toy(const ToyOptions &o, std::ostream &out) {
    Manifest manifest{"toy", {{"p_grid", o.p_grid}, {"seeds", o.seeds}, {"seed", o.seed}}, o.seed};
    std::ostringstream csv;
    csv << "p,channel,seed_count,mean_cmi2,stderr\n";
    for (const auto &pt : toy_sweep(o.p_grid, o.seeds, o.seed)) {
        csv << format_double(pt.p) << "," << to_string(pt.channel) << "," << pt.seed_count << ","
            << format_double(pt.mean_cmi2) << "," << format_double(pt.stderr_) << "\n";
    }
    emit(o.out, csv.str(), out, manifest);
    finish(o.out, manifest);
}

/// Returns false when the engines disagree.
inline bool run_oracle_check_command(const OracleOptions &o, std::ostream &out) {
    Manifest manifest{"oracle-check",
                      {{"circuits", o.circuits}, {"max_qubits", o.max_qubits}, {"p", o.p}, {"seed", o.seed}},
                      o.seed};
    auto report = run_oracle_check(o.circuits, o.max_qubits, o.p, o.seed);
    json j = {{"circuits", report.circuits},
              {"regions_checked", report.regions_checked},
              {"partitions_checked", report.partitions_checked},
              {"max_entropy_error", report.max_entropy_error},
              {"max_renyi_error", report.max_renyi_error},
              {"stabilizer_mismatches", report.stabilizer_mismatches},
              {"endpoint_mismatches", report.endpoint_mismatches},
              {"invalid_density_matrices", report.invalid_density_matrices},
              {"passed", report.passed()}};
    emit(o.out, j.dump(2) + "\n", out, manifest);
    finish(o.out, manifest);
    return report.passed();
}

/// Entry point; returns the process exit code.
inline int run_cli(const std::vector<std::string> &raw_args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Stabilizer simulations of CMI spreading in noisy random circuits", "cmispread"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);
    app.set_version_flag("--version", std::string("cmispread v") + kVersion);
    std::size_t threads = default_thread_count();
    app.add_option("--threads", threads, "Worker threads (default: CMISPREAD_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    std::string config_unused;
    app.add_option("--config", config_unused, "Flat key=value file of subcommand options");
    app.fallthrough();

    SpreadOptions spread;
    spread.cfg.n_blocks = 256;
    spread.cfg.m = 4;
    spread.cfg.p = 1.0 / 64;
    spread.cfg.t_max = 40;
    spread.cfg.realizations = 100;
    spread.cfg.seed = 1;
    auto *s = app.add_subcommand("spread", "Coarse-grained brickwork sweep; writes the spreading field CSV");
    s->add_option("--n-blocks", spread.cfg.n_blocks, "Number of blocks (even)")->capture_default_str();
    s->add_option("--m", spread.cfg.m, "Qubits per block")->capture_default_str();
    s->add_option("--p", spread.cfg.p, "Heralded depolarization rate per qubit and layer")->capture_default_str();
    s->add_option("--t-max", spread.cfg.t_max, "Number of layers")->capture_default_str();
    s->add_option("--x-list", spread.cfg.x_values, "Half-widths of B in blocks (default: all)")->delimiter(',');
    s->add_option("--realizations", spread.cfg.realizations)->capture_default_str();
    s->add_option("--seed", spread.cfg.seed)->capture_default_str();
    s->add_flag("--stop-when-mixed", spread.cfg.stop_when_mixed, "Stop a realization once it is maximally mixed");
    s->add_option("--spot-checks", spread.cfg.spot_checks, "Rank-based CMI checks per realization")
        ->capture_default_str();
    s->add_option("--out", spread.out, "Output CSV (default: stdout)");
    s->add_option("--dump-errors", spread.dump_errors, "Write each realization's error record to <prefix><i>.rle");
    s->add_option("--dump-tableau", spread.dump_tableau, "Write realization 0's final tableau");

    FourBlockOptions fourblock;
    auto *f = app.add_subcommand("fourblock", "Four-block mutual information experiment");
    f->add_option("--m", fourblock.m)->capture_default_str();
    f->add_option("--p", fourblock.p)->capture_default_str();
    f->add_option("--seeds", fourblock.seeds)->capture_default_str();
    f->add_option("--seed", fourblock.seed)->capture_default_str();
    f->add_option("--out", fourblock.out, "Output CSV (default: stdout)");

    AnsatzOptions ansatz;
    auto *a = app.add_subcommand("ansatz", "Clipped-gauge length statistics of random stabilizer states");
    a->add_option("--n", ansatz.n)->capture_default_str();
    a->add_option("--k", ansatz.k)->capture_default_str();
    a->add_option("--samples", ansatz.samples)->capture_default_str();
    a->add_option("--seed", ansatz.seed)->capture_default_str();
    a->add_option("--out", ansatz.out, "Output CSV (default: stdout)");

    CollapseOptions collapse;
    auto *c = app.add_subcommand("collapse", "Decay-point extraction and rescaling over a list of rates");
    c->add_option("--p-list", collapse.p_list)->delimiter(',')->capture_default_str();
    c->add_option("--n-blocks", collapse.n_blocks)->capture_default_str();
    c->add_option("--m", collapse.m)->capture_default_str();
    c->add_option("--t-max", collapse.t_max, "Layers per rate (0: floor(1/2p) + 8)")->capture_default_str();
    c->add_option("--realizations", collapse.realizations)->capture_default_str();
    c->add_option("--seed", collapse.seed)->capture_default_str();
    c->add_option("--x-list", collapse.x_list)->delimiter(',');
    c->add_option("--out-prefix", collapse.out_prefix, "Writes <prefix>p<p>.csv and <prefix>merged.csv");

    BellOptions bell;
    auto *b = app.add_subcommand("bell", "Bell-pair distillation trials on circuit states (JSON lines)");
    b->add_option("--n-blocks", bell.n_blocks)->capture_default_str();
    b->add_option("--m", bell.m)->capture_default_str();
    b->add_option("--p", bell.p)->capture_default_str();
    b->add_option("--t", bell.t, "Layers (0: floor(1/2p) - 1)")->capture_default_str();
    b->add_option("--x", bell.x, "Half-width of B in blocks")->capture_default_str();
    b->add_option("--trials", bell.trials)->capture_default_str();
    b->add_option("--seed", bell.seed)->capture_default_str();
    b->add_option("--out", bell.out, "Output file (default: stdout)");

    ToyOptions toy;
    auto *y = app.add_subcommand("toy", "Four-qubit Haar circuit with dense simulation");
    y->add_option("--p-grid", toy.p_grid)->delimiter(',');
    y->add_option("--seeds", toy.seeds)->capture_default_str();
    y->add_option("--seed", toy.seed)->capture_default_str();
    y->add_option("--out", toy.out, "Output CSV (default: stdout)");

    OracleOptions oracle;
    auto *o = app.add_subcommand("oracle-check", "Compare the stabilizer engine with dense simulation");
    o->add_option("--circuits", oracle.circuits)->capture_default_str();
    o->add_option("--max-qubits", oracle.max_qubits)->capture_default_str();
    o->add_option("--p", oracle.p)->capture_default_str();
    o->add_option("--seed", oracle.seed)->capture_default_str();
    o->add_option("--out", oracle.out, "Output JSON (default: stdout)");

    try {
        std::vector<std::string> args = expand_config(raw_args);
        std::vector<const char *> argv = {"cmispread"};
        for (const auto &arg : args) argv.push_back(arg.c_str());
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::ParseError &e) {
            int code = app.exit(e, out, err);
            return code == 0 ? kOk : kConfigError;
        }

        if (s->parsed()) run_spread(spread, threads, out);
        if (f->parsed()) run_fourblock(fourblock, threads, out);
        if (a->parsed()) run_ansatz(ansatz, threads, out);
        if (c->parsed()) run_collapse(collapse, threads, out);
        if (b->parsed()) run_bell(bell, threads, out);
        if (y->parsed()) run_toy(toy, out);
        if (o->parsed() && !run_oracle_check_command(oracle, out)) {
            err << "oracle-check: stabilizer and dense results disagree\n";
            return kInvariantViolation;
        }
    } catch (const InvariantViolation &e) {
        err << "invariant violation: " << e.what() << "\n";
        return kInvariantViolation;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }
    return kOk;
}

}  // namespace cmispread::cli
