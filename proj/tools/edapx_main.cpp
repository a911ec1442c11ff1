// Command-line front end: exact and approximate distances, the gap
// distinguisher, pattern matching, and the bench/calibrate harness.
// Exit codes: 0 success, 2 invalid input, 3 configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "edapx/edapx.hpp"

using namespace edapx;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write file: " + path);
    out << content;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

struct Cli {
    RunConfig cfg;
    bool json = false;
    std::string config_path;

    void load_config() {
        if (!config_path.empty()) cfg = parse_config(read_file(config_path));
    }
    BitString load_string(const std::string& path) const {
        return BitString::from_text(read_file(path), cfg.alphabet);
    }
    void emit(const ordered_json& j, const std::string& text) const {
        if (json)
            std::cout << j.dump(2) << "\n";
        else
            std::cout << text;
    }
};

ordered_json report_header(const Cli& cli, const char* cmd) {
    ordered_json j;
    j["command"] = cmd;
    j["seed"] = cli.cfg.seed;
    j["config_hash"] = config_hash(cli.cfg);
    return j;
}

int cmd_exact(Cli& cli, const std::string& fx, const std::string& fy) {
    const BitString x = cli.load_string(fx), y = cli.load_string(fy);
    const uint64_t d = exact_edit_distance(x, y);
    ordered_json j = report_header(cli, "exact");
    j["distance"] = d;
    cli.emit(j, "exact " + std::to_string(d) + "\n");
    return 0;
}

int cmd_dist(Cli& cli, const std::string& fx, const std::string& fy, bool with_exact) {
    const BitString x = cli.load_string(fx), y = cli.load_string(fy);
    ApproxResult r = approx_edit_distance(x, y, cli.cfg.driver());
    ordered_json j = report_header(cli, "dist");
    j["estimate"] = r.calibrated;
    j["raw"] = r.raw;
    j["n"] = r.n;
    j["b"] = r.b;
    j["padded"] = r.padded;
    std::string text = "estimate " + fmt(r.calibrated) + "\n";
    if (with_exact && std::max(x.size(), y.size()) <= cli.cfg.oracle_cap) {
        const uint64_t d = exact_edit_distance(x, y);
        j["exact"] = d;
        double ratio = d > 0 ? r.calibrated / static_cast<double>(d) : 0.0;
        j["ratio"] = ratio;
        text += "exact " + std::to_string(d) + "\nratio " + fmt(ratio) + "\n";
    }
    cli.emit(j, text);
    return 0;
}

int cmd_gap(Cli& cli, const std::string& fx, const std::string& fy, double alo, double ahi) {
    const BitString x = cli.load_string(fx), y = cli.load_string(fy);
    GapSpec spec = make_gap_spec(x.size(), alo, ahi, cli.cfg.distortion_at(x.size()),
                                 cli.cfg.gap_samples_c, cli.cfg.gap_thresh_c, cli.cfg.gap_reps,
                                 cli.cfg.gap_blocks_c);
    GapResult r = gap_distinguish(x, y, spec, cli.cfg.gap_driver(), stream(cli.cfg.seed, "gap"));
    ordered_json j = report_header(cli, "gap");
    j["verdict"] = r.verdict == GapVerdict::Far ? "FAR" : "CLOSE";
    j["blocks"] = spec.blocks;
    j["threshold"] = spec.threshold;
    j["max_estimate"] = r.max_estimate;
    j["blocks_read"] = r.blocks_read;
    cli.emit(j, std::string(r.verdict == GapVerdict::Far ? "FAR" : "CLOSE") + "\n");
    return 0;
}

int cmd_match(Cli& cli, const std::string& ft, const std::string& fp, bool per_window) {
    const BitString t = cli.load_string(ft), p = cli.load_string(fp);
    MatchResult r = pattern_match(t, p, cli.cfg.driver(), stream(cli.cfg.seed, "match"),
                                  cli.cfg.match_reps, per_window);
    ordered_json j = report_header(cli, "match");
    j["best_start"] = r.best_start;
    j["estimate"] = r.estimate;
    if (per_window) j["per_window"] = r.per_window;
    cli.emit(j, "match start=" + std::to_string(r.best_start) + " estimate=" + fmt(r.estimate) +
                    "\n");
    return 0;
}

std::vector<size_t> parse_sizes(const std::string& val) {
    std::vector<size_t> out;
    std::stringstream ss(val);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) continue;
        char* end = nullptr;
        unsigned long long v = std::strtoull(part.c_str(), &end, 10);
        if (end == part.c_str() || *end != '\0' || v < 2)
            throw InvalidInput("bad size list entry: " + part);
        out.push_back(static_cast<size_t>(v));
    }
    if (out.empty()) throw InvalidInput("empty size list");
    return out;
}

ordered_json bench_to_json(const Cli& cli, const BenchReport& rep, bool with_time) {
    ordered_json j = report_header(cli, "bench");
    j["per_size"] = ordered_json::array();
    for (const auto& sz : rep.per_size) {
        ordered_json js;
        js["n"] = sz.n;
        js["planted"] = sz.planted;
        if (with_time) js["median_wall_ms"] = sz.median_wall_ms();
        ordered_json runs = ordered_json::array();
        for (const auto& r : sz.runs) {
            ordered_json jr;
            if (with_time) jr["wall_ms"] = r.wall_ms;
            jr["raw"] = r.raw;
            jr["estimate"] = r.calibrated;
            if (r.oracle >= 0) {
                jr["oracle"] = r.oracle;
                jr["ratio"] = r.ratio;
            }
            runs.push_back(jr);
        }
        js["runs"] = runs;
        double mn, md, mx;
        if (sz.ratio_stats(mn, md, mx)) {
            js["distortion"] = {{"min", mn}, {"median", md}, {"max", mx}};
        }
        j["per_size"].push_back(js);
    }
    return j;
}

int cmd_bench(Cli& cli, const std::string& sizes_arg, size_t runs, bool no_time) {
    BenchReport rep = run_bench(cli.cfg, parse_sizes(sizes_arg), runs);
    ordered_json j = bench_to_json(cli, rep, !no_time);
    std::string text;
    for (const auto& sz : rep.per_size) {
        text += "n=" + std::to_string(sz.n);
        if (!no_time) text += " wall_ms=" + fmt(sz.median_wall_ms());
        double mn, md, mx;
        if (sz.ratio_stats(mn, md, mx))
            text += " distortion=" + fmt(mn) + "/" + fmt(md) + "/" + fmt(mx);
        text += "\n";
    }
    cli.emit(j, text);
    return 0;
}

int cmd_calibrate(Cli& cli, const std::string& sizes_arg, const std::string& out_path) {
    CalibrationReport rep = run_calibrate(cli.cfg, parse_sizes(sizes_arg));
    const std::string serialized = serialize_config(cli.cfg);
    if (!out_path.empty()) write_file(out_path, serialized);
    ordered_json j = report_header(cli, "calibrate");
    j["kappa"] = rep.kappa;
    j["floor_eps"] = rep.floor_eps;
    j["samples"] = rep.samples;
    j["noncontraction"] = rep.noncontraction_rate;
    ordered_json table = ordered_json::object();
    for (const auto& [n, f] : rep.distortion) table[std::to_string(n)] = f;
    j["distortion"] = table;
    std::string text = "kappa " + fmt(rep.kappa) + "\nfloor " + fmt(rep.floor_eps) + "\n";
    for (const auto& [n, f] : rep.distortion)
        text += "F(" + std::to_string(n) + ") " + fmt(f) + "\n";
    if (out_path.empty()) text += serialized;
    cli.emit(j, text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"near-linear edit distance estimation"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    Cli cli;
    uint64_t seed_flag = 0;
    bool seed_set = false;
    size_t threads_flag = 0;
    std::string alphabet_flag;
    app.add_option("--seed", seed_flag, "master seed")->each([&](const std::string&) {
        seed_set = true;
    });
    app.add_option("--config", cli.config_path, "key=value config file");
    app.add_flag("--json", cli.json, "emit JSON");
    app.add_option("--alphabet", alphabet_flag, "binary|bytes");
    app.add_option("--threads", threads_flag, "worker thread bound");

    std::string fx, fy, ft, fp, sizes_arg, out_path;
    bool with_exact = false, per_window = false, no_time = false;
    double alo = 0.2, ahi = 0.8;
    size_t bench_runs = 3;

    auto* c_exact = app.add_subcommand("exact", "exact DP distance");
    c_exact->add_option("x", fx)->required();
    c_exact->add_option("y", fy)->required();

    auto* c_dist = app.add_subcommand("dist", "approximate distance");
    c_dist->add_option("x", fx)->required();
    c_dist->add_option("y", fy)->required();
    c_dist->add_flag("--with-exact", with_exact, "also run the DP oracle when n is small");

    auto* c_gap = app.add_subcommand("gap", "close/far distinguisher");
    c_gap->add_option("x", fx)->required();
    c_gap->add_option("y", fy)->required();
    c_gap->add_option("--alo", alo, "low exponent a");
    c_gap->add_option("--ahi", ahi, "high exponent beta");

    auto* c_match = app.add_subcommand("match", "closest window of T to P");
    c_match->add_option("T", ft)->required();
    c_match->add_option("P", fp)->required();
    c_match->add_flag("--per-window", per_window, "dump per-window estimates");

    auto* c_bench = app.add_subcommand("bench", "runtime/distortion benchmark");
    c_bench->add_option("--sizes", sizes_arg, "comma-separated n list")->required();
    c_bench->add_option("--runs", bench_runs, "instances per size");
    c_bench->add_flag("--no-time", no_time, "suppress wall-clock fields");

    auto* c_cal = app.add_subcommand("calibrate", "fit kappa and the distortion table");
    c_cal->add_option("--sizes", sizes_arg, "comma-separated n list (within the oracle cap)");
    c_cal->add_option("--out", out_path, "write the updated config here");

    CLI11_PARSE(app, argc, argv);

    try {
        cli.load_config();
        if (seed_set) cli.cfg.seed = seed_flag;
        if (threads_flag > 0) cli.cfg.threads = threads_flag;
        if (!alphabet_flag.empty()) {
            if (alphabet_flag == "binary") cli.cfg.alphabet = Alphabet::Binary;
            else if (alphabet_flag == "bytes") cli.cfg.alphabet = Alphabet::Bytes;
            else throw InvalidInput("unknown alphabet: " + alphabet_flag);
        }
        validate_config(cli.cfg);

        if (c_exact->parsed()) return cmd_exact(cli, fx, fy);
        if (c_dist->parsed()) return cmd_dist(cli, fx, fy, with_exact);
        if (c_gap->parsed()) return cmd_gap(cli, fx, fy, alo, ahi);
        if (c_match->parsed()) return cmd_match(cli, ft, fp, per_window);
        if (c_bench->parsed()) return cmd_bench(cli, sizes_arg, bench_runs, no_time);
        if (c_cal->parsed()) {
            if (sizes_arg.empty()) sizes_arg = "512,1024,2048";
            return cmd_calibrate(cli, sizes_arg, out_path);
        }
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
