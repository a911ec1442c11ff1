#pragma once

// Run configuration: one master seed plus every module constant, serialized
// losslessly to a flat key=value file. The config hash ties reports to the
// exact constants that produced them.

#include <cinttypes>
#include <cstdio>
#include <cstdint>
#include <cstring>
#include <map>
#include <string>
#include <vector>

#include "edapx/bitstring.hpp"
#include "edapx/driver.hpp"
#include "edapx/errors.hpp"

namespace edapx {

struct RunConfig {
    uint64_t seed = 1;
    size_t threads = 1;
    Alphabet alphabet = Alphabet::Binary;
    size_t oracle_cap = 4096;  // largest n the exact DP is consulted for

    DriverConfig drv;

    // Gap distinguisher knobs. The estimator profile is deliberately coarse:
    // the gap promise leaves an order of magnitude between the two sides.
    double gap_samples_c = 2.0;
    double gap_thresh_c = 0.08;
    double gap_blocks_c = 16.0;
    size_t gap_reps = 2;
    size_t gap_outer = 1;

    // DriverConfig for the per-block estimates inside the gap test: the
    // regular estimator with a single reduction copy (the promise gap leaves
    // enough margin that averaging copies buys nothing).
    DriverConfig gap_driver() const {
        DriverConfig d = driver();
        d.reduce_outer = gap_outer;
        return d;
    }

    // Pattern matching amplification; 0 derives 2*ceil(log2 N). The planted
    // window separates from the bulk by an order of magnitude, so a small
    // median already decides; the log-scaled value is desk-scale unaffordable.
    size_t match_reps = 3;

    // Empirical distortion table written by `calibrate`, keyed by n.
    std::map<uint64_t, double> distortion_table;

    // f(n): the distortion bound consulted by the applications.
    double distortion_at(size_t n) const {
        if (distortion_table.empty()) return default_distortion;
        auto it = distortion_table.lower_bound(n);
        if (it == distortion_table.end()) return std::prev(it)->second;
        return it->second;
    }
    double default_distortion = 26.0;

    // DriverConfig with the top-level seed and thread bound applied.
    DriverConfig driver() const {
        DriverConfig d = drv;
        d.seed = seed;
        d.threads = threads;
        return d;
    }
};

namespace detail {

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
inline std::string fmt_u64(uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%" PRIu64, v);
    return buf;
}

}  // namespace detail

inline std::vector<std::pair<std::string, std::string>> config_items(const RunConfig& c) {
    using detail::fmt_double;
    using detail::fmt_u64;
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("seed", fmt_u64(c.seed));
    kv.emplace_back("threads", fmt_u64(c.threads));
    kv.emplace_back("alphabet", c.alphabet == Alphabet::Binary ? "binary" : "bytes");
    kv.emplace_back("oracle_cap", fmt_u64(c.oracle_cap));

    kv.emplace_back("drv.b_override", fmt_u64(static_cast<uint64_t>(c.drv.b_override)));
    kv.emplace_back("drv.include_s1", c.drv.include_s1 ? "1" : "0");
    kv.emplace_back("drv.c_norm", fmt_double(c.drv.c_norm));
    kv.emplace_back("drv.level_quant_scale", fmt_u64(static_cast<uint64_t>(c.drv.level_quant_scale)));
    kv.emplace_back("drv.base_dim", fmt_u64(c.drv.base_dim));
    kv.emplace_back("drv.max_length_set", fmt_u64(c.drv.max_length_set));
    kv.emplace_back("drv.proj_dim", fmt_u64(c.drv.proj_dim));
    kv.emplace_back("drv.sketch_reps", fmt_u64(c.drv.sketch_reps));
    kv.emplace_back("drv.psi_scale_c", fmt_double(c.drv.psi_scale_c));
    kv.emplace_back("drv.cauchy_norm", fmt_double(c.drv.cauchy_norm));
    kv.emplace_back("drv.forest_reps", fmt_u64(c.drv.forest_reps));
    kv.emplace_back("drv.t_min", fmt_u64(c.drv.t_min));
    kv.emplace_back("drv.bourgain_reps", fmt_u64(c.drv.bourgain_reps));
    kv.emplace_back("drv.residual_norm", fmt_double(c.drv.residual_norm));
    kv.emplace_back("drv.reduce_outer", fmt_u64(c.drv.reduce_outer));
    kv.emplace_back("drv.kappa", fmt_double(c.drv.kappa));
    kv.emplace_back("drv.floor_eps", fmt_double(c.drv.floor_eps));

    kv.emplace_back("gap.samples_c", fmt_double(c.gap_samples_c));
    kv.emplace_back("gap.thresh_c", fmt_double(c.gap_thresh_c));
    kv.emplace_back("gap.blocks_c", fmt_double(c.gap_blocks_c));
    kv.emplace_back("gap.reps", fmt_u64(c.gap_reps));
    kv.emplace_back("gap.outer", fmt_u64(c.gap_outer));
    kv.emplace_back("match.reps", fmt_u64(c.match_reps));
    kv.emplace_back("calib.default_distortion", fmt_double(c.default_distortion));
    for (const auto& [n, f] : c.distortion_table)
        kv.emplace_back("calib.f." + fmt_u64(n), fmt_double(f));
    return kv;
}

inline std::string serialize_config(const RunConfig& c) {
    std::string out;
    for (const auto& [k, v] : config_items(c)) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

inline void apply_config_line(RunConfig& c, const std::string& key, const std::string& val) {
    auto as_u64 = [&] {
        char* end = nullptr;
        uint64_t v = std::strtoull(val.c_str(), &end, 10);
        if (end == val.c_str() || *end != '\0')
            throw ConfigError("config: bad integer for " + key);
        return v;
    };
    auto as_double = [&] {
        char* end = nullptr;
        double v = std::strtod(val.c_str(), &end);
        if (end == val.c_str() || *end != '\0')
            throw ConfigError("config: bad number for " + key);
        return v;
    };

    if (key == "seed") c.seed = as_u64();
    else if (key == "threads") c.threads = static_cast<size_t>(as_u64());
    else if (key == "alphabet") {
        if (val == "binary") c.alphabet = Alphabet::Binary;
        else if (val == "bytes") c.alphabet = Alphabet::Bytes;
        else throw ConfigError("config: unknown alphabet " + val);
    } else if (key == "oracle_cap") c.oracle_cap = static_cast<size_t>(as_u64());
    else if (key == "drv.b_override") c.drv.b_override = static_cast<int64_t>(as_u64());
    else if (key == "drv.include_s1") c.drv.include_s1 = as_u64() != 0;
    else if (key == "drv.c_norm") c.drv.c_norm = as_double();
    else if (key == "drv.level_quant_scale") c.drv.level_quant_scale = static_cast<int32_t>(as_u64());
    else if (key == "drv.base_dim") c.drv.base_dim = static_cast<size_t>(as_u64());
    else if (key == "drv.max_length_set") c.drv.max_length_set = static_cast<size_t>(as_u64());
    else if (key == "drv.proj_dim") c.drv.proj_dim = static_cast<size_t>(as_u64());
    else if (key == "drv.sketch_reps") c.drv.sketch_reps = static_cast<size_t>(as_u64());
    else if (key == "drv.psi_scale_c") c.drv.psi_scale_c = as_double();
    else if (key == "drv.cauchy_norm") c.drv.cauchy_norm = as_double();
    else if (key == "drv.forest_reps") c.drv.forest_reps = static_cast<size_t>(as_u64());
    else if (key == "drv.t_min") c.drv.t_min = static_cast<uint32_t>(as_u64());
    else if (key == "drv.bourgain_reps") c.drv.bourgain_reps = static_cast<size_t>(as_u64());
    else if (key == "drv.residual_norm") c.drv.residual_norm = as_double();
    else if (key == "drv.reduce_outer") c.drv.reduce_outer = static_cast<size_t>(as_u64());
    else if (key == "drv.kappa") c.drv.kappa = as_double();
    else if (key == "drv.floor_eps") c.drv.floor_eps = as_double();
    else if (key == "gap.samples_c") c.gap_samples_c = as_double();
    else if (key == "gap.thresh_c") c.gap_thresh_c = as_double();
    else if (key == "gap.blocks_c") c.gap_blocks_c = as_double();
    else if (key == "gap.reps") c.gap_reps = static_cast<size_t>(as_u64());
    else if (key == "gap.outer") c.gap_outer = static_cast<size_t>(as_u64());
    else if (key == "match.reps") c.match_reps = static_cast<size_t>(as_u64());
    else if (key == "calib.default_distortion") c.default_distortion = as_double();
    else if (key.rfind("calib.f.", 0) == 0) {
        const std::string nstr = key.substr(8);
        char* end = nullptr;
        uint64_t n = std::strtoull(nstr.c_str(), &end, 10);
        if (end == nstr.c_str() || *end != '\0') throw ConfigError("config: bad key " + key);
        c.distortion_table[n] = as_double();
    } else {
        throw ConfigError("config: unknown key " + key);
    }
}

inline void validate_config(const RunConfig& c) {
    if (c.threads < 1) throw ConfigError("config: threads must be >= 1");
    if (c.drv.c_norm <= 0 || c.drv.psi_scale_c <= 0 || c.drv.cauchy_norm <= 0 ||
        c.drv.kappa <= 0 || c.drv.floor_eps <= 0)
        throw ConfigError("config: constants must be positive");
    if (c.drv.level_quant_scale < 1 || c.drv.proj_dim < 1 || c.drv.sketch_reps < 1 ||
        c.drv.forest_reps < 1 || c.drv.bourgain_reps < 1 || c.drv.base_dim < 2 ||
        c.drv.reduce_outer < 1)
        throw ConfigError("config: shape constants must be >= 1");
    if (c.gap_samples_c <= 0 || c.gap_thresh_c <= 0 || c.gap_blocks_c <= 0 || c.gap_reps < 1 ||
        c.gap_outer < 1)
        throw ConfigError("config: gap constants must be positive");
    if (c.default_distortion < 1.0) throw ConfigError("config: distortion must be >= 1");
}

inline RunConfig parse_config(const std::string& text) {
    RunConfig c;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty() || line[0] == '#') continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config: missing '=' in: " + line);
        apply_config_line(c, line.substr(0, eq), line.substr(eq + 1));
    }
    validate_config(c);
    return c;
}

// FNV-1a over the canonical serialization, printed as 16 hex digits.
inline std::string config_hash(const RunConfig& c) {
    const std::string text = serialize_config(c);
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

}  // namespace edapx
