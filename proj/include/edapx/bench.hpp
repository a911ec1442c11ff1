#pragma once

// Benchmark and calibration harness. Planted-edit instances give a known
// oracle distance; the bench measures wall time and empirical distortion,
// and calibrate fits the non-contraction multiplier kappa plus the
// distortion table f(n) consumed by the applications.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <vector>

#include "edapx/config.hpp"
#include "edapx/driver.hpp"
#include "edapx/edit_distance.hpp"

namespace edapx {

// Random pair at exactly length n whose true distance is DP-computable;
// about `edits` edits are planted (length drift is repaired with extra
// insertions/deletions, so ed(x,y) <= edits + drift).
struct PlantedPair {
    BitString x, y;
    size_t planted;
};

inline PlantedPair planted_pair(size_t n, size_t edits, uint32_t sigma, uint64_t seed) {
    BitString x = BitString::random(n, sigma, stream(seed, "plant.x"));
    BitString y = apply_random_edits(x, edits, stream(seed, "plant.e"));
    uint64_t fix = stream(seed, "plant.fix");
    uint64_t ctr = 0;
    std::vector<uint8_t> sym = y.symbols();
    while (sym.size() < n) {
        size_t pos = mix64(fix ^ mix64(ctr++)) % (sym.size() + 1);
        sym.insert(sym.begin() + pos, static_cast<uint8_t>(mix64(ctr ^ fix) % sigma));
    }
    while (sym.size() > n) {
        size_t pos = mix64(fix ^ mix64(ctr++)) % sym.size();
        sym.erase(sym.begin() + pos);
    }
    return {std::move(x), BitString(std::move(sym), sigma), edits};
}

struct BenchRun {
    double wall_ms = 0.0;
    double raw = 0.0;
    double calibrated = 0.0;
    int64_t oracle = -1;  // -1: oracle skipped (n above cap)
    double ratio = 0.0;   // calibrated / oracle where oracle > 0
};

struct BenchSizeResult {
    size_t n = 0;
    size_t planted = 0;
    std::vector<BenchRun> runs;

    double median_wall_ms() const {
        std::vector<double> w;
        for (const auto& r : runs) w.push_back(r.wall_ms);
        std::sort(w.begin(), w.end());
        return w[w.size() / 2];
    }
    // min/median/max of calibrated/oracle over runs with an oracle value
    bool ratio_stats(double& mn, double& md, double& mx) const {
        std::vector<double> rs;
        for (const auto& r : runs)
            if (r.oracle > 0) rs.push_back(r.ratio);
        if (rs.empty()) return false;
        std::sort(rs.begin(), rs.end());
        mn = rs.front();
        md = rs[rs.size() / 2];
        mx = rs.back();
        return true;
    }
};

struct BenchReport {
    std::string hash;
    uint64_t seed = 0;
    std::vector<BenchSizeResult> per_size;
};

inline BenchReport run_bench(const RunConfig& cfg, const std::vector<size_t>& sizes,
                             size_t runs_per_size = 3) {
    BenchReport rep;
    rep.hash = config_hash(cfg);
    rep.seed = cfg.seed;
    const uint32_t sigma = alphabet_size(cfg.alphabet);
    for (size_t n : sizes) {
        if (n < 2) throw InvalidInput("bench: sizes must be >= 2");
        BenchSizeResult sz;
        sz.n = n;
        sz.planted = std::max<size_t>(1, n / 16);
        for (size_t r = 0; r < runs_per_size; ++r) {
            PlantedPair pp = planted_pair(n, sz.planted, sigma, stream(cfg.seed, "bench", n, r));
            DriverConfig dc = cfg.driver();
            dc.seed = stream(cfg.seed, "bench.est", n, r);
            BenchRun run;
            const auto t0 = std::chrono::steady_clock::now();
            ApproxResult est = approx_edit_distance(pp.x, pp.y, dc);
            const auto t1 = std::chrono::steady_clock::now();
            run.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            run.raw = est.raw;
            run.calibrated = est.calibrated;
            if (n <= cfg.oracle_cap) {
                run.oracle = static_cast<int64_t>(exact_edit_distance(pp.x, pp.y));
                if (run.oracle > 0) run.ratio = run.calibrated / static_cast<double>(run.oracle);
            }
            sz.runs.push_back(run);
        }
        rep.per_size.push_back(std::move(sz));
    }
    return rep;
}

struct CalibrationReport {
    double kappa = 1.0;
    double floor_eps = 1.0;
    std::map<uint64_t, double> distortion;  // per size: max calibrated/true
    size_t samples = 0;
    double noncontraction_rate = 0.0;  // on the fitting sample, after kappa
};

// Fits kappa so calibrated estimates dominate the true distance (25% headroom
// over the worst fitting sample), records the resulting distortion table and
// the x == y floor. Sizes must stay within the oracle cap.
inline CalibrationReport run_calibrate(RunConfig& cfg, const std::vector<size_t>& sizes,
                                       size_t pairs_per_size = 8) {
    CalibrationReport rep;
    const uint32_t sigma = alphabet_size(cfg.alphabet);
    double worst_under = 0.0;  // max true/raw
    std::vector<std::pair<double, double>> all;  // (raw, true)
    for (size_t n : sizes) {
        if (n > cfg.oracle_cap)
            throw ConfigError("calibrate: size exceeds the oracle cap");
        // spans the whole regime, including the saturated high-density end
        const size_t dvals[3] = {std::max<size_t>(1, n / 128), std::max<size_t>(2, n / 16),
                                 std::max<size_t>(4, n / 2)};
        for (size_t p = 0; p < pairs_per_size; ++p) {
            const size_t d = dvals[p % 3];
            PlantedPair pp = planted_pair(n, d, sigma, stream(cfg.seed, "calib", n, p));
            DriverConfig dc = cfg.driver();
            dc.seed = stream(cfg.seed, "calib.est", n, p);
            const double raw = approx_edit_distance(pp.x, pp.y, dc).raw;
            const auto truth = static_cast<double>(exact_edit_distance(pp.x, pp.y));
            if (truth <= 0) continue;
            if (raw <= 0) throw ConfigError("calibrate: zero estimate on a distinct pair");
            all.emplace_back(raw, truth);
            worst_under = std::max(worst_under, truth / raw);
        }
    }
    if (all.empty()) throw ConfigError("calibrate: no usable samples");
    rep.kappa = worst_under * 1.25;
    rep.samples = all.size();

    size_t ok = 0;
    for (auto& [raw, truth] : all)
        if (raw * rep.kappa >= truth) ++ok;
    rep.noncontraction_rate = static_cast<double>(ok) / all.size();

    // Distortion per size with the fitted kappa.
    size_t idx = 0;
    for (size_t n : sizes) {
        double worst = 1.0;
        for (size_t p = 0; p < pairs_per_size && idx < all.size(); ++p, ++idx)
            worst = std::max(worst, all[idx].first * rep.kappa / all[idx].second);
        rep.distortion[n] = worst;
    }

    // Floor from identical inputs.
    double floor_v = 0.0;
    for (size_t n : sizes) {
        BitString x = BitString::random(n, sigma, stream(cfg.seed, "calib.eq", n));
        DriverConfig dc = cfg.driver();
        dc.seed = stream(cfg.seed, "calib.eqest", n);
        floor_v = std::max(floor_v, approx_edit_distance(x, x, dc).raw * rep.kappa);
    }
    rep.floor_eps = floor_v + 0.5;

    cfg.drv.kappa = rep.kappa;
    cfg.drv.floor_eps = rep.floor_eps;
    cfg.distortion_table = rep.distortion;
    return rep;
}

}  // namespace edapx
