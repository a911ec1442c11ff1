#pragma once

// Approximate pattern matching: for overlapping length-2n chunks of the text
// (stepped by n so every window is covered), append the pattern, run the
// level pipeline on the concatenation, and read per-window estimates of the
// distance to the pattern's own vector. Medians over repeated runs, then the
// global minimizer.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "edapx/driver.hpp"

namespace edapx {

struct MatchResult {
    size_t best_start = 0;   // 0-based window start in T
    double estimate = 0.0;   // calibrated estimate at best_start
    std::vector<double> per_window;  // optional: one estimate per window start
};

inline MatchResult pattern_match(const BitString& text, const BitString& pattern,
                                 const DriverConfig& dcfg, uint64_t seed, size_t reps = 0,
                                 bool want_per_window = false) {
    const size_t N = text.size(), n = pattern.size();
    if (n == 0) throw InvalidInput("pattern_match: empty pattern");
    if (N < 2 * n) throw InvalidInput("pattern_match: text must be at least twice the pattern");
    if (text.sigma() != pattern.sigma()) throw InvalidInput("pattern_match: alphabet mismatch");
    if (reps == 0) reps = 2 * ceil_log2(N);

    std::vector<size_t> chunk_starts;
    for (size_t s = 0; s + 2 * n <= N; s += n) chunk_starts.push_back(s);
    if (chunk_starts.back() != N - 2 * n) chunk_starts.push_back(N - 2 * n);

    const size_t window_count = N - n + 1;
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> best(window_count, kInf);

    // Top-level rows needed per chunk: windows 0..n of the chunk plus the
    // pattern's own window at 2n.
    std::vector<size_t> wanted(n + 2);
    for (size_t i = 0; i <= n; ++i) wanted[i] = i;
    wanted[n + 1] = 2 * n;

    std::vector<double> run(n + 1);
    std::vector<std::vector<double>> med(n + 1, std::vector<double>(reps));
    for (size_t ci = 0; ci < chunk_starts.size(); ++ci) {
        const size_t s = chunk_starts[ci];
        const BitString joined = text.substr(s, 2 * n).concat(pattern);
        for (size_t r = 0; r < reps; ++r) {
            DriverConfig dc = dcfg;
            dc.seed = stream(seed, "match.run", ci, r);
            LevelBuild lb = build_levels(joined, static_cast<int64_t>(n), dc, &wanted);
            const LevelVectorSet& top = lb.store.at(static_cast<int64_t>(n));
            for (size_t w = 0; w <= n; ++w)
                med[w][r] = static_cast<double>(top.row_distance(w, 2 * n)) /
                            top.quant_scale * dcfg.kappa;
        }
        for (size_t w = 0; w <= n; ++w) {
            auto& v = med[w];
            std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
            run[w] = v[v.size() / 2];
        }
        for (size_t w = 0; w <= n; ++w) {
            const size_t pos = s + w;
            if (run[w] < best[pos]) best[pos] = run[w];
        }
    }

    MatchResult out;
    out.best_start = 0;
    out.estimate = best[0];
    for (size_t p = 1; p < window_count; ++p) {
        if (best[p] < out.estimate) {
            out.estimate = best[p];
            out.best_start = p;
        }
    }
    if (want_per_window) out.per_window = std::move(best);
    return out;
}

}  // namespace edapx
