#pragma once

// Sublinear gap test: partition both strings into blocks, sample a few block
// pairs, estimate each sampled pair's edit distance, and report FAR when any
// sampled block exceeds the threshold.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "edapx/driver.hpp"

namespace edapx {

struct GapSpec {
    double exp_low = 0.0;    // a: close side is O(n^a)
    double exp_high = 1.0;   // beta: far side is Omega(n^beta)
    size_t trials = 1;       // sampled block indices
    double threshold = 0.0;  // per-block cutoff on the calibrated estimate
    size_t blocks = 1;       // partition size b
    size_t reps = 3;         // estimates per block, median taken

    void validate() const {
        if (!(exp_low >= 0.0 && exp_low < exp_high && exp_high <= 1.0))
            throw InvalidInput("GapSpec: need 0 <= a < beta <= 1");
        if (trials < 1 || blocks < 1 || reps < 1) throw ConfigError("GapSpec: empty plan");
    }
};

// Derives the block structure and threshold from the exponents and the
// measured distortion f(n): b = ceil(n^(beta-a) / (f log2 n)) blocks,
// threshold = thresh_c * n^a * f * log2 n.
inline GapSpec make_gap_spec(size_t n, double a, double beta, double distortion,
                             double samples_c = 2.0, double thresh_c = 0.15, size_t reps = 3,
                             double blocks_c = 4.0) {
    if (!(a >= 0.0 && a < beta && beta <= 1.0))
        throw InvalidInput("make_gap_spec: need 0 <= a < beta <= 1");
    if (distortion < 1.0) distortion = 1.0;
    const double nd = static_cast<double>(n);
    const double lg = std::log2(std::max(2.0, nd));
    GapSpec spec;
    spec.exp_low = a;
    spec.exp_high = beta;
    spec.blocks = static_cast<size_t>(
        std::max(1.0, std::ceil(blocks_c * std::pow(nd, beta - a) / (distortion * lg))));
    spec.trials = static_cast<size_t>(std::max(1.0, std::ceil(samples_c * std::pow(nd, 1.0 - beta))));
    spec.threshold = thresh_c * std::pow(nd, a) * distortion * lg;
    spec.reps = reps;
    return spec;
}

enum class GapVerdict { Close, Far };

struct GapResult {
    GapVerdict verdict = GapVerdict::Close;
    size_t blocks_read = 0;     // estimate calls, the cost counter
    double max_estimate = 0.0;  // largest sampled block estimate
    size_t block_len = 0;
};

inline GapResult gap_distinguish(const BitString& x, const BitString& y, const GapSpec& spec,
                                 const DriverConfig& dcfg, uint64_t seed) {
    spec.validate();
    if (x.size() != y.size() || x.empty())
        throw InvalidInput("gap_distinguish: inputs must be nonempty and of equal length");
    const size_t n = x.size();
    const size_t blocks = std::min(spec.blocks, n);
    const size_t len = n / blocks;  // trailing remainder is not examined
    if (len == 0) throw InvalidInput("gap_distinguish: more blocks than symbols");

    GapResult res;
    res.block_len = len;
    std::map<size_t, double> cached;  // block -> median estimate
    const uint64_t sid = stream(seed, "gap.sample");
    for (size_t t = 0; t < spec.trials; ++t) {
        const size_t blk = mix64(sid ^ mix64(t)) % blocks;
        auto it = cached.find(blk);
        if (it == cached.end()) {
            std::vector<double> est(spec.reps);
            for (size_t r = 0; r < spec.reps; ++r) {
                DriverConfig dc = dcfg;
                dc.seed = stream(seed, "gap.est", blk, r);
                est[r] = approx_edit_distance(x.substr(blk * len, len), y.substr(blk * len, len),
                                              dc)
                             .calibrated;
                ++res.blocks_read;
            }
            std::nth_element(est.begin(), est.begin() + est.size() / 2, est.end());
            it = cached.emplace(blk, est[est.size() / 2]).first;
        }
        res.max_estimate = std::max(res.max_estimate, it->second);
        if (it->second > spec.threshold) {
            res.verdict = GapVerdict::Far;
            return res;
        }
    }
    res.verdict = GapVerdict::Close;
    return res;
}

}  // namespace edapx
