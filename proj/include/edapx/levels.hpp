#pragma once

// Per-level vector families. For a level length m, vector i stands for the
// substring starting at i of length m; l1 distances between stored integer
// vectors track edit distance between the substrings at the level's recorded
// quantization scale (stored = scale * calibrated).
//
// Base levels (m <= b^2) hash substring content into random bit vectors whose
// expected distance for distinct substrings is m. Recursive levels run the
// sliding TEMD sketch plus metric reduction per window size s and concatenate
// the per-block results.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <map>
#include <thread>
#include <vector>

#include "edapx/bitstring.hpp"
#include "edapx/errors.hpp"
#include "edapx/grid_sketch.hpp"
#include "edapx/reduce.hpp"
#include "edapx/util.hpp"

namespace edapx {

struct LevelVectorSet {
    int64_t level_len = 0;  // m
    size_t count = 0;       // vectors; index i <-> substring start i (0-based)
    size_t dim = 0;
    int32_t quant_scale = 1;   // stored integers are quant_scale * calibrated units
    int32_t coord_bound = 1;   // max |stored coordinate|

    bool packed = false;              // base levels: 0/1 rows, bit-packed
    size_t words_per_row = 0;
    std::vector<uint64_t> bits;       // packed storage
    std::vector<int32_t> ints;        // row-major storage otherwise

    // Fills `out` (size dim) with row i.
    void fill_row(size_t i, int32_t* out) const {
        if (packed) {
            const uint64_t* w = bits.data() + i * words_per_row;
            for (size_t t = 0; t < dim; ++t)
                out[t] = static_cast<int32_t>((w[t >> 6] >> (t & 63)) & 1u);
        } else {
            const int32_t* r = ints.data() + i * dim;
            std::copy_n(r, dim, out);
        }
    }

    std::vector<int64_t> row64(size_t i) const {
        std::vector<int32_t> tmp(dim);
        fill_row(i, tmp.data());
        return std::vector<int64_t>(tmp.begin(), tmp.end());
    }

    // l1 distance between stored rows (integer-exact).
    int64_t row_distance(size_t i, size_t j) const {
        if (packed) {
            const uint64_t* a = bits.data() + i * words_per_row;
            const uint64_t* b = bits.data() + j * words_per_row;
            int64_t d = 0;
            for (size_t w = 0; w < words_per_row; ++w)
                d += __builtin_popcountll(a[w] ^ b[w]);
            return d;
        }
        const int32_t* a = ints.data() + i * dim;
        const int32_t* b = ints.data() + j * dim;
        int64_t d = 0;
        for (size_t t = 0; t < dim; ++t) d += std::llabs(int64_t{a[t]} - int64_t{b[t]});
        return d;
    }
};

using LevelStore = std::map<int64_t, LevelVectorSet>;

// Random-bit vectors for a base level. The effective dimension is
// min(dim_alpha, 2m) bits so the expected distance of distinct substrings
// concentrates at m; identical substrings always map to identical vectors.
inline LevelVectorSet base_level_vectors(const BitString& x, int64_t m, size_t dim_alpha,
                                         int64_t b, uint64_t seed) {
    if (m < 1 || static_cast<size_t>(m) > x.size())
        throw InvalidInput("base_level_vectors: bad level length");
    if (m > b * b) throw InvalidInput("base_level_vectors: level length exceeds b^2");
    const size_t count = x.size() - static_cast<size_t>(m) + 1;
    size_t dim = std::min<size_t>(dim_alpha, 2 * static_cast<size_t>(m));
    if (dim < 2) dim = 2;

    LevelVectorSet out;
    out.level_len = m;
    out.count = count;
    out.dim = dim;
    out.quant_scale = 1;
    out.coord_bound = 1;
    out.packed = true;
    out.words_per_row = (dim + 63) / 64;
    out.bits.assign(count * out.words_per_row, 0);

    // Two-lane polynomial content hash over the symbols, O(1) per window.
    const size_t L = x.size();
    const uint64_t b1 = mix64(stream(seed, "base.poly", m, 1)) | 1;
    const uint64_t b2 = mix64(stream(seed, "base.poly", m, 2)) | 1;
    std::vector<uint64_t> h1(L + 1, 0), h2(L + 1, 0);
    uint64_t p1 = 1, p2 = 1;
    for (size_t i = 0; i < L; ++i) {
        h1[i + 1] = h1[i] * b1 + x[i] + 1;
        h2[i + 1] = h2[i] * b2 + x[i] + 1;
    }
    for (int64_t e = 0; e < m; ++e) {
        p1 *= b1;
        p2 *= b2;
    }

    const uint64_t expand = stream(seed, "base.bits", m);
    const size_t tail_bits = dim & 63;
    const uint64_t tail_mask = tail_bits == 0 ? ~0ull : ((1ull << tail_bits) - 1);
    for (size_t i = 0; i < count; ++i) {
        const uint64_t c1 = h1[i + m] - h1[i] * p1;
        const uint64_t c2 = h2[i + m] - h2[i] * p2;
        const uint64_t sid = hash_combine(hash_combine(expand, c1), c2);
        uint64_t* row = out.bits.data() + i * out.words_per_row;
        for (size_t w = 0; w < out.words_per_row; ++w) {
            uint64_t word = mix64(sid ^ mix64(w));
            if (w + 1 == out.words_per_row) word &= tail_mask;
            row[w] = word;
        }
    }
    return out;
}

// Profile of the embedded pipeline used while building recursive levels.
struct LevelBuildConfig {
    uint64_t seed = 1;
    size_t param_n = 2;       // the n all log factors refer to
    int64_t branching = 2;    // b
    bool include_s1 = true;
    double c_norm = 12.0;     // Eq-style normalization constant (>= 12)
    int32_t quant_scale = 8;  // rho for re-quantizing level outputs
    double cauchy_norm = 0.8;
    double psi_scale_c = 1.0;
    size_t proj_dim = 48;      // k of the embedded sketches
    size_t sketch_reps = 3;    // min-product rows
    size_t forest_reps = 2;    // per (threshold, row)
    uint32_t t_min = 4;        // quantized inputs keep distinct rows apart
    size_t bourgain_reps = 2;
    double residual_norm = 0;  // 0 -> 0.6 * bourgain_reps
    size_t reduce_outer = 1;   // independent reduction copies per (m, s)
    size_t threads = 1;

    GridSketchParams sketch_params(size_t dim, int64_t coord_bound, size_t s, int64_t cap,
                                   uint64_t sd) const {
        GridSketchParams p;
        p.dim = dim;
        p.coord_range = coord_bound;
        p.window = s;
        p.cap = cap;
        p.levels = ceil_log2(static_cast<uint64_t>(cap)) + 2;
        p.proj_dim = proj_dim;
        p.reps = sketch_reps;
        p.scale = psi_scale_c * static_cast<double>(ceil_log2(param_n)) / static_cast<double>(s);
        p.seed = sd;
        p.param_n = param_n;
        return p;
    }

    ReduceParams reduce_params(uint64_t sd) const {
        ReduceParams rp;
        rp.seed = sd;
        rp.param_n = param_n;
        rp.forest_reps = forest_reps;
        rp.t_min = t_min;
        rp.bourgain_reps = bourgain_reps;
        rp.residual_norm = residual_norm;
        rp.outer_reps = reduce_outer;
        rp.threads = threads;
        return rp;
    }
};

// Builds the vectors of a recursive level (m > b^2) from the lower levels.
// If `wanted` is non-null only those window starts are materialized; the rest
// of the rows are zero (callers must not read them).
inline LevelVectorSet level_vectors(int64_t m, const LevelStore& lower,
                                    const LevelBuildConfig& cfg,
                                    const std::vector<size_t>* wanted = nullptr) {
    const int64_t b = cfg.branching;
    if (m <= b * b) throw InvalidInput("level_vectors: level is a base case");
    const int64_t l = m / b;

    std::vector<size_t> s_values;
    for (int64_t s = cfg.include_s1 ? 1 : 2; s <= l; s *= 2)
        s_values.push_back(static_cast<size_t>(s));
    if (s_values.empty()) throw InvalidInput("level_vectors: no window sizes");

    // All lower levels must exist and agree on the underlying string length.
    size_t L = 0;
    for (size_t s : s_values) {
        auto it = lower.find(l - static_cast<int64_t>(s) + 1);
        if (it == lower.end())
            throw MissingDependency("level_vectors: missing level " +
                                    std::to_string(l - static_cast<int64_t>(s) + 1));
        size_t this_L = it->second.count + static_cast<size_t>(it->second.level_len) - 1;
        if (L == 0) L = this_L;
        if (this_L != L) throw InvalidInput("level_vectors: inconsistent lower levels");
    }
    if (static_cast<size_t>(m) > L) throw InvalidInput("level_vectors: level longer than string");

    const size_t out_count = L - static_cast<size_t>(m) + 1;
    std::vector<size_t> all;
    if (!wanted) {
        all.resize(out_count);
        for (size_t i = 0; i < out_count; ++i) all[i] = i;
    }
    const std::vector<size_t>& targets = wanted ? *wanted : all;
    for (size_t i : targets)
        if (i >= out_count) throw InvalidInput("level_vectors: wanted start out of range");

    LevelVectorSet out;
    out.level_len = m;
    out.count = out_count;
    out.quant_scale = cfg.quant_scale;
    out.packed = false;

    // The per-s pipelines are independent; run them on a small worker pool.
    struct SPipe {
        ReducedVectors rv;
        double alpha = 1.0;
        std::exception_ptr error;
    };
    std::vector<SPipe> pipes(s_values.size());
    const bool par_s = cfg.threads > 1 && s_values.size() > 1;
    auto run_pipe = [&](size_t si) {
        try {
            const size_t s = s_values[si];
            const LevelVectorSet& src = lower.at(l - static_cast<int64_t>(s) + 1);
            std::vector<std::vector<int32_t>> rows(src.count, std::vector<int32_t>(src.dim));
            for (size_t i = 0; i < src.count; ++i) src.fill_row(i, rows[i].data());
            const int64_t cap = static_cast<int64_t>(s) * src.quant_scale;
            const uint64_t sd = stream(cfg.seed, "level", static_cast<uint64_t>(m), s);
            GridSketchParams gp = cfg.sketch_params(src.dim, src.coord_bound, s, cap, sd);
            WindowSketchSet sk = minproduct_sketch(view_of(rows), gp);
            rows.clear();
            rows.shrink_to_fit();

            ReduceParams rp = cfg.reduce_params(stream(sd, "reduce"));
            if (par_s) rp.threads = 1;  // the s-loop already owns the workers
            pipes[si].rv = reduce_minprod_to_l1(sk, rp);
            // Scale so stored l1 differences contribute c * TEMD * quant_scale.
            const double sketch_norm = sketch_distance_scale(gp, cfg.cauchy_norm);
            pipes[si].alpha = cfg.c_norm * static_cast<double>(cfg.quant_scale) /
                              (pipes[si].rv.scale * sketch_norm *
                               static_cast<double>(src.quant_scale));
        } catch (...) {
            pipes[si].error = std::current_exception();
        }
    };
    if (!par_s) {
        for (size_t si = 0; si < s_values.size(); ++si) run_pipe(si);
    } else {
        const size_t nt = std::min(cfg.threads, s_values.size());
        std::vector<std::thread> pool;
        for (size_t t = 0; t < nt; ++t)
            pool.emplace_back([&, t] {
                for (size_t si = t; si < s_values.size(); si += nt) run_pipe(si);
            });
        for (auto& th : pool) th.join();
    }
    for (auto& pi : pipes)
        if (pi.error) std::rethrow_exception(pi.error);

    size_t dim_total = 0;
    for (const auto& pi : pipes) dim_total += static_cast<size_t>(b) * pi.rv.dim;
    out.dim = dim_total;
    out.ints.assign(out.count * dim_total, 0);

    constexpr int64_t kCoordCap = (int64_t{1} << 30) - 1;
    int32_t bound = 1;
    for (size_t ti = 0; ti < targets.size(); ++ti) {
        const size_t i = targets[ti];
        int32_t* row = out.ints.data() + i * dim_total;
        size_t off = 0;
        for (const auto& pi : pipes) {
            for (int64_t blk = 0; blk < b; ++blk) {
                const size_t q_index = i + static_cast<size_t>(blk) * static_cast<size_t>(l);
                const double* qv = pi.rv.vec(q_index);
                for (size_t c = 0; c < pi.rv.dim; ++c) {
                    // saturate at the cap: a coordinate this large is past
                    // every TEMD threshold at the next level anyway
                    double v = qv[c] * pi.alpha;
                    if (v > static_cast<double>(kCoordCap)) v = static_cast<double>(kCoordCap);
                    if (v < -static_cast<double>(kCoordCap)) v = -static_cast<double>(kCoordCap);
                    const int32_t qi = static_cast<int32_t>(std::llround(v));
                    row[off++] = qi;
                    const int32_t a = qi < 0 ? -qi : qi;
                    if (a > bound) bound = a;
                }
            }
        }
    }
    out.coord_bound = bound;
    return out;
}

}  // namespace edapx
