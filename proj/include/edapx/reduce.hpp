#pragma once

// Composition of the non-oblivious reduction: integer quantization ->
// thresholded star forests -> collapsed sparse graph -> Bourgain embedding.
// Takes the real-valued min-product sketches of a window family and returns
// low-dimensional l1 vectors whose distances track the sketch (and hence
// TEMD) distances up to the recorded scale.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "edapx/bourgain.hpp"
#include "edapx/quantize.hpp"
#include "edapx/star_forest.hpp"

namespace edapx {

struct ReduceParams {
    uint64_t seed = 1;
    size_t param_n = 2;
    size_t forest_reps = 0;    // per (threshold, row); 0 -> ceil(log2 n)
    uint32_t t_min = 0;        // thresholds start at 2^t_min
    double lemma3_mult = 0;    // 0 -> ceil(log2 n)
    double gamma = 0;          // near-metric bound; 0 -> ceil(log2 n)^3
    size_t bourgain_sizes = 0;
    size_t bourgain_reps = 0;  // 0 -> 2*ceil(log2 n)
    double bourgain_mult = 0;  // 0 -> ceil(log2 n)
    double residual_norm = 0;  // raw-Bourgain mass divisor; 0 -> 0.6 * reps_per_size
    size_t outer_reps = 4;     // independent reduction copies, concatenated
    bool sample_t_max = true;  // skip thresholds beyond the sampled diameter
    size_t threads = 1;

    double effective_gamma() const {
        if (gamma > 0) return gamma;
        const double lg = static_cast<double>(ceil_log2(param_n));
        return lg * lg * lg;
    }
};

struct ReducedVectors {
    size_t count = 0;
    size_t dim = 0;
    std::vector<double> data;  // [point][coord]
    double scale = 1.0;        // l1 distance / scale ~= sketch-unit TEMD estimate

    const double* vec(size_t i) const { return data.data() + i * dim; }

    double raw_distance(size_t i, size_t j) const { return l1_dist(vec(i), vec(j), dim); }
    double estimate(size_t i, size_t j) const { return raw_distance(i, j) / scale; }
};

namespace detail {

// Groups identical quantized points; identical windows must land on the same
// graph vertex so their output vectors coincide exactly.
inline void dedupe_points(const QuantizedSketchSet& q, std::vector<uint32_t>& rep_of,
                          std::vector<uint32_t>& reps) {
    struct KeyHash {
        size_t operator()(const CellId& c) const { return static_cast<size_t>(c.hi ^ c.lo); }
    };
    std::unordered_map<CellId, uint32_t, KeyHash> seen;
    seen.reserve(q.count * 2);
    rep_of.assign(q.count, 0);
    reps.clear();
    const size_t stride = q.rows * q.cols;
    for (size_t i = 0; i < q.count; ++i) {
        CellIdHasher h(0x6a09e667f3bcc909ull);
        const int64_t* p = q.point(i);
        for (size_t t = 0; t < stride; ++t) h.feed(static_cast<uint64_t>(p[t]));
        CellId key = h.finish();
        auto [it, inserted] = seen.try_emplace(key, static_cast<uint32_t>(reps.size()));
        if (inserted) reps.push_back(static_cast<uint32_t>(i));
        rep_of[i] = it->second;
    }
}

}  // namespace detail

inline ReducedVectors reduce_minprod_to_l1(const WindowSketchSet& sketches,
                                           const ReduceParams& rp) {
    const size_t n = rp.param_n;
    const size_t outer = rp.outer_reps < 1 ? 1 : rp.outer_reps;
    QuantizedSketchSet q = quantize_minproduct(sketches, sketches.cols, n);

    std::vector<uint32_t> rep_of, reps;
    detail::dedupe_points(q, rep_of, reps);
    QuantizedSketchSet uniq;
    uniq.rows = q.rows;
    uniq.cols = q.cols;
    uniq.count = reps.size();
    uniq.coord_bound = q.coord_bound;
    uniq.divisor = q.divisor;
    uniq.data.resize(uniq.count * q.rows * q.cols);
    for (size_t i = 0; i < reps.size(); ++i)
        std::copy_n(q.point(reps[i]), q.rows * q.cols, uniq.point(i));

    const double lemma3 = rp.lemma3_mult > 0 ? rp.lemma3_mult
                                             : static_cast<double>(ceil_log2(n));
    const double gamma = rp.effective_gamma();

    ReducedVectors out;
    out.count = sketches.count;
    for (size_t ro = 0; ro < outer; ++ro) {
        ForestHashParams fp;
        fp.seed = stream(rp.seed, "reduce.forest", ro);
        fp.param_n = n;
        fp.reps = rp.forest_reps;
        fp.t_min = rp.t_min;
        fp.sample_t_max = rp.sample_t_max;
        fp.post_scale = lemma3 / q.divisor;  // tree distances land back near sketch units
        std::vector<StarForest> forests = minprod_to_star_forests(uniq, fp);
        CollapsedGraph cg = forests_to_graph(forests, gamma);

        BourgainParams bp;
        bp.seed = stream(rp.seed, "reduce.bourgain", ro);
        bp.param_n = n;
        bp.sizes = rp.bourgain_sizes;
        bp.reps_per_size = rp.bourgain_reps;
        bp.final_multiplier = rp.bourgain_mult;
        bp.threads = rp.threads;
        BourgainEmbedding emb = bourgain_embed(cg, bp);

        if (ro == 0) {
            const double residual = rp.residual_norm > 0
                                        ? rp.residual_norm
                                        : 0.6 * static_cast<double>(bp.effective_reps());
            out.dim = outer * emb.dim;
            // quantize+unscale lands in [1,3]x, centered at 2
            out.scale = 2.0 * lemma3 * gamma * emb.multiplier * residual;
            out.data.assign(out.count * out.dim, 0.0);
        }
        // copies are averaged: concatenation scaled by 1/outer keeps the l1
        // distance at the mean of the independent copies
        const double unit = emb.unit * emb.multiplier / static_cast<double>(outer);
        for (size_t i = 0; i < out.count; ++i) {
            const uint64_t* src = emb.raw.data() + static_cast<size_t>(rep_of[i]) * emb.dim;
            double* dst = out.data.data() + i * out.dim + ro * emb.dim;
            for (size_t c = 0; c < emb.dim; ++c) dst[c] = static_cast<double>(src[c]) * unit;
        }
    }
    return out;
}

}  // namespace edapx
