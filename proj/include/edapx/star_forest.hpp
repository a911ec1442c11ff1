#pragma once

// Thresholded grid hashing of min-product rows into star-shaped tree metrics,
// and the collapse of a forest list into one sparse weighted graph.
//
// A forest is stored as an assignment point -> cell only; its tree is implied:
// points sharing a cell sit at distance intra_weight (one star), points in
// different cells at inter_weight (stars joined through a root). Edge lengths
// are kept in integer half-units; the real-valued unit is carried separately.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <vector>

#include "edapx/errors.hpp"
#include "edapx/graph.hpp"
#include "edapx/prng.hpp"
#include "edapx/quantize.hpp"
#include "edapx/util.hpp"

namespace edapx {

struct StarForest {
    std::vector<CellId> assignment;  // one cell per point index
    int64_t intra_weight = 1;        // 2^t: distance inside a star
    int64_t inter_weight = 2;        // 2Mk: distance across stars
    double post_scale = 1.0;         // multiplier applied to every edge

    // Tree distance between two point indices (in post_scale units).
    double tree_distance(size_t a, size_t b) const {
        if (a == b) return 0.0;
        const double w = assignment[a] == assignment[b]
                             ? static_cast<double>(intra_weight)
                             : static_cast<double>(inter_weight);
        return w * post_scale;
    }
};

struct ForestHashParams {
    uint64_t seed = 1;
    size_t param_n = 2;     // ambient n for log factors
    size_t reps = 0;        // repetitions per (threshold, row); 0 -> ceil(log2 n)
    uint32_t t_min = 0;     // smallest threshold exponent
    int32_t t_max = -1;     // largest exponent; -1 -> ceil(log2 coord_bound)
    bool sample_t_max = false;  // cap t_max near the sampled max pair distance
    double post_scale = 0;  // 0 -> ceil(log2 n)  (the lemma's final edge multiplier)

    size_t effective_reps() const { return reps > 0 ? reps : ceil_log2(param_n); }
    double effective_post_scale() const {
        return post_scale > 0 ? post_scale : static_cast<double>(ceil_log2(param_n));
    }
};

namespace detail {

// Hashes one integer row under a randomly shifted grid of side 2^t.
// Integer shifts are exact: floor((x+u)/2^t) = (x+u) >> t.
inline CellId hash_row(const int64_t* row, size_t k, uint32_t t, uint64_t shift_sid) {
    CellIdHasher h(0x2545f4914f6cdd1dull);
    const uint64_t mask = t >= 63 ? ~0ull : ((1ull << t) - 1);
    for (size_t j = 0; j < k; ++j) {
        int64_t u = static_cast<int64_t>(mix64(shift_sid ^ mix64(j)) & mask);
        h.feed(static_cast<uint64_t>((row[j] + u) >> t));
    }
    return h.finish();
}

}  // namespace detail

// One forest per (threshold 2^t, min-product row, repetition). Requires the
// integer coordinates produced by quantize_minproduct.
inline std::vector<StarForest> minprod_to_star_forests(const QuantizedSketchSet& pts,
                                                       const ForestHashParams& fp) {
    if (pts.count == 0) throw InvalidInput("minprod_to_star_forests: no points");
    uint32_t t_max = fp.t_max >= 0 ? static_cast<uint32_t>(fp.t_max)
                                   : ceil_log2(static_cast<uint64_t>(pts.coord_bound));
    uint32_t t_min = fp.t_min;
    if (fp.t_max < 0 && fp.sample_t_max && pts.count > 1) {
        // Thresholds far outside the observed pair-distance range add nothing:
        // above the diameter every forest reproduces the 2Mk cap, and below
        // the closest distinct pair every cell is a singleton. Pair distances
        // are sampled over all adjacent windows (structurally the closest)
        // plus random pairs.
        const uint64_t sid = stream(fp.seed, "forest.sample");
        int64_t max_d = 1;
        int64_t min_d = std::numeric_limits<int64_t>::max();
        auto scan_pair = [&](size_t i, size_t j) {
            int64_t best_row = std::numeric_limits<int64_t>::max();
            for (size_t r = 0; r < pts.rows; ++r) {
                int64_t d = 0;
                const int64_t* a = pts.row(i, r);
                const int64_t* b = pts.row(j, r);
                for (size_t c = 0; c < pts.cols; ++c) d += std::llabs(a[c] - b[c]);
                if (d > max_d) max_d = d;
                if (d < best_row) best_row = d;
            }
            if (best_row > 0 && best_row < min_d) min_d = best_row;
        };
        for (size_t i = 0; i + 1 < pts.count; ++i) scan_pair(i, i + 1);
        for (size_t t = 0; t < 256; ++t) {
            const size_t i = mix64(sid ^ mix64(2 * t)) % pts.count;
            size_t j = mix64(sid ^ mix64(2 * t + 1)) % pts.count;
            if (i == j) j = (j + 1) % pts.count;
            scan_pair(i, j);
        }
        const uint32_t hi = ceil_log2(static_cast<uint64_t>(max_d)) + 2;
        if (hi < t_max) t_max = hi;
        if (min_d != std::numeric_limits<int64_t>::max() && min_d > 4) {
            const uint32_t lo = floor_log2(static_cast<uint64_t>(min_d)) - 2;
            if (lo > t_min) t_min = lo;
        }
        if (t_min > t_max) t_min = t_max;
    }
    if (t_min > t_max) throw ConfigError("minprod_to_star_forests: empty threshold range");
    const size_t reps = fp.effective_reps();
    const double post = fp.effective_post_scale();
    if (pts.coord_bound > std::numeric_limits<int64_t>::max() / (4 * static_cast<int64_t>(pts.cols)))
        throw ConfigError("minprod_to_star_forests: coordinate bound overflows edge weights");
    const int64_t inter = 2 * pts.coord_bound * static_cast<int64_t>(pts.cols);

    std::vector<StarForest> forests;
    forests.reserve((t_max - t_min + 1) * pts.rows * reps);
    for (uint32_t t = t_min; t <= t_max; ++t) {
        for (size_t r = 0; r < pts.rows; ++r) {
            for (size_t rep = 0; rep < reps; ++rep) {
                StarForest f;
                f.intra_weight = int64_t{1} << t;
                f.inter_weight = inter;
                f.post_scale = post;
                f.assignment.resize(pts.count);
                const uint64_t sid = stream(fp.seed, "forest.shift", t, r, rep);
                for (size_t i = 0; i < pts.count; ++i)
                    f.assignment[i] = detail::hash_row(pts.row(i, r), pts.cols, t, sid);
                forests.push_back(std::move(f));
            }
        }
    }
    return forests;
}

// Collapsed graph: one shared vertex per point plus, per forest, a center
// vertex per occupied multi-point cell and a root vertex. Integer weights are
// in half-units (stored w = 2x the real edge length before scaling), so
// star diameters and the 2Mk cross-star distance are exact integers.
struct CollapsedGraph {
    WeightedGraph graph;
    size_t point_count = 0;
    double weight_unit = 1.0;  // real length = integer distance * weight_unit
};

inline CollapsedGraph forests_to_graph(const std::vector<StarForest>& forests, double gamma) {
    if (forests.empty()) throw InvalidInput("forests_to_graph: no forests");
    if (gamma <= 0) throw ConfigError("forests_to_graph: gamma must be positive");
    const size_t P = forests[0].assignment.size();
    for (const auto& f : forests) {
        if (f.assignment.size() != P)
            throw InvalidInput("forests_to_graph: inconsistent point universes");
        if (f.post_scale != forests[0].post_scale)
            throw InvalidInput("forests_to_graph: forests disagree on post_scale");
        if (f.intra_weight >= f.inter_weight)
            throw InvalidInput("forests_to_graph: intra_weight must be < inter_weight");
    }

    // Count vertices first: multi-point cells get centers, singletons attach
    // straight to the forest root at the same distance.
    size_t vertices = P;
    std::vector<std::vector<uint32_t>> cell_of(forests.size());
    std::vector<uint32_t> multi_cells(forests.size());
    {
        std::vector<std::pair<CellId, uint32_t>> order;
        for (size_t fi = 0; fi < forests.size(); ++fi) {
            const auto& f = forests[fi];
            order.assign(P, {});
            for (size_t i = 0; i < P; ++i) order[i] = {f.assignment[i], static_cast<uint32_t>(i)};
            std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
                if (a.first.hi != b.first.hi) return a.first.hi < b.first.hi;
                if (a.first.lo != b.first.lo) return a.first.lo < b.first.lo;
                return a.second < b.second;
            });
            auto& cells = cell_of[fi];
            cells.assign(P, 0);
            uint32_t cell_idx = 0;
            size_t i = 0;
            while (i < P) {
                size_t j = i;
                while (j < P && order[j].first == order[i].first) ++j;
                const bool multi = (j - i) > 1;
                for (size_t q = i; q < j; ++q)
                    cells[order[q].second] = multi ? cell_idx : UINT32_MAX;  // MAX: singleton
                if (multi) ++cell_idx;
                i = j;
            }
            multi_cells[fi] = cell_idx;
            vertices += cell_idx + 1;  // centers + root
        }
    }

    CollapsedGraph out;
    out.point_count = P;
    out.weight_unit = 0.5 * forests[0].post_scale * gamma;
    out.graph = WeightedGraph(vertices);

    uint32_t next = static_cast<uint32_t>(P);
    for (size_t fi = 0; fi < forests.size(); ++fi) {
        const auto& f = forests[fi];
        const uint32_t center_base = next;
        next += multi_cells[fi];
        const uint32_t root = next++;
        const uint64_t intra = static_cast<uint64_t>(f.intra_weight);
        const uint64_t inter = static_cast<uint64_t>(f.inter_weight);
        for (size_t i = 0; i < P; ++i) {
            uint32_t c = cell_of[fi][i];
            if (c == UINT32_MAX)
                out.graph.add_edge(static_cast<uint32_t>(i), root, inter);  // = Mk real
            else
                out.graph.add_edge(static_cast<uint32_t>(i), center_base + c, intra);
        }
        for (uint32_t c = 0; c < multi_cells[fi]; ++c)
            out.graph.add_edge(center_base + c, root, inter - intra);
    }
    out.graph.finalize();
    return out;
}

}  // namespace edapx
