#pragma once

// Near-linear Bourgain embedding of a sparse graph metric: one coordinate per
// (set-size exponent j, repetition), each the exact integer distance to a
// random vertex subset computed by one multi-source Dijkstra run.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "edapx/errors.hpp"
#include "edapx/graph.hpp"
#include "edapx/prng.hpp"
#include "edapx/star_forest.hpp"
#include "edapx/util.hpp"

namespace edapx {

struct BourgainParams {
    size_t sizes = 0;          // number of sampling scales; 0 -> floor(log2 P)
    size_t reps_per_size = 0;  // coordinates per scale; 0 -> 2*ceil(log2 n)
    uint64_t seed = 1;
    size_t param_n = 2;
    double final_multiplier = 0;  // 0 -> ceil(log2 n); recorded, not applied
    size_t threads = 1;

    size_t effective_sizes(size_t points) const {
        size_t s = sizes > 0 ? sizes : floor_log2(points);
        return s < 1 ? 1 : s;
    }
    size_t effective_reps() const {
        size_t r = reps_per_size > 0 ? reps_per_size : 2 * ceil_log2(param_n);
        return r < 1 ? 1 : r;
    }
    double effective_multiplier() const {
        return final_multiplier > 0 ? final_multiplier
                                    : static_cast<double>(ceil_log2(param_n));
    }
};

struct BourgainEmbedding {
    size_t count = 0;  // embedded points (vertex ids [0, count))
    size_t dim = 0;
    std::vector<uint64_t> raw;  // [point][coord], integer distance units
    double unit = 1.0;          // graph weight unit
    double multiplier = 1.0;    // non-contraction multiplier to apply once

    uint64_t coord(size_t p, size_t c) const { return raw[p * dim + c]; }

    // l1 distance in real units with the calibration multiplier applied.
    double distance(size_t a, size_t b) const {
        uint64_t d = 0;
        const uint64_t* ra = raw.data() + a * dim;
        const uint64_t* rb = raw.data() + b * dim;
        for (size_t c = 0; c < dim; ++c) d += ra[c] > rb[c] ? ra[c] - rb[c] : rb[c] - ra[c];
        return static_cast<double>(d) * unit * multiplier;
    }
};

namespace detail {

// Samples point-vertices with probability 2^-(j+1) for scale index j.
// One resample on an empty draw, then a deterministic singleton fallback.
inline std::vector<uint32_t> bourgain_sample(size_t points, size_t j, size_t rep,
                                             uint64_t seed) {
    for (uint64_t attempt = 0; attempt < 2; ++attempt) {
        const uint64_t sid = stream(seed, "bourgain.sample", j, rep, attempt);
        const double prob = std::ldexp(1.0, -static_cast<int>(j + 1));
        std::vector<uint32_t> set;
        for (size_t p = 0; p < points; ++p)
            if (u01(sid, p) < prob) set.push_back(static_cast<uint32_t>(p));
        if (!set.empty()) return set;
    }
    const uint64_t sid = stream(seed, "bourgain.fallback", j, rep);
    return {static_cast<uint32_t>(mix64(sid) % points)};
}

}  // namespace detail

// Embeds the first `cg.point_count` vertices. Auxiliary star/root vertices
// participate in shortest paths but are never sampled into the sets.
inline BourgainEmbedding bourgain_embed(const CollapsedGraph& cg, const BourgainParams& bp) {
    const size_t P = cg.point_count;
    if (P == 0 || P > cg.graph.vertex_count())
        throw InvalidInput("bourgain_embed: bad point vertex range");
    const size_t sizes = bp.effective_sizes(P);
    const size_t reps = bp.effective_reps();

    BourgainEmbedding out;
    out.count = P;
    out.dim = sizes * reps;
    out.unit = cg.weight_unit;
    out.multiplier = bp.effective_multiplier();
    out.raw.assign(P * out.dim, 0);

    std::atomic<bool> connected{true};
    auto run_coord = [&](size_t c) {
        const size_t j = c / reps, rep = c % reps;
        std::vector<uint32_t> set = detail::bourgain_sample(P, j, rep, bp.seed);
        std::vector<uint64_t> dist;
        multi_source_dijkstra(cg.graph, set, dist);
        for (size_t p = 0; p < P; ++p) {
            if (dist[p] == kUnreached) {
                connected.store(false, std::memory_order_relaxed);
                return;
            }
            out.raw[p * out.dim + c] = dist[p];
        }
    };

    const size_t total = out.dim;
    if (bp.threads <= 1) {
        for (size_t c = 0; c < total; ++c) run_coord(c);
    } else {
        const size_t nt = std::min(bp.threads, total);
        std::vector<std::thread> pool;
        for (size_t t = 0; t < nt; ++t)
            pool.emplace_back([&, t] {
                for (size_t c = t; c < total; c += nt) run_coord(c);
            });
        for (auto& th : pool) th.join();
    }
    if (!connected.load()) throw InvalidInput("bourgain_embed: graph is disconnected");
    return out;
}

}  // namespace edapx
