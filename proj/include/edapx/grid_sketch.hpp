#pragma once

// Oblivious sketch of sliding-window TEMD into a min-product of
// low-dimensional l1's. Each window multiset A_i = {v_i .. v_{i+s-1}} is
// mapped through randomly shifted grids (one scale per level) and a 1-stable
// projection; window sketches are maintained by a linear sliding update.
//
// Neither the grid indicator vector nor the projection matrix is ever
// materialized: a singleton occupies one cell per level, and the projection
// column for a cell is regenerated on demand from the seed.

#include <cstdint>
#include <cstring>
#include <functional>
#include <vector>

#include "edapx/errors.hpp"
#include "edapx/prng.hpp"
#include "edapx/product_metrics.hpp"
#include "edapx/util.hpp"

namespace edapx {

struct GridSketchParams {
    size_t dim = 1;            // input vector dimension
    int64_t coord_range = 1;   // M: inputs lie in {-M..M}
    size_t window = 1;         // s: multiset size (TEMD normalizer)
    int64_t cap = 0;           // distance cap in input units; 0 -> window
    size_t levels = 1;         // number of grid scales, side of level i is 2^(i-2)
    size_t proj_dim = 1;       // k
    size_t reps = 1;           // independent repetitions (min-product rows)
    double scale = 1.0;        // grid value multiplier
    uint64_t seed = 1;
    size_t resync_period = 65536;
    size_t param_n = 2;        // the n all log-formulas refer to

    int64_t effective_cap() const { return cap > 0 ? cap : static_cast<int64_t>(window); }

    void validate(size_t input_count) const {
        if (dim < 1 || proj_dim < 1 || reps < 1 || levels < 1)
            throw ConfigError("GridSketchParams: shape constants must be >= 1");
        if (window < 1 || window > input_count)
            throw InvalidInput("GridSketchParams: window size exceeds input count");
        uint64_t n4cap = 1;
        for (int i = 0; i < 4; ++i) {
            n4cap *= param_n;
            if (n4cap > (1ull << 62) / param_n) {
                n4cap = 1ull << 62;
                break;
            }
        }
        if (coord_range < 0 || static_cast<uint64_t>(coord_range) > n4cap)
            throw ConfigError("GridSketchParams: coordinate range exceeds the n^4 cap");
    }
};

// Defaults: k = 4*ceil(log2 n)^3 capped at 512, reps = 2*ceil(log2 n) capped
// at 32, levels sized so the top grid side is on the order of the cap, grid
// scale log2(n)/s.
inline GridSketchParams default_sketch_params(size_t n, size_t dim, int64_t coord_range,
                                              size_t window, uint64_t seed) {
    GridSketchParams p;
    p.dim = dim;
    p.coord_range = coord_range;
    p.window = window;
    p.seed = seed;
    p.param_n = n < 2 ? 2 : n;
    const uint64_t lg = ceil_log2(p.param_n);
    p.proj_dim = std::min<uint64_t>(4 * lg * lg * lg, 512);
    if (p.proj_dim < 1) p.proj_dim = 1;
    p.reps = std::min<uint64_t>(2 * lg, 32);
    if (p.reps < 1) p.reps = 1;
    p.levels = ceil_log2(static_cast<uint64_t>(p.effective_cap())) + 2;
    p.scale = static_cast<double>(lg) / static_cast<double>(window);
    return p;
}

struct SparseGridEntry {
    uint32_t level;  // 1-based; grid side is 2^(level-2)
    CellId cell;
    double value;
};

struct SparseGridPoint {
    std::vector<SparseGridEntry> entries;  // exactly one per level for a singleton
};

namespace detail {

inline double grid_side(uint32_t level) { return std::ldexp(1.0, static_cast<int>(level) - 2); }

inline uint64_t shift_stream(const GridSketchParams& p, uint64_t rep) {
    return stream(p.seed, "grid.shift", rep);
}

}  // namespace detail

// Places an integer vector into the randomly shifted grid at every level.
// rep selects the independent repetition whose shifts are used.
inline SparseGridPoint grid_embed_singleton(const int32_t* v, const GridSketchParams& p,
                                            uint64_t rep = 0) {
    SparseGridPoint out;
    out.entries.reserve(p.levels);
    const uint64_t shifts = detail::shift_stream(p, rep);
    for (uint32_t lvl = 1; lvl <= p.levels; ++lvl) {
        const double side = detail::grid_side(lvl);
        CellIdHasher h(0x517cc1b727220a95ull);
        h.feed(lvl);
        for (size_t t = 0; t < p.dim; ++t) {
            double delta = u01(shifts, (static_cast<uint64_t>(lvl) << 32) | t);
            int64_t c = static_cast<int64_t>(std::floor(static_cast<double>(v[t]) / side + delta));
            h.feed(static_cast<uint64_t>(c));
        }
        out.entries.push_back({lvl, h.finish(), side * p.scale});
    }
    return out;
}

inline SparseGridPoint grid_embed_singleton(const std::vector<int32_t>& v,
                                            const GridSketchParams& p, uint64_t rep = 0) {
    if (v.size() != p.dim) throw InvalidInput("grid_embed_singleton: dimension mismatch");
    return grid_embed_singleton(v.data(), p, rep);
}

namespace detail {

inline uint64_t cauchy_stream(const GridSketchParams& p, uint64_t rep) {
    return stream(p.seed, "cauchy", rep);
}

inline uint64_t cauchy_cell_stream(uint64_t base, const CellId& cell) {
    return hash_combine(hash_combine(base, cell.hi), cell.lo);
}

}  // namespace detail

// Regenerates one column of the implicit Cauchy projection matrix for the
// given repetition and cell. Bit-identical for equal (seed, rep, cell).
inline void cauchy_column(const GridSketchParams& p, uint64_t rep, const CellId& cell,
                          double* out) {
    uint64_t sid = detail::cauchy_cell_stream(detail::cauchy_stream(p, rep), cell);
    for (size_t j = 0; j < p.proj_dim; ++j) out[j] = cauchy_draw(sid, j);
}

inline std::vector<double> cauchy_column(const GridSketchParams& p, uint64_t rep,
                                         const CellId& cell) {
    std::vector<double> col(p.proj_dim);
    cauchy_column(p, rep, cell, col.data());
    return col;
}

// All sketches of one repetition, or all repetitions stacked as min-product
// points, depending on the producing call.
struct WindowSketchSet {
    size_t count = 0;  // number of windows = inputs - s + 1
    size_t rows = 0;   // repetitions
    size_t cols = 0;   // projection dimension
    std::vector<double> data;  // [window][row][col]
    GridSketchParams params;

    double* sketch(size_t i) { return data.data() + i * rows * cols; }
    const double* sketch(size_t i) const { return data.data() + i * rows * cols; }

    MinProductPoint point(size_t i) const {
        MinProductPoint q(rows, cols);
        std::memcpy(q.data.data(), sketch(i), rows * cols * sizeof(double));
        return q;
    }
};

// Read-only view over a sequence of integer vectors. `row(i)` must stay valid
// until the next call; implementations may reuse a scratch buffer.
struct VectorSeqView {
    size_t count = 0;
    size_t dim = 0;
    std::function<const int32_t*(size_t)> row;
};

inline VectorSeqView view_of(const std::vector<std::vector<int32_t>>& vecs) {
    VectorSeqView v;
    v.count = vecs.size();
    v.dim = vecs.empty() ? 0 : vecs[0].size();
    v.row = [&vecs](size_t i) { return vecs[i].data(); };
    return v;
}

namespace detail {

// Precomputed per-repetition state for the hot projection loop: grid shifts
// for every (level, coordinate) and the per-level inverse sides and values.
struct ProjectionPass {
    const GridSketchParams& p;
    uint64_t cauchy_base;
    std::vector<double> shifts;    // [level][coord]
    std::vector<double> inv_side;  // 1 / grid side per level
    std::vector<double> value;     // side * scale per level

    ProjectionPass(const GridSketchParams& params, uint64_t rep)
        : p(params), cauchy_base(cauchy_stream(params, rep)) {
        const uint64_t ssid = shift_stream(p, rep);
        shifts.resize(p.levels * p.dim);
        inv_side.resize(p.levels);
        value.resize(p.levels);
        for (uint32_t lvl = 1; lvl <= p.levels; ++lvl) {
            const double side = grid_side(lvl);
            inv_side[lvl - 1] = 1.0 / side;
            value[lvl - 1] = side * p.scale;
            for (size_t t = 0; t < p.dim; ++t)
                shifts[(lvl - 1) * p.dim + t] =
                    u01(ssid, (static_cast<uint64_t>(lvl) << 32) | t);
        }
    }

    // Projects one singleton into `slot` (overwritten) and adds it to acc.
    void project(const int32_t* v, double* acc, double* slot) const {
        const size_t k = p.proj_dim;
        std::memset(slot, 0, k * sizeof(double));
        for (uint32_t lvl = 1; lvl <= p.levels; ++lvl) {
            CellIdHasher h(0x517cc1b727220a95ull);
            h.feed(lvl);
            const double* sh = shifts.data() + (lvl - 1) * p.dim;
            const double inv = inv_side[lvl - 1];
            for (size_t t = 0; t < p.dim; ++t) {
                int64_t c = static_cast<int64_t>(
                    std::floor(static_cast<double>(v[t]) * inv + sh[t]));
                h.feed(static_cast<uint64_t>(c));
            }
            const uint64_t sid = cauchy_cell_stream(cauchy_base, h.finish());
            const double val = value[lvl - 1];
            for (size_t j = 0; j < k; ++j) slot[j] += cauchy_draw(sid, j) * val;
        }
        for (size_t j = 0; j < k; ++j) acc[j] += slot[j];
    }
};

}  // namespace detail

// One repetition of the sliding-window pass: q_1 is the sum of the first s
// singleton projections, and each subsequent window adds the entering
// singleton and subtracts the leaving one. The accumulator is rebuilt from
// the ring buffer every resync_period windows to bound float drift.
inline WindowSketchSet sliding_window_sketch(const VectorSeqView& in, const GridSketchParams& p,
                                             uint64_t rep = 0) {
    p.validate(in.count);
    if (in.dim != p.dim) throw InvalidInput("sliding_window_sketch: dimension mismatch");
    const size_t s = p.window, k = p.proj_dim, m = in.count - s + 1;

    WindowSketchSet out;
    out.count = m;
    out.rows = 1;
    out.cols = k;
    out.params = p;
    out.data.assign(m * k, 0.0);

    std::vector<double> ring(s * k, 0.0);  // projections of the current window
    std::vector<double> acc(k, 0.0);
    const detail::ProjectionPass pass(p, rep);

    for (size_t i = 0; i < s; ++i)
        pass.project(in.row(i), acc.data(), &ring[(i % s) * k]);
    std::memcpy(out.sketch(0), acc.data(), k * sizeof(double));

    for (size_t i = 1; i < m; ++i) {
        const size_t leave = i - 1;         // v_{i-1} leaves
        const size_t enter = i + s - 1;     // v_{i+s-1} enters
        double* slot = &ring[(leave % s) * k];
        for (size_t j = 0; j < k; ++j) acc[j] -= slot[j];
        pass.project(in.row(enter), acc.data(), slot);
        if (p.resync_period > 0 && i % p.resync_period == 0) {
            std::memset(acc.data(), 0, k * sizeof(double));
            for (size_t w = 0; w < s; ++w)
                for (size_t j = 0; j < k; ++j) acc[j] += ring[w * k + j];
        }
        std::memcpy(out.sketch(i), acc.data(), k * sizeof(double));
    }
    return out;
}

// Stacks `reps` independent sliding passes into min-product points. The
// min-product distance between two stacked sketches is the sketch estimate
// of TEMD between the corresponding windows (up to the pinned calibration).
inline WindowSketchSet minproduct_sketch(const VectorSeqView& in, const GridSketchParams& p) {
    p.validate(in.count);
    const size_t k = p.proj_dim, m = in.count - p.window + 1;
    WindowSketchSet out;
    out.count = m;
    out.rows = p.reps;
    out.cols = k;
    out.params = p;
    out.data.assign(m * p.reps * k, 0.0);
    for (size_t z = 0; z < p.reps; ++z) {
        GridSketchParams pz = p;
        pz.seed = stream(p.seed, "sketch.rep", z);
        WindowSketchSet one = sliding_window_sketch(in, pz, z);
        for (size_t i = 0; i < m; ++i)
            std::memcpy(out.sketch(i) + z * k, one.sketch(i), k * sizeof(double));
    }
    return out;
}

// Pinned normalization dividing sketch l1 distances back into TEMD units.
// The k*ln(k) term is the typical column mass of the 1-stable projection and
// log2(n) matches the grid value scale; the leading coefficient sits under
// the measured 5th-percentile ratio so calibrated estimates rarely contract.
inline double sketch_distance_scale(const GridSketchParams& p, double coeff = 0.8) {
    const double k = static_cast<double>(p.proj_dim);
    return coeff * k * std::log(k + 1.0) * static_cast<double>(ceil_log2(p.param_n));
}

}  // namespace edapx
