#pragma once

// Rescaling of real-valued min-product sketches to integers: every
// coordinate is multiplied by 2kn and rounded. For per-row distances d >= 1/n
// the rounded distance d' satisfies kn*d <= d' <= 3kn*d, so dividing the
// later tree distances by kn undoes the move up to a factor in [1,3].

#include <cmath>
#include <cstdint>
#include <vector>

#include "edapx/errors.hpp"
#include "edapx/grid_sketch.hpp"

namespace edapx {

struct QuantizedSketchSet {
    size_t count = 0;
    size_t rows = 0;
    size_t cols = 0;
    std::vector<int64_t> data;  // [point][row][col]
    int64_t coord_bound = 1;    // max |coordinate| after scaling (>= 1)
    double divisor = 1.0;       // kn; later stages divide edge lengths by it

    int64_t* point(size_t i) { return data.data() + i * rows * cols; }
    const int64_t* point(size_t i) const { return data.data() + i * rows * cols; }
    const int64_t* row(size_t i, size_t r) const { return point(i) + r * cols; }
};

inline QuantizedSketchSet quantize_minproduct(const WindowSketchSet& in, size_t k, size_t n) {
    if (k != in.cols) throw InvalidInput("quantize_minproduct: k mismatch");
    if (n < 1) throw InvalidInput("quantize_minproduct: n must be positive");
    const double mult = 2.0 * static_cast<double>(k) * static_cast<double>(n);
    constexpr double kLimit = 4.6e18;  // must round into int64

    QuantizedSketchSet out;
    out.count = in.count;
    out.rows = in.rows;
    out.cols = in.cols;
    out.divisor = 0.5 * mult;  // kn
    out.data.resize(in.data.size());
    int64_t bound = 1;
    for (size_t i = 0; i < in.data.size(); ++i) {
        double scaled = in.data[i] * mult;
        if (!(std::fabs(scaled) < kLimit))
            throw ConfigError("quantize_minproduct: scaled coordinate overflows 64-bit range");
        int64_t q = std::llround(scaled);
        out.data[i] = q;
        int64_t a = q < 0 ? -q : q;
        if (a > bound) bound = a;
    }
    out.coord_bound = bound;
    return out;
}

}  // namespace edapx
