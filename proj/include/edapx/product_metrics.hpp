#pragma once

// Product (semi)metrics: points of a min-product of l1's, the min-product
// distance taking the best row, and the additive sum-product distance.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <vector>

#include "edapx/errors.hpp"

namespace edapx {

// An l x k real matrix; one point of the min-product of l copies of l1^k.
struct MinProductPoint {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<double> data;  // row-major

    MinProductPoint() = default;
    MinProductPoint(size_t l, size_t k) : rows(l), cols(k), data(l * k, 0.0) {
        if (l < 1 || k < 1) throw InvalidInput("MinProductPoint: empty shape");
    }

    double* row(size_t r) { return data.data() + r * cols; }
    const double* row(size_t r) const { return data.data() + r * cols; }
};

inline double row_l1(const double* a, const double* b, size_t k) {
    double d = 0.0;
    for (size_t t = 0; t < k; ++t) d += std::abs(a[t] - b[t]);
    return d;
}

// min over rows of the per-row l1 distance (a semimetric).
inline double min_product_distance(const MinProductPoint& x, const MinProductPoint& y) {
    if (x.rows != y.rows || x.cols != y.cols)
        throw InvalidInput("min_product_distance: shape mismatch");
    double best = row_l1(x.row(0), y.row(0), x.cols);
    for (size_t r = 1; r < x.rows; ++r)
        best = std::min(best, row_l1(x.row(r), y.row(r), x.cols));
    return best;
}

// Sum-product over an arbitrary component metric supplied as a callback.
template <typename Point, typename Dist>
double sum_product_distance(const std::vector<Point>& x, const std::vector<Point>& y, Dist d) {
    if (x.size() != y.size()) throw InvalidInput("sum_product_distance: length mismatch");
    double total = 0.0;
    for (size_t i = 0; i < x.size(); ++i) total += d(x[i], y[i]);
    return total;
}

}  // namespace edapx
