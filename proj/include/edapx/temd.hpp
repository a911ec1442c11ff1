#pragma once

// Thresholded Earth-Mover Distance between equal-size integer point
// multisets: (1/s) * min over bijections of the per-pair l1 costs, each
// capped at the threshold t (t = s unless stated otherwise). Exact via the
// Hungarian algorithm on the thresholded cost matrix.

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <vector>

#include "edapx/errors.hpp"
#include "edapx/rational.hpp"

namespace edapx {

// Multiset of integer vectors of a common dimension.
struct PointSet {
    std::vector<std::vector<int64_t>> points;
    int64_t threshold = 0;  // 0 means "use the set size"

    PointSet() = default;
    explicit PointSet(std::vector<std::vector<int64_t>> pts, int64_t t = 0)
        : points(std::move(pts)), threshold(t) {
        if (points.empty()) throw InvalidInput("PointSet: size must be >= 1");
        for (const auto& p : points)
            if (p.size() != points[0].size())
                throw InvalidInput("PointSet: mixed dimensions");
    }

    size_t size() const { return points.size(); }
    size_t dim() const { return points[0].size(); }
    int64_t effective_threshold() const {
        return threshold > 0 ? threshold : static_cast<int64_t>(size());
    }
};

inline int64_t l1_int(const std::vector<int64_t>& a, const std::vector<int64_t>& b) {
    int64_t d = 0;
    for (size_t t = 0; t < a.size(); ++t) d += std::llabs(a[t] - b[t]);
    return d;
}

// Minimum-cost perfect matching on an s x s int64 cost matrix (row-major).
// Classic potentials formulation, O(s^3).
inline int64_t min_cost_assignment(const std::vector<int64_t>& cost, size_t s) {
    const int64_t kInf = std::numeric_limits<int64_t>::max() / 4;
    std::vector<int64_t> u(s + 1, 0), v(s + 1, 0);
    std::vector<size_t> match(s + 1, 0);  // column -> row (1-based, 0 = free)
    std::vector<size_t> way(s + 1, 0);
    for (size_t i = 1; i <= s; ++i) {
        match[0] = i;
        size_t j0 = 0;
        std::vector<int64_t> minv(s + 1, kInf);
        std::vector<char> used(s + 1, 0);
        do {
            used[j0] = 1;
            size_t i0 = match[j0], j1 = 0;
            int64_t delta = kInf;
            for (size_t j = 1; j <= s; ++j) {
                if (used[j]) continue;
                int64_t cur = cost[(i0 - 1) * s + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (size_t j = 0; j <= s; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    int64_t total = 0;
    for (size_t j = 1; j <= s; ++j) total += cost[(match[j] - 1) * s + (j - 1)];
    return total;
}

// Exact TEMD. Returns a rational: the matching cost is an integer and the
// result divides it by the set size.
inline Rational temd_exact(const PointSet& a, const PointSet& b) {
    if (a.size() != b.size()) throw InvalidInput("temd_exact: |A| != |B|");
    if (a.dim() != b.dim()) throw InvalidInput("temd_exact: dimension mismatch");
    const size_t s = a.size();
    const int64_t t = a.effective_threshold();
    std::vector<int64_t> cost(s * s);
    for (size_t i = 0; i < s; ++i)
        for (size_t j = 0; j < s; ++j)
            cost[i * s + j] = std::min(l1_int(a.points[i], b.points[j]), t);
    return Rational(min_cost_assignment(cost, s), static_cast<int64_t>(s));
}

}  // namespace edapx
