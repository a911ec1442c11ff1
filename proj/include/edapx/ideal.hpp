#pragma once

// Exact reference for the idealized per-level distance: c times the sum over
// blocks and window sizes of exact TEMD between the lower-level vector sets
// of the two substrings. Brute force (Hungarian per term); test scale only.

#include <cstdint>

#include "edapx/length_set.hpp"
#include "edapx/levels.hpp"
#include "edapx/rational.hpp"
#include "edapx/temd.hpp"

namespace edapx {

// i, j are 0-based starts of length-m substrings. The result is in calibrated
// units: each TEMD term is divided by its level's quantization scale.
inline Rational ideal_distance_exact(const LengthSet& w, int64_t m, size_t i, size_t j,
                                     const LevelStore& lower, int64_t b, int64_t c,
                                     bool include_s1 = true) {
    if (!w.contains(m)) throw InvalidInput("ideal_distance_exact: m not in W");
    if (m <= b * b) throw InvalidInput("ideal_distance_exact: m is a base-case length");
    const int64_t l = m / b;

    Rational total(0);
    if (i == j) return total;
    for (int64_t s = include_s1 ? 1 : 2; s <= l; s *= 2) {
        auto it = lower.find(l - s + 1);
        if (it == lower.end())
            throw MissingDependency("ideal_distance_exact: missing level " +
                                    std::to_string(l - s + 1));
        const LevelVectorSet& src = it->second;
        const size_t max_start = i > j ? i : j;
        if (max_start + static_cast<size_t>((b - 1) * l + s) > src.count)
            throw InvalidInput("ideal_distance_exact: start out of range");
        const int64_t threshold = s * src.quant_scale;
        for (int64_t blk = 0; blk < b; ++blk) {
            std::vector<std::vector<int64_t>> pa, pb;
            pa.reserve(s);
            pb.reserve(s);
            for (int64_t z = 0; z < s; ++z) {
                pa.push_back(src.row64(i + static_cast<size_t>(blk * l + z)));
                pb.push_back(src.row64(j + static_cast<size_t>(blk * l + z)));
            }
            Rational term = temd_exact(PointSet(std::move(pa), threshold),
                                       PointSet(std::move(pb), threshold));
            total += term * Rational(1, src.quant_scale);
        }
    }
    return total * Rational(c);
}

}  // namespace edapx
