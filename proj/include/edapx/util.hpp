#pragma once

#include <cstdint>
#include <vector>

namespace edapx {

inline uint32_t ceil_log2(uint64_t v) {
    uint32_t r = 0;
    uint64_t p = 1;
    while (p < v) {
        p <<= 1;
        ++r;
    }
    return r;
}

inline uint32_t floor_log2(uint64_t v) {
    uint32_t r = 0;
    while (v > 1) {
        v >>= 1;
        ++r;
    }
    return r;
}

inline double l1_dist(const double* a, const double* b, size_t k) {
    double d = 0.0;
    for (size_t t = 0; t < k; ++t) d += (a[t] > b[t]) ? a[t] - b[t] : b[t] - a[t];
    return d;
}

}  // namespace edapx
