#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "edapx/bitstring.hpp"

namespace edapx {

// Exact Levenshtein distance, two-row O(n*m) dynamic program. This is the
// ground-truth oracle for the whole project; it is only ever run at desk
// scale (n <= a few thousand).
inline uint64_t exact_edit_distance(const BitString& a, const BitString& b) {
    const size_t n = a.size(), m = b.size();
    if (n == 0) return m;
    if (m == 0) return n;
    std::vector<uint64_t> prev(m + 1), cur(m + 1);
    for (size_t j = 0; j <= m; ++j) prev[j] = j;
    for (size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        const uint8_t ai = a[i - 1];
        for (size_t j = 1; j <= m; ++j) {
            uint64_t sub = prev[j - 1] + (ai == b[j - 1] ? 0 : 1);
            uint64_t del = prev[j] + 1;
            uint64_t ins = cur[j - 1] + 1;
            cur[j] = std::min({sub, del, ins});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

}  // namespace edapx
