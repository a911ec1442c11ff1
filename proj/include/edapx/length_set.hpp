#pragma once

// The set W of substring lengths processed by the recursion: the minimal set
// containing n and closed under m -> floor(m/b) - 2^j + 1 for every m >= b.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "edapx/errors.hpp"
#include "edapx/util.hpp"

namespace edapx {

struct LengthSet {
    std::vector<int64_t> lengths;  // ascending
    int64_t branching = 2;         // b

    bool contains(int64_t m) const {
        return std::binary_search(lengths.begin(), lengths.end(), m);
    }
};

inline std::vector<int64_t> child_lengths(int64_t m, int64_t b, bool include_s1) {
    std::vector<int64_t> out;
    if (m < b) return out;
    const int64_t l = m / b;
    const uint32_t jmax = floor_log2(static_cast<uint64_t>(l));
    for (uint32_t j = include_s1 ? 0 : 1; j <= jmax; ++j)
        out.push_back(l - (int64_t{1} << j) + 1);
    return out;
}

inline LengthSet build_length_set(int64_t n, int64_t b, bool include_s1 = true) {
    if (n < 1) throw InvalidInput("build_length_set: n must be >= 1");
    if (b < 2) throw InvalidInput("build_length_set: b must be >= 2");
    std::set<int64_t> seen{n};
    std::vector<int64_t> work{n};
    while (!work.empty()) {
        int64_t m = work.back();
        work.pop_back();
        for (int64_t c : child_lengths(m, b, include_s1))
            if (seen.insert(c).second) work.push_back(c);
    }
    LengthSet w;
    w.branching = b;
    w.lengths.assign(seen.begin(), seen.end());
    return w;
}

// The closure predicate; the driver asserts it before building levels.
inline bool length_set_closed(const LengthSet& w, bool include_s1 = true) {
    for (int64_t m : w.lengths)
        for (int64_t c : child_lengths(m, w.branching, include_s1))
            if (!w.contains(c)) return false;
    return true;
}

}  // namespace edapx
