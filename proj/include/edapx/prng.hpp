#pragma once

// Deterministic seeded randomness. Every random quantity in the library is
// derived from one master seed through named streams (label + indices), so
// any subcomputation can be reproduced in isolation.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <string_view>

namespace edapx {

inline constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// splitmix64 finalizer
inline uint64_t mix64(uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t h, uint64_t v) {
    return mix64(h ^ (v + kGolden + (h << 6) + (h >> 2)));
}

// 64-bit stream id from a master seed, a component label and indices.
inline uint64_t stream(uint64_t seed, std::string_view label) {
    uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dull);
    uint64_t acc = 0;
    int n = 0;
    for (char c : label) {
        acc = (acc << 8) | static_cast<uint8_t>(c);
        if (++n == 8) {
            h = hash_combine(h, acc);
            acc = 0;
            n = 0;
        }
    }
    return hash_combine(h, acc ^ (static_cast<uint64_t>(label.size()) << 56));
}

template <typename... Ix>
uint64_t stream(uint64_t seed, std::string_view label, Ix... idx) {
    uint64_t h = stream(seed, label);
    ((h = hash_combine(h, static_cast<uint64_t>(idx))), ...);
    return h;
}

// Uniform in [0,1) from a stream id and a counter.
inline double u01(uint64_t sid, uint64_t counter) {
    return static_cast<double>(mix64(sid ^ mix64(counter)) >> 11) * 0x1.0p-53;
}

// Standard Cauchy via the inverse CDF tan(pi*(u - 1/2)). u is kept away from
// {0,1} by 2^-40 and the result clamped to +-2^16: a draw past the clamp
// already dominates its whole row, and larger values only inflate the
// integer edge weights (which grow as clamp * 4k^2 n) toward overflow.
inline double cauchy_draw(uint64_t sid, uint64_t counter) {
    constexpr double kEps = 0x1.0p-40;
    constexpr double kClamp = 0x1.0p16;
    double u = u01(sid, counter);
    if (u < kEps) u = kEps;
    if (u > 1.0 - kEps) u = 1.0 - kEps;
    double v = std::tan(M_PI * (u - 0.5));
    if (v > kClamp) v = kClamp;
    if (v < -kClamp) v = -kClamp;
    return v;
}

// 128-bit identifier, used for grid cells. Two independently salted lanes.
struct CellId {
    uint64_t hi = 0;
    uint64_t lo = 0;

    friend bool operator==(const CellId&, const CellId&) = default;
};

struct CellIdHasher {
    uint64_t state_hi;
    uint64_t state_lo;

    explicit CellIdHasher(uint64_t salt)
        : state_hi(mix64(salt ^ 0xa0761d6478bd642full)),
          state_lo(mix64(salt ^ 0xe7037ed1a0b428dbull)) {}

    void feed(uint64_t v) {
        state_hi = hash_combine(state_hi, v);
        state_lo = hash_combine(state_lo, v ^ 0x8ebc6af09c88c6e3ull);
    }

    CellId finish() const { return CellId{mix64(state_hi), mix64(state_lo)}; }
};

}  // namespace edapx
