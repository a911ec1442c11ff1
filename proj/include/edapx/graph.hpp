#pragma once

// Sparse nonnegative-weighted graph in CSR form plus multi-source Dijkstra.
// Edge weights are unsigned integers; callers carry any real-valued unit
// separately. Integer weights make shortest-path values exact and let
// Dijkstra run on a monotone radix heap.

#include <cstdint>
#include <limits>
#include <vector>

#include "edapx/errors.hpp"
#include "edapx/util.hpp"

namespace edapx {

inline constexpr uint64_t kUnreached = std::numeric_limits<uint64_t>::max();

class WeightedGraph {
  public:
    WeightedGraph() = default;
    explicit WeightedGraph(size_t vertices) : offsets_(vertices + 1, 0) {}

    void add_edge(uint32_t u, uint32_t v, uint64_t w) {
        pending_.push_back({u, v, w});
        pending_.push_back({v, u, w});
    }

    void finalize() {
        const size_t n = vertex_count();
        std::vector<uint32_t> deg(n, 0);
        for (const auto& e : pending_) ++deg[e.u];
        offsets_.assign(n + 1, 0);
        for (size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
        targets_.resize(pending_.size());
        weights_.resize(pending_.size());
        std::vector<uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
        for (const auto& e : pending_) {
            uint32_t slot = cursor[e.u]++;
            targets_[slot] = e.v;
            weights_[slot] = e.w;
        }
        pending_.clear();
        pending_.shrink_to_fit();
    }

    size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    size_t edge_count() const { return targets_.size() / 2; }

    struct NeighborRange {
        const uint32_t* t_begin;
        const uint64_t* w_begin;
        size_t n;
    };
    NeighborRange neighbors(uint32_t u) const {
        return {targets_.data() + offsets_[u], weights_.data() + offsets_[u],
                offsets_[u + 1] - offsets_[u]};
    }

  private:
    struct Edge {
        uint32_t u, v;
        uint64_t w;
    };
    std::vector<Edge> pending_;
    std::vector<uint32_t> offsets_;
    std::vector<uint32_t> targets_;
    std::vector<uint64_t> weights_;
};

namespace detail {

// Monotone priority queue over uint64 keys (radix heap, lazy deletion).
class RadixHeap {
  public:
    RadixHeap() : last_(0), size_(0) {}

    void push(uint64_t key, uint32_t value) {
        buckets_[index(key)].push_back({key, value});
        ++size_;
    }

    bool empty() const { return size_ == 0; }

    std::pair<uint64_t, uint32_t> pop() {
        if (buckets_[0].empty()) {
            size_t b = 1;
            while (buckets_[b].empty()) ++b;
            uint64_t mn = buckets_[b][0].first;
            for (const auto& kv : buckets_[b])
                if (kv.first < mn) mn = kv.first;
            last_ = mn;
            for (const auto& kv : buckets_[b]) buckets_[index(kv.first)].push_back(kv);
            buckets_[b].clear();
        }
        auto out = buckets_[0].back();
        buckets_[0].pop_back();
        --size_;
        return out;
    }

  private:
    size_t index(uint64_t key) const {
        uint64_t x = key ^ last_;
        return x == 0 ? 0 : 64 - static_cast<size_t>(__builtin_clzll(x));
    }

    std::vector<std::pair<uint64_t, uint32_t>> buckets_[65];
    uint64_t last_;
    size_t size_;
};

}  // namespace detail

// Multi-source Dijkstra; dist[v] = exact integer distance to the nearest
// source, kUnreached where disconnected.
inline void multi_source_dijkstra(const WeightedGraph& g, const std::vector<uint32_t>& sources,
                                  std::vector<uint64_t>& dist) {
    dist.assign(g.vertex_count(), kUnreached);
    detail::RadixHeap heap;
    for (uint32_t s : sources) {
        if (dist[s] != 0) {
            dist[s] = 0;
            heap.push(0, s);
        }
    }
    while (!heap.empty()) {
        auto [d, u] = heap.pop();
        if (d != dist[u]) continue;  // stale entry
        auto nb = g.neighbors(u);
        for (size_t i = 0; i < nb.n; ++i) {
            uint64_t nd = d + nb.w_begin[i];
            uint32_t v = nb.t_begin[i];
            if (nd < dist[v]) {
                dist[v] = nd;
                heap.push(nd, v);
            }
        }
    }
}

inline std::vector<uint64_t> single_source_dijkstra(const WeightedGraph& g, uint32_t source) {
    std::vector<uint64_t> dist;
    multi_source_dijkstra(g, {source}, dist);
    return dist;
}

}  // namespace edapx
