#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace perc {

// Union-find with path compression and union by size. Supports extra virtual
// nodes (used for wiring whole boundary arcs together in crossing queries).
class UnionFind {
public:
    explicit UnionFind(int32_t n = 0) { reset(n); }

    void reset(int32_t n) {
        parent_.resize(n);
        std::iota(parent_.begin(), parent_.end(), 0);
        size_.assign(n, 1);
    }

    int32_t add() {
        parent_.push_back((int32_t)parent_.size());
        size_.push_back(1);
        return (int32_t)parent_.size() - 1;
    }

    int32_t find(int32_t x) {
        int32_t root = x;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[x] != root) {
            int32_t next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }

    void merge(int32_t a, int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

    bool connected(int32_t a, int32_t b) { return find(a) == find(b); }
    int32_t component_size(int32_t a) { return size_[find(a)]; }
    int32_t count() const { return (int32_t)parent_.size(); }

private:
    std::vector<int32_t> parent_;
    std::vector<int32_t> size_;
};

} // namespace perc
