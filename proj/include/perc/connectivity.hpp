#pragma once

#include <array>
#include <stdexcept>

#include "perc/config.hpp"
#include "perc/unionfind.hpp"

namespace perc {

// A discrete quad: a site set with four marked boundary arcs ab, bc, cd, da
// in cyclic order. Adjacent arcs share their corner site, matching the
// convention that makes the crossing duality exact on the triangular lattice.
struct Quad {
    RegionPtr region;
    std::array<std::vector<HexCoord>, 4> arcs;

    // Axial rhombus [0,w) x [0,h): arc 0 = bottom row, 1 = right column,
    // 2 = top row, 3 = left column; corners belong to both adjacent arcs.
    static Quad rhombus(int32_t w, int32_t h) {
        if (w < 1 || h < 1) throw std::invalid_argument("rhombus: empty quad");
        std::vector<HexCoord> sites;
        sites.reserve((size_t)w * h);
        for (int32_t r = 0; r < h; ++r)
            for (int32_t q = 0; q < w; ++q) sites.push_back({q, r});
        Quad out;
        out.region = make_region(std::move(sites));
        for (int32_t q = 0; q < w; ++q) {
            out.arcs[0].push_back({q, 0});
            out.arcs[2].push_back({q, h - 1});
        }
        for (int32_t r = 0; r < h; ++r) {
            out.arcs[1].push_back({w - 1, r});
            out.arcs[3].push_back({0, r});
        }
        return out;
    }

    void validate() const {
        if (!region) throw std::invalid_argument("quad: missing region");
        for (const auto& arc : arcs) {
            if (arc.empty()) throw std::invalid_argument("quad: empty arc");
            for (HexCoord h : arc)
                if (!region->contains(h))
                    throw std::invalid_argument("quad: arc site outside region");
        }
    }
};

// Connected components of one color under 6-neighbor adjacency.
class ClusterIndex {
public:
    ClusterIndex(const Configuration& c, Color color) : region_(&c.region()), color_(color) {
        int32_t n = (int32_t)region_->size();
        uf_.reset(n);
        bool want = color == Color::Open;
        for (int32_t i = 0; i < n; ++i) {
            if (c.open_at(i) != want) continue;
            HexCoord h = region_->site(i);
            for (int k = 0; k < 3; ++k) { // 3 of 6 directions suffice for symmetry
                int32_t j = region_->index_of(h + neighbor_dirs()[k]);
                if (j >= 0 && c.open_at(j) == want) uf_.merge(i, j);
            }
        }
        has_ = std::vector<uint8_t>(n);
        for (int32_t i = 0; i < n; ++i) has_[i] = c.open_at(i) == want;
    }

    bool in_cluster(HexCoord h) const {
        int32_t i = region_->index_of(h);
        return i >= 0 && has_[i];
    }
    int32_t root(HexCoord h) {
        int32_t i = region_->index_of(h);
        if (i < 0 || !has_[i]) return -1;
        return uf_.find(i);
    }
    bool same_cluster(HexCoord a, HexCoord b) {
        int32_t ra = root(a), rb = root(b);
        return ra >= 0 && ra == rb;
    }
    int32_t cluster_size(HexCoord h) {
        int32_t i = root(h);
        return i < 0 ? 0 : uf_.component_size(i);
    }
    Color color() const { return color_; }

private:
    const Region* region_;
    Color color_;
    UnionFind uf_;
    std::vector<uint8_t> has_;
};

inline ClusterIndex build_clusters(const Configuration& c, Color color) {
    return ClusterIndex(c, color);
}

// Open crossing joins arcs ab and cd; closed crossing joins bc and da.
// Crossings may use boundary sites.
inline bool has_crossing(const Configuration& c, const Quad& q, Color color) {
    q.validate();
    const Region& reg = *q.region;
    bool want = color == Color::Open;
    UnionFind uf((int32_t)reg.size() + 2);
    int32_t src = (int32_t)reg.size(), dst = src + 1;
    for (int32_t i = 0; i < (int32_t)reg.size(); ++i) {
        if (c.open(reg.site(i)) != want) continue;
        HexCoord h = reg.site(i);
        for (int k = 0; k < 3; ++k) {
            int32_t j = reg.index_of(h + neighbor_dirs()[k]);
            if (j >= 0 && c.open(reg.site(j)) == want) uf.merge(i, j);
        }
    }
    int a0 = color == Color::Open ? 0 : 1;
    for (HexCoord h : q.arcs[a0]) {
        int32_t i = reg.index_of(h);
        if (c.open(h) == want) uf.merge(src, i);
    }
    for (HexCoord h : q.arcs[a0 + 2]) {
        int32_t i = reg.index_of(h);
        if (c.open(h) == want) uf.merge(dst, i);
    }
    return uf.connected(src, dst);
}

// Two-point connectivity; x == y is open(x) by convention.
inline bool connected(const Configuration& c, HexCoord x, HexCoord y) {
    if (!c.in_region(x) || !c.in_region(y))
        throw std::out_of_range("connected: site outside region");
    if (!c.open(x) || !c.open(y)) return false;
    if (x == y) return true;
    ClusterIndex idx(c, Color::Open);
    return idx.same_cluster(x, y);
}

} // namespace perc
