#pragma once

#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "perc/geometry.hpp"

namespace perc {

// An explicit finite site set with O(1) membership and dense indexing.
// Used by the configuration store, the oracle and small-instance code paths;
// performance-critical samplers work on implicit regions instead.
class Region {
public:
    Region() = default;
    explicit Region(std::vector<HexCoord> sites) : sites_(std::move(sites)) {
        std::sort(sites_.begin(), sites_.end());
        sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
        index_.reserve(sites_.size() * 2);
        for (size_t i = 0; i < sites_.size(); ++i) index_[sites_[i]] = (int32_t)i;
    }

    static Region box(const Box& b) { return Region(box_sites(b)); }
    static Region annulus(const Annulus& a) { return Region(annulus_sites(a)); }

    size_t size() const { return sites_.size(); }
    bool empty() const { return sites_.empty(); }
    const std::vector<HexCoord>& sites() const { return sites_; }
    HexCoord site(int32_t i) const { return sites_[i]; }

    bool contains(HexCoord h) const { return index_.count(h) != 0; }
    int32_t index_of(HexCoord h) const {
        auto it = index_.find(h);
        return it == index_.end() ? -1 : it->second;
    }

    std::vector<HexCoord> boundary() const {
        return boundary_layer(sites_, [&](HexCoord h) { return contains(h); });
    }

private:
    std::vector<HexCoord> sites_;
    std::unordered_map<HexCoord, int32_t, HexHash> index_;
};

using RegionPtr = std::shared_ptr<const Region>;

inline RegionPtr make_region(std::vector<HexCoord> sites) {
    return std::make_shared<const Region>(std::move(sites));
}

} // namespace perc
