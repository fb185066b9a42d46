#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "perc/region.hpp"
#include "perc/rng.hpp"

namespace perc {

enum class Color : uint8_t { Closed = 0, Open = 1 };

inline Color flip_color(Color c) { return c == Color::Open ? Color::Closed : Color::Open; }

// A stored percolation configuration: one bit per site of its region.
// sample() is reproducible bit-for-bit from (seed, sample_index, region).
class Configuration {
public:
    Configuration(RegionPtr region, std::vector<uint8_t> state, uint64_t seed, uint64_t index)
        : region_(std::move(region)), state_(std::move(state)), seed_(seed), index_(index) {}

    static Configuration sample(RegionPtr region, uint64_t seed, uint64_t index) {
        if (!region || region->empty())
            throw std::invalid_argument("Configuration::sample: empty region");
        SiteRng rng(seed, index);
        std::vector<uint8_t> state(region->size());
        for (size_t i = 0; i < region->size(); ++i) {
            HexCoord h = region->site((int32_t)i);
            state[i] = rng.open(h.q, h.r) ? 1 : 0;
        }
        return Configuration(std::move(region), std::move(state), seed, index);
    }

    static Configuration constant(RegionPtr region, Color c, uint64_t seed = 0) {
        std::vector<uint8_t> state(region->size(), c == Color::Open ? 1 : 0);
        return Configuration(std::move(region), std::move(state), seed, 0);
    }

    const Region& region() const { return *region_; }
    RegionPtr region_ptr() const { return region_; }
    uint64_t seed() const { return seed_; }
    uint64_t sample_index() const { return index_; }

    bool open(HexCoord h) const {
        int32_t i = region_->index_of(h);
        if (i < 0) throw std::out_of_range("Configuration: site outside region");
        return state_[i] != 0;
    }
    bool open_at(int32_t idx) const { return state_[idx] != 0; }
    Color color(HexCoord h) const { return open(h) ? Color::Open : Color::Closed; }
    bool in_region(HexCoord h) const { return region_->contains(h); }

    Configuration flipped(HexCoord s) const {
        int32_t i = region_->index_of(s);
        if (i < 0) throw std::out_of_range("flip: site outside region");
        std::vector<uint8_t> state = state_;
        state[i] ^= 1;
        return Configuration(region_, std::move(state), seed_, index_);
    }

    Configuration color_flipped() const {
        std::vector<uint8_t> state = state_;
        for (auto& b : state) b ^= 1;
        return Configuration(region_, std::move(state), seed_, index_);
    }

    size_t open_count() const {
        size_t n = 0;
        for (uint8_t b : state_) n += b;
        return n;
    }

    // set state from a raw index (used by the oracle's exhaustive enumerator)
    void set_raw(int32_t idx, bool open) { state_[idx] = open ? 1 : 0; }
    const std::vector<uint8_t>& raw() const { return state_; }

private:
    RegionPtr region_;
    std::vector<uint8_t> state_;
    uint64_t seed_;
    uint64_t index_;
};

inline Configuration flip(const Configuration& c, HexCoord s) { return c.flipped(s); }

// Run-length encoding of the bit stream in region site order (sorted order),
// for the versioned dump format. Returns pairs (bit, count).
inline std::vector<std::pair<uint8_t, uint64_t>> rle_encode(const std::vector<uint8_t>& bits) {
    std::vector<std::pair<uint8_t, uint64_t>> runs;
    for (uint8_t b : bits) {
        if (!runs.empty() && runs.back().first == b)
            runs.back().second++;
        else
            runs.push_back({b, 1});
    }
    return runs;
}

inline std::vector<uint8_t> rle_decode(const std::vector<std::pair<uint8_t, uint64_t>>& runs) {
    std::vector<uint8_t> bits;
    for (auto [b, n] : runs) bits.insert(bits.end(), n, b);
    return bits;
}

} // namespace perc
