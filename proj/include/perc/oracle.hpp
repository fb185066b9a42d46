#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include "perc/config.hpp"
#include "perc/connectivity.hpp"

namespace perc {
namespace oracle {

// Exact rational p = count / 2^bits with bits <= 22.
struct Rational {
    uint64_t count = 0;
    uint32_t bits = 0;
    double value() const { return (double)count / (double)(1ull << bits); }
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.count == b.count && a.bits == b.bits;
    }
};

constexpr size_t kMaxOracleSites = 22;

// Exhaustively enumerate all 2^ن configurations of the region and count those
// satisfying the predicate. Exact integer arithmetic.
inline Rational enumerate(RegionPtr region, const std::function<bool(const Configuration&)>& pred) {
    size_t n = region->size();
    if (n == 0 || n > kMaxOracleSites)
        throw std::invalid_argument("oracle::enumerate: region size must be in [1," +
                                    std::to_string(kMaxOracleSites) + "]");
    Configuration c = Configuration::constant(region, Color::Closed);
    uint64_t total = 1ull << n, count = 0;
    for (uint64_t mask = 0; mask < total; ++mask) {
        for (size_t i = 0; i < n; ++i) c.set_raw((int32_t)i, (mask >> i) & 1);
        if (pred(c)) ++count;
    }
    return {count, (uint32_t)n};
}

// Exact expectation of an integer statistic: returns (sum, bits), i.e. the
// mean is sum / 2^bits.
struct ExactMean {
    int64_t sum = 0;
    uint32_t bits = 0;
    double value() const { return (double)sum / (double)(1ull << bits); }
};

inline ExactMean exact_expectation(RegionPtr region,
                                   const std::function<int64_t(const Configuration&)>& stat) {
    size_t n = region->size();
    if (n == 0 || n > kMaxOracleSites)
        throw std::invalid_argument("oracle::exact_expectation: region too large");
    Configuration c = Configuration::constant(region, Color::Closed);
    uint64_t total = 1ull << n;
    int64_t sum = 0;
    for (uint64_t mask = 0; mask < total; ++mask) {
        for (size_t i = 0; i < n; ++i) c.set_raw((int32_t)i, (mask >> i) & 1);
        sum += stat(c);
    }
    return {sum, (uint32_t)n};
}

// ---------------------------------------------------------------------------
// Independent per-configuration arm-event decisions on small annuli, used to
// cross-check the interface-based production detectors. Works on bitmasks of
// the region's dense indices (region size <= 32 here).
// ---------------------------------------------------------------------------

// Geometry of a small annulus-like domain: which region sites are adjacent to
// the hole (inner layer) and to the complement of the domain (outer layer).
struct SmallAnnulus {
    RegionPtr region;
    uint32_t inner_adj = 0; // mask of sites adjacent to the hole
    uint32_t outer_adj = 0; // mask of sites adjacent to the outside
    std::vector<uint32_t> adj; // adjacency masks between region sites

    static SmallAnnulus make(RegionPtr region, const std::function<bool(HexCoord)>& in_hole) {
        if (region->size() > 32) throw std::invalid_argument("SmallAnnulus: too many sites");
        SmallAnnulus a;
        a.region = region;
        a.adj.assign(region->size(), 0);
        for (size_t i = 0; i < region->size(); ++i) {
            HexCoord h = region->site((int32_t)i);
            for (int k = 0; k < 6; ++k) {
                HexCoord nb = h + neighbor_dirs()[k];
                int32_t j = region->index_of(nb);
                if (j >= 0) {
                    a.adj[i] |= 1u << j;
                } else if (in_hole(nb)) {
                    a.inner_adj |= 1u << i;
                } else {
                    a.outer_adj |= 1u << i;
                }
            }
        }
        return a;
    }
};

inline uint32_t color_mask(const SmallAnnulus& a, const Configuration& c, bool open) {
    uint32_t m = 0;
    for (size_t i = 0; i < a.region->size(); ++i)
        if (c.open_at((int32_t)i) == open) m |= 1u << i;
    return m;
}

inline uint32_t spread(const SmallAnnulus& a, uint32_t seeds, uint32_t allowed) {
    uint32_t comp = seeds & allowed;
    for (;;) {
        uint32_t grow = comp;
        uint32_t m = comp;
        while (m) {
            int i = __builtin_ctz(m);
            m &= m - 1;
            grow |= a.adj[i] & allowed;
        }
        if (grow == comp) return comp;
        comp = grow;
    }
}

// one crossing of the given color: connected path from inner layer to outer
// layer within `allowed` (default: everything)
inline bool mono_crossing(const SmallAnnulus& a, uint32_t colored, uint32_t allowed = ~0u) {
    uint32_t reach = spread(a, a.inner_adj & colored & allowed, colored & allowed);
    return (reach & a.outer_adj) != 0;
}

// All site-minimal simple crossings of one color, as site masks. DFS stops a
// path at its first contact with the outer layer.
inline void enumerate_crossings(const SmallAnnulus& a, uint32_t colored, uint32_t allowed,
                                std::vector<uint32_t>& out, size_t cap = 200000) {
    out.clear();
    std::unordered_set<uint32_t> seen;
    uint32_t ok = colored & allowed;
    struct Frame {
        int site;
        uint32_t mask;
    };
    std::vector<Frame> stack;
    uint32_t starts = a.inner_adj & ok;
    uint32_t sm = starts;
    while (sm) {
        int s = __builtin_ctz(sm);
        sm &= sm - 1;
        stack.push_back({s, 1u << s});
    }
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (a.outer_adj & (1u << f.site)) {
            if (seen.insert(f.mask).second) {
                out.push_back(f.mask);
                if (out.size() > cap) throw std::runtime_error("enumerate_crossings: cap exceeded");
            }
            continue;
        }
        uint32_t next = a.adj[f.site] & ok & ~f.mask;
        while (next) {
            int t = __builtin_ctz(next);
            next &= next - 1;
            stack.push_back({t, f.mask | (1u << t)});
        }
    }
}

// two vertex-disjoint crossings of one color within `allowed` (exact, by
// enumerating disjoint pairs of minimal simple crossings)
inline bool two_disjoint_crossings(const SmallAnnulus& a, uint32_t colored, uint32_t allowed = ~0u) {
    std::vector<uint32_t> paths;
    enumerate_crossings(a, colored, allowed, paths);
    for (size_t i = 0; i < paths.size(); ++i)
        for (size_t j = i + 1; j < paths.size(); ++j)
            if ((paths[i] & paths[j]) == 0) return true;
    return false;
}

// components of the domain after removing `cut`, restricted to components
// that contain at least one site
inline std::vector<uint32_t> components_minus(const SmallAnnulus& a, uint32_t cut) {
    uint32_t all = a.region->size() == 32 ? ~0u : ((1u << a.region->size()) - 1);
    uint32_t left = all & ~cut;
    std::vector<uint32_t> comps;
    while (left) {
        int s = __builtin_ctz(left);
        uint32_t comp = spread(a, 1u << s, left);
        comps.push_back(comp);
        left &= ~comp;
    }
    return comps;
}

// Cyclic-pattern arm events decided from first principles:
//   OCOC:  open pair splitting the annulus with closed crossings in two
//          distinct components;
//   OOC:   two disjoint open crossings plus any closed crossing;
//   OCOCC: open pair with a closed crossing in one component and two disjoint
//          closed crossings in another.
inline bool arm_event_small(const SmallAnnulus& a, const Configuration& c,
                            const std::string& pattern) {
    uint32_t open_m = color_mask(a, c, true);
    uint32_t closed_m = color_mask(a, c, false);
    if (pattern == "O") return mono_crossing(a, open_m);
    if (pattern == "C") return mono_crossing(a, closed_m);
    if (pattern == "OC" || pattern == "CO")
        return mono_crossing(a, open_m) && mono_crossing(a, closed_m);
    if (pattern == "OOC")
        return mono_crossing(a, closed_m) && two_disjoint_crossings(a, open_m);
    if (pattern == "OCC")
        return mono_crossing(a, open_m) && two_disjoint_crossings(a, closed_m);
    if (pattern == "OCOC" || pattern == "OCOCC" || pattern == "OOCOC") {
        // For five arms, pairs are enumerated in the color that appears twice:
        // O for OCOCC, C for its color-swap OOCOC.
        uint32_t om = pattern == "OOCOC" ? closed_m : open_m;
        uint32_t km = pattern == "OOCOC" ? open_m : closed_m;
        if (!mono_crossing(a, open_m) || !mono_crossing(a, closed_m)) return false;
        std::vector<uint32_t> opens;
        enumerate_crossings(a, om, ~0u, opens);
        for (size_t i = 0; i < opens.size(); ++i) {
            for (size_t j = i + 1; j < opens.size(); ++j) {
                if (opens[i] & opens[j]) continue;
                auto comps = components_minus(a, opens[i] | opens[j]);
                // indices of components carrying >= 1 / >= 2 disjoint closed crossings
                int with_one = 0;
                bool pair_and_single = false;
                std::vector<uint32_t> carrying;
                for (uint32_t comp : comps)
                    if (mono_crossing(a, km, comp)) carrying.push_back(comp);
                with_one = (int)carrying.size();
                if (pattern == "OCOC") {
                    if (with_one >= 2) return true;
                    continue;
                }
                if (with_one >= 2) {
                    for (uint32_t comp : carrying) {
                        if (two_disjoint_crossings(a, km, comp)) {
                            pair_and_single = true;
                            break;
                        }
                    }
                }
                if (pair_and_single) return true;
            }
        }
        return false;
    }
    throw std::invalid_argument("arm_event_small: unsupported pattern " + pattern);
}

} // namespace oracle
} // namespace perc
