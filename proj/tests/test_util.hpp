#pragma once

#include "perc/config.hpp"

namespace perc::testutil {

inline RegionPtr annulus_region(const Annulus& a) { return make_region(annulus_sites(a)); }

inline int hexdist(HexCoord h) {
    return (std::abs(h.q) + std::abs(h.r) + std::abs(h.q + h.r)) / 2;
}

// Open east/west quadrants, closed north/south: four diagonal interfaces,
// but wide sectors (doubled arms), so not on the event G.
inline Configuration quadrant_config(RegionPtr region) {
    Configuration c = Configuration::constant(region, Color::Closed);
    for (HexCoord h : region->sites()) {
        Vec2 p = embed(h);
        if (std::fabs(p.x) > std::fabs(p.y)) c.set_raw(region->index_of(h), true);
    }
    return c;
}

// A configuration realizing G: width-one open arms along +-x, closed arms
// along +-y, and ring-parity coloring elsewhere so that no sector carries a
// second disjoint crossing (every crossing is pinched onto its arm).
inline Configuration pinched_four_arm_config(RegionPtr region) {
    Configuration c = Configuration::constant(region, Color::Closed);
    for (HexCoord h : region->sites()) {
        Vec2 p = embed(h);
        bool open;
        if (std::fabs(p.y) < 0.6)
            open = true; // horizontal open arms
        else if (std::fabs(p.x) < 0.6)
            open = false; // vertical closed arms
        else
            open = hexdist(h) % 2 == 0; // alternating rings block the bulk
        c.set_raw(region->index_of(h), open);
    }
    return c;
}

} // namespace perc::testutil
