#pragma once

#include <optional>

#include "perc/arms.hpp"

namespace perc {

// Configuration of faces around the inner square of an annulus: the four
// alternating-color site paths bounding the component of the complement of
// the crossing interfaces' flanking hexagons that contains the center.
// Defined on the event that exactly four interfaces cross.
struct FaceConfig {
    std::array<std::vector<HexCoord>, 2> open_faces;
    std::array<std::vector<HexCoord>, 2> closed_faces;
    std::vector<Vec2> endpoints;     // interface endpoints on the inner rim
    std::vector<HexCoord> interior;  // sites of D (inner face + reached annulus sites)
    double quality = 0.0;            // min endpoint distance / inner radius
};

inline bool exactly_four_arms(const Configuration& c, const Annulus& a) {
    AnnulusContext ctx(a);
    return on_event_g(c, ctx);
}

inline std::optional<FaceConfig> extract_faces(const Configuration& c, const AnnulusContext& ctx) {
    auto crossings = crossing_interfaces(c, ctx);
    if (!on_event_g(c, ctx, crossings)) return std::nullopt;

    const Annulus& a = ctx.a;
    Box inner = ctx.inner;
    Box outer = ctx.outer;
    std::unordered_set<HexCoord, HexHash> marked;
    for (const InterfaceTrace& tr : crossings)
        for (const TraceStep& st : tr.steps) {
            marked.insert(st.open_side);
            marked.insert(st.closed_side);
        }

    // component of the complement containing the center, grown from the
    // inner face
    std::unordered_set<HexCoord, HexHash> interior;
    std::vector<HexCoord> queue;
    for (HexCoord h : box_sites(inner)) {
        if (marked.count(h)) continue;
        interior.insert(h);
        queue.push_back(h);
    }
    bool leaked = false;
    for (size_t head = 0; head < queue.size() && !leaked; ++head) {
        HexCoord h = queue[head];
        for (int k = 0; k < 6; ++k) {
            HexCoord nb = h + neighbor_dirs()[k];
            if (!outer.contains(nb)) {
                if (!inner.contains(h)) leaked = true;
                continue;
            }
            if (marked.count(nb) || interior.count(nb)) continue;
            interior.insert(nb);
            queue.push_back(nb);
        }
    }
    if (leaked) return std::nullopt;

    // faces: marked sites adjacent to the interior, split by color into
    // connected arcs; a valid configuration has exactly two of each color
    std::unordered_set<HexCoord, HexHash> face_sites;
    for (HexCoord h : queue)
        for (int k = 0; k < 6; ++k) {
            HexCoord nb = h + neighbor_dirs()[k];
            if (marked.count(nb)) face_sites.insert(nb);
        }
    auto split = [&](bool open) {
        std::vector<std::vector<HexCoord>> comps;
        std::unordered_set<HexCoord, HexHash> seen;
        for (HexCoord h : face_sites) {
            if (seen.count(h) || c.open(h) != open) continue;
            std::vector<HexCoord> comp{h};
            seen.insert(h);
            for (size_t i = 0; i < comp.size(); ++i)
                for (int k = 0; k < 6; ++k) {
                    HexCoord nb = comp[i] + neighbor_dirs()[k];
                    if (face_sites.count(nb) && !seen.count(nb) && c.open(nb) == open) {
                        seen.insert(nb);
                        comp.push_back(nb);
                    }
                }
            comps.push_back(std::move(comp));
        }
        return comps;
    };
    auto opens = split(true);
    auto closeds = split(false);
    if (opens.size() != 2 || closeds.size() != 2) return std::nullopt;

    FaceConfig fc;
    fc.open_faces = {opens[0], opens[1]};
    fc.closed_faces = {closeds[0], closeds[1]};
    for (const InterfaceTrace& tr : crossings) fc.endpoints.push_back(tr.start);
    double best = 1e300;
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = i + 1; j < 4; ++j)
            best = std::min(best, dist(fc.endpoints[i], fc.endpoints[j]));
    fc.quality = best / a.r_inner;
    fc.interior.assign(queue.begin(), queue.end());
    std::sort(fc.interior.begin(), fc.interior.end());
    return fc;
}

inline std::optional<FaceConfig> extract_faces(const Configuration& c, const Annulus& a) {
    return extract_faces(c, AnnulusContext(a));
}

// Indicator of an open connection between the two open faces through the
// interior domain. Face sites themselves are traversable.
inline int u_theta(const Configuration& c, const FaceConfig& fc) {
    std::unordered_set<HexCoord, HexHash> allowed;
    for (HexCoord h : fc.interior) {
        if (!c.in_region(h)) throw std::invalid_argument("u_theta: interior site missing");
        if (c.open(h)) allowed.insert(h);
    }
    for (HexCoord h : fc.open_faces[0]) allowed.insert(h);
    for (HexCoord h : fc.open_faces[1]) allowed.insert(h);
    std::unordered_set<HexCoord, HexHash> target(fc.open_faces[1].begin(),
                                                 fc.open_faces[1].end());
    std::vector<HexCoord> queue(fc.open_faces[0].begin(), fc.open_faces[0].end());
    std::unordered_set<HexCoord, HexHash> seen(queue.begin(), queue.end());
    for (size_t head = 0; head < queue.size(); ++head) {
        HexCoord h = queue[head];
        if (target.count(h)) return 1;
        for (int k = 0; k < 6; ++k) {
            HexCoord nb = h + neighbor_dirs()[k];
            if (allowed.count(nb) && !seen.count(nb)) {
                seen.insert(nb);
                queue.push_back(nb);
            }
        }
    }
    return 0;
}

} // namespace perc
