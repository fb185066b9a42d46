#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "perc/config.hpp"
#include "perc/geometry.hpp"

namespace perc {

// ---------------------------------------------------------------------------
// Interface walk kernel.
//
// Percolation interfaces live on the edges of the hexagonal dual: an edge of
// the dual separates two adjacent sites of different colors, and at every
// dual vertex (a triangle of mutually adjacent sites) an interface either
// passes through or not, so interfaces form disjoint simple curves. A
// directed position is encoded by the ordered pair (l, r) of sites flanking
// the current dual edge, plus the site `ahead` across the triangle in front.
// One color query per step.
// ---------------------------------------------------------------------------

struct WalkState {
    HexCoord l;     // site on the left of the direction of motion
    HexCoord r;     // site on the right
    HexCoord ahead; // third site of the triangle in front
};

// Advance one step given the color of `ahead`. The left-side color is
// invariant along a walk; `ahead_matches_left` says whether ahead has it.
inline void walk_step(WalkState& s, bool ahead_matches_left) {
    if (ahead_matches_left) {
        HexCoord next = s.r + s.ahead - s.l;
        s.l = s.ahead;
        s.ahead = next;
    } else {
        HexCoord next = s.l + s.ahead - s.r;
        s.r = s.ahead;
        s.ahead = next;
    }
}

inline Vec2 edge_midpoint(const WalkState& s) {
    return 0.5 * (embed(s.l) + embed(s.r));
}

// Canonical key of the undirected dual edge under the walk.
inline uint64_t edge_key(HexCoord a, HexCoord b) {
    if (b < a) std::swap(a, b);
    uint64_t ka = ((uint64_t)(uint32_t)a.q << 16) ^ (uint32_t)a.r;
    uint64_t kb = ((uint64_t)(uint32_t)b.q << 16) ^ (uint32_t)b.r;
    return (ka << 32) ^ kb ^ 0x9e3779b97f4a7c15ull;
}

// Start edges on the rim of a hole: one per triangle {h, n_k, n_{k+1}} with
// h in the hole and both n's outside it, oriented away from the hole. Every
// interface crossing an annulus around the hole begins at exactly one of
// these (when the flanking colors differ).
struct StartEdge {
    HexCoord l, r, ahead;
};

template <class InHole>
inline std::vector<StartEdge> hole_rim_starts(const std::vector<HexCoord>& hole_sites,
                                              InHole&& in_hole) {
    std::vector<StartEdge> out;
    const HexCoord* dirs = neighbor_dirs();
    for (HexCoord h : hole_sites) {
        bool near_rim = false;
        for (int k = 0; k < 6; ++k)
            if (!in_hole(h + dirs[k])) { near_rim = true; break; }
        if (!near_rim) continue;
        for (int k = 0; k < 6; ++k) {
            HexCoord u = h + dirs[k];
            HexCoord v = h + dirs[(k + 1) % 6];
            if (in_hole(u) || in_hole(v)) continue;
            HexCoord w = u + v - h;
            if (in_hole(w)) continue; // degenerate slit, blocked outward
            // v is on the left when moving away from the hole
            out.push_back({v, u, w});
        }
    }
    return out;
}

enum class WalkEnd : uint8_t { HitHole, HitOutside, StepLimit };

// Run a walk until `ahead` leaves the interior. classify returns
// 0 = interior, 1 = hole side, 2 = outside.
template <class ColorFn, class ClassifyFn>
inline WalkEnd run_walk(WalkState& s, bool left_open, ColorFn&& color, ClassifyFn&& classify,
                        int64_t max_steps = (int64_t)1 << 40) {
    for (int64_t i = 0; i < max_steps; ++i) {
        int cls = classify(s.ahead);
        if (cls == 1) return WalkEnd::HitHole;
        if (cls == 2) return WalkEnd::HitOutside;
        walk_step(s, color(s.ahead) == left_open);
    }
    return WalkEnd::StepLimit;
}

// ---------------------------------------------------------------------------
// Staged annulus probe: counts interfaces crossing the annulus between a hole
// and a growing family of nested stage boxes, aborting as soon as fewer than
// `need` crossings survive. Walks are resumed across stages, so the total
// work is bounded by the interface length actually explored.
// ---------------------------------------------------------------------------

struct CrossingRecord {
    WalkState state;   // paused position (ahead lies outside the last stage)
    Vec2 inner_end;    // dual-edge midpoint on the inner rim
    Vec2 outer_end;    // midpoint at the last pause
    bool left_open;    // color on the left along the whole walk
};

struct ProbeOutcome {
    int crossings = 0;       // number of crossings of the final annulus
    int failed_stage = -1;   // first stage with < need crossings, -1 if none
    bool reached_end() const { return failed_stage < 0; }
};

template <class InHole>
class AnnulusProbe {
public:
    AnnulusProbe(const std::vector<StartEdge>& starts, InHole in_hole)
        : starts_(&starts), in_hole_(in_hole) {}

    // stages must be nested: stages[i] contained in stages[i+1]
    template <class ColorFn>
    ProbeOutcome run(ColorFn color, const std::vector<Box>& stages, int need,
                     std::vector<CrossingRecord>* collect = nullptr) {
        alive_.clear();
        for (const StartEdge& e : *starts_) {
            bool cl = color(e.l);
            if (cl == color(e.r)) continue; // not an interface edge
            CrossingRecord rec;
            rec.state = {e.l, e.r, e.ahead};
            rec.inner_end = edge_midpoint(rec.state);
            rec.left_open = cl;
            alive_.push_back(rec);
        }
        ProbeOutcome out;
        for (size_t k = 0; k < stages.size(); ++k) {
            const Box& box = stages[k];
            size_t kept = 0;
            for (size_t i = 0; i < alive_.size(); ++i) {
                CrossingRecord& rec = alive_[i];
                auto classify = [&](HexCoord h) -> int {
                    if (in_hole_(h)) return 1;
                    if (!box.contains(h)) return 2;
                    return 0;
                };
                WalkEnd end = run_walk(rec.state, rec.left_open, color, classify);
                if (end == WalkEnd::HitOutside) {
                    rec.outer_end = edge_midpoint(rec.state);
                    alive_[kept++] = rec;
                } // HitHole: drop
            }
            alive_.resize(kept);
            if ((int)kept < need) {
                out.failed_stage = (int)k;
                out.crossings = (int)kept;
                return out;
            }
        }
        out.crossings = (int)alive_.size();
        if (collect) *collect = alive_;
        return out;
    }

    const std::vector<CrossingRecord>& last_crossings() const { return alive_; }

private:
    const std::vector<StartEdge>* starts_;
    InHole in_hole_;
    std::vector<CrossingRecord> alive_;
};

// Dyadic stage ladder from roughly 2*r_inner up to the target box.
inline std::vector<Box> dyadic_stages(Vec2 center, double r_inner, const Box& target) {
    std::vector<Box> stages;
    double r = std::max(2.0 * r_inner, 2.0);
    // unrotated boxes around `center` that surely fit inside the target
    double tilt = std::fabs(std::cos(target.angle)) + std::fabs(std::sin(target.angle));
    double inr = target.radius / tilt - norm(target.center - center);
    while (r * 2 < inr) {
        stages.push_back({center, r, 0.0});
        r *= 2;
    }
    stages.push_back(target);
    return stages;
}

// Smallest pairwise distance among the inner endpoints, normalized by the
// inner radius; 0 when fewer than two crossings.
inline double interior_quality(const std::vector<CrossingRecord>& recs, Vec2 center,
                               double r_inner) {
    if (recs.size() < 2) return 0.0;
    double best = 1e300;
    for (size_t i = 0; i < recs.size(); ++i)
        for (size_t j = i + 1; j < recs.size(); ++j)
            best = std::min(best, dist(recs[i].inner_end, recs[j].inner_end));
    (void)center;
    return best / r_inner;
}

inline double exterior_quality(const std::vector<CrossingRecord>& recs, Vec2 center,
                               double r_outer) {
    if (recs.size() < 2) return 0.0;
    double best = 1e300;
    for (size_t i = 0; i < recs.size(); ++i)
        for (size_t j = i + 1; j < recs.size(); ++j)
            best = std::min(best, dist(recs[i].outer_end, recs[j].outer_end));
    (void)center;
    return best / r_outer;
}

// ---------------------------------------------------------------------------
// API-level trace types and operations on stored configurations.
// ---------------------------------------------------------------------------

// One step of an interface: the dual edge between an open and a closed site.
struct TraceStep {
    HexCoord open_side;
    HexCoord closed_side;
};

struct InterfaceTrace {
    std::vector<TraceStep> steps;
    Vec2 start{};
    Vec2 end{};
    bool crossed = false; // reached the outer boundary (for annulus traces)
};

// Precomputed, configuration-independent geometry of an annulus: the site
// region and the rim start edges. Reused across samples in exhaustive and
// Monte Carlo loops.
struct AnnulusContext {
    Annulus a;
    Box inner, outer;
    RegionPtr region;
    std::vector<StartEdge> starts;

    explicit AnnulusContext(const Annulus& ann) : a(ann), inner(ann.inner_box()), outer(ann.outer_box()) {
        region = make_region(annulus_sites(a));
        std::vector<HexCoord> hole = box_sites(inner);
        starts = hole_rim_starts(hole, [&](HexCoord h) { return inner.contains(h); });
    }
};

// All interfaces of an annulus configuration with one endpoint on each
// boundary. The count is always even.
inline std::vector<InterfaceTrace> crossing_interfaces(const Configuration& c,
                                                       const AnnulusContext& ctx) {
    std::vector<InterfaceTrace> out;
    for (const StartEdge& e : ctx.starts) {
        if (!c.in_region(e.l) || !c.in_region(e.r)) continue;
        bool cl = c.open(e.l);
        if (cl == c.open(e.r)) continue;
        WalkState s{e.l, e.r, e.ahead};
        InterfaceTrace tr;
        tr.start = edge_midpoint(s);
        for (;;) {
            tr.steps.push_back(cl ? TraceStep{s.l, s.r} : TraceStep{s.r, s.l});
            if (ctx.inner.contains(s.ahead)) break;
            if (!ctx.outer.contains(s.ahead) || !c.in_region(s.ahead)) {
                tr.crossed = true;
                break;
            }
            walk_step(s, c.open(s.ahead) == cl);
        }
        tr.end = edge_midpoint(s);
        if (tr.crossed) out.push_back(std::move(tr));
    }
    return out;
}

inline std::vector<InterfaceTrace> crossing_interfaces(const Configuration& c, const Annulus& a) {
    return crossing_interfaces(c, AnnulusContext(a));
}

// Defined in arms.hpp on top of the sector machinery: exactly_four_arms is
// the event G(u,v) = four alternating arms with no extra disjoint arm.

// ---------------------------------------------------------------------------
// Radial exploration with forced turns.
//
// The hole is treated as closed and the walk keeps the closed phase on its
// left. When the walk is about to re-traverse a dual edge it has already
// used, the loop it closed is classified by the winding accumulated around
// the center since the first traversal: a clockwise loop means it traced the
// inside of a closed circuit (no open crossing), a counterclockwise loop
// triggers a forced turn: the open site it bumped into is recolored closed
// and exploration continues. Loops are handled in discovery order.
// ---------------------------------------------------------------------------

struct RadialResult {
    bool reached_outer = false; // else: closed circuit found
    int forced_turns = 0;
    std::vector<TraceStep> trace;
};

// helper: directed dual edge with l on the left of the direction of motion
inline WalkState oriented_state(HexCoord l, HexCoord r) {
    Vec2 mid = 0.5 * (embed(l) + embed(r));
    for (int k = 0; k < 6; ++k) {
        HexCoord t = l + neighbor_dirs()[k];
        if (t == r || !adjacent(t, r)) continue;
        if (cross(embed(t) - mid, embed(l) - embed(r)) > 0) return {l, r, t};
    }
    throw std::logic_error("oriented_state: sites not adjacent");
}

// Radial exploration with forced turns. The wall (hole, closed sites reached
// from it, and recolored hexagons) is kept on the left. When the walk is
// about to re-traverse a dual edge, the loop is classified by the winding
// accumulated around the center: a clockwise loop has traced the inside of a
// closed circuit; otherwise the open hexagon that was bumped into is
// recolored closed (a forced turn) and the exploration continues, restarting
// from the frontier of the grown wall when the bump invalidated the current
// edge. An all-open rim first launches a straight ray, which settles the
// trivial configurations without any forced turn. Recolorings are handled in
// discovery order.
template <class ColorFn, class InHole>
inline RadialResult radial_exploration_impl(ColorFn color, InHole in_hole,
                                            const std::vector<HexCoord>& hole_sites,
                                            const Box& outer, Vec2 center) {
    std::unordered_set<uint64_t> recolored;
    auto walled = [&](HexCoord h) {
        return in_hole(h) || recolored.count(edge_key(h, h)) != 0;
    };
    auto ecolor = [&](HexCoord h) { return !walled(h) && (bool)color(h); };
    auto outside = [&](HexCoord h) { return !in_hole(h) && !outer.contains(h); };

    RadialResult res;
    auto rim_starts = hole_rim_starts(hole_sites, in_hole);
    if (rim_starts.empty()) throw std::invalid_argument("radial_exploration: no rim");

    // ray launch: if the rim is entirely open, march straight; exiting the
    // annulus immediately settles the outcome with zero forced turns
    {
        bool rim_all_open = true;
        for (const StartEdge& e : rim_starts)
            if (!ecolor(e.l) || !ecolor(e.r)) {
                rim_all_open = false;
                break;
            }
        if (rim_all_open) {
            HexCoord p = rim_starts.front().l;
            while (!outside(p) && ecolor(p)) p = p + HexCoord{1, 0};
            if (outside(p)) {
                res.reached_outer = true;
                return res;
            }
        }
    }

    int64_t guard = 0;
    const int64_t guard_max = 256ll * 1000 * 1000;
    std::vector<HexCoord> recolor_order;
    std::optional<HexCoord> last_recolored;
    auto try_edge_from = [&](HexCoord w) -> std::optional<WalkState> {
        for (int k = 0; k < 6; ++k) {
            HexCoord o = w + neighbor_dirs()[k];
            if (!outside(o) && ecolor(o)) return oriented_state(w, o);
        }
        return std::nullopt;
    };
    for (;;) { // one walk segment per restart
        // start on the wall frontier: next to the last recoloring if possible,
        // else at the first rim transition, else next to an older recoloring.
        // Frontier edges away from the hole-attached wall are never starts, so
        // the open flank stays attached to the rim network.
        std::optional<WalkState> start;
        if (last_recolored) start = try_edge_from(*last_recolored);
        if (!start) {
            for (HexCoord h : hole_sites)
                if ((start = try_edge_from(h))) break;
        }
        if (!start) {
            for (HexCoord b : recolor_order)
                if ((start = try_edge_from(b))) break;
        }
        if (!start) return res; // the wall sealed the rim: closed circuit

        WalkState s = *start;
        std::unordered_map<uint64_t, double> first_winding;
        double winding = 0.0;
        Vec2 rel = edge_midpoint(s) - center;
        double prev_angle = std::atan2(rel.y, rel.x);
        first_winding.emplace(edge_key(s.l, s.r), 0.0);
        bool restart = false;
        while (!restart) {
            if (++guard > guard_max) throw std::runtime_error("radial_exploration: step limit");
            res.trace.push_back(ecolor(s.l) ? TraceStep{s.l, s.r} : TraceStep{s.r, s.l});
            if (outside(s.ahead)) {
                res.reached_outer = true;
                return res;
            }
            bool ahead_open = ecolor(s.ahead);
            uint64_t next_key = ahead_open ? edge_key(s.l, s.ahead) : edge_key(s.ahead, s.r);
            auto it = first_winding.find(next_key);
            if (it != first_winding.end()) {
                // about to re-traverse: classify the loop just closed
                WalkState probe = s;
                walk_step(probe, !ahead_open); // ahead joins the matching side
                Vec2 prel = edge_midpoint(probe) - center;
                double pang = std::atan2(prel.y, prel.x);
                double d = pang - prev_angle;
                if (d > 3.141592653589793) d -= 2 * 3.141592653589793;
                if (d < -3.141592653589793) d += 2 * 3.141592653589793;
                double delta = winding + d - it->second;
                if (delta < -3.0) return res; // clockwise: closed circuit
                res.forced_turns++;
                if (ahead_open) {
                    recolored.insert(edge_key(s.ahead, s.ahead));
                    recolor_order.push_back(s.ahead);
                    continue; // re-decide this step with the recolored wall
                }
                recolored.insert(edge_key(s.r, s.r));
                recolor_order.push_back(s.r);
                last_recolored = s.r;
                restart = true; // current edge invalidated
                break;
            }
            first_winding.emplace(next_key, winding); // provisional; updated below
            walk_step(s, !ahead_open);
            Vec2 cur = edge_midpoint(s) - center;
            double ang = std::atan2(cur.y, cur.x);
            double d = ang - prev_angle;
            if (d > 3.141592653589793) d -= 2 * 3.141592653589793;
            if (d < -3.141592653589793) d += 2 * 3.141592653589793;
            winding += d;
            prev_angle = ang;
            first_winding[edge_key(s.l, s.r)] = winding;
        }
    }
}

inline RadialResult radial_exploration(const Configuration& c, const Annulus& a) {
    Box inner = a.inner_box();
    Box outer = a.outer_box();
    std::vector<HexCoord> hole = box_sites(inner);
    if (hole.empty()) throw std::invalid_argument("radial_exploration: empty inner face");
    auto in_hole = [&](HexCoord h) { return inner.contains(h); };
    auto color = [&](HexCoord h) { return c.in_region(h) ? c.open(h) : false; };
    return radial_exploration_impl(color, in_hole, hole, outer, a.center);
}

// ---------------------------------------------------------------------------
// Chordal (Dobrushin) exploration of a quad: the exterior is wired open along
// one arc and closed along the complementary arc; the unique interface from
// corner a to corner b is traced with the closed phase on its left.
// ---------------------------------------------------------------------------

struct DobrushinFrame {
    std::function<bool(HexCoord)> in_region;
    std::function<bool(HexCoord)> ext_open; // wiring of exterior sites
    WalkState start;                        // both flanks exterior, pointing inward
};

// Rhombus [0,w)x[0,h): the exterior lower half-plane (r < 0) is wired open
// (arc ab = bottom row), everything else closed; the trace runs from the
// bottom-left to the bottom-right corner.
inline DobrushinFrame dobrushin_rhombus(int32_t w, int32_t h) {
    DobrushinFrame f;
    f.in_region = [w, h](HexCoord c) { return c.q >= 0 && c.q < w && c.r >= 0 && c.r < h; };
    f.ext_open = [](HexCoord c) { return c.r < 0; };
    f.start = WalkState{{-1, 0}, {0, -1}, {0, 0}};
    return f;
}

inline InterfaceTrace chordal_interface(const Configuration& c, const DobrushinFrame& f) {
    auto ecolor = [&](HexCoord h) { return f.in_region(h) ? c.open(h) : f.ext_open(h); };
    WalkState s = f.start;
    bool left_open = ecolor(s.l);
    InterfaceTrace tr;
    tr.start = edge_midpoint(s);
    int64_t guard = 0;
    for (;;) {
        if (++guard > (64ll << 20)) throw std::runtime_error("chordal_interface: step limit");
        walk_step(s, ecolor(s.ahead) == left_open);
        bool l_in = f.in_region(s.l), r_in = f.in_region(s.r);
        if (!l_in && !r_in) break; // arrived at the b gap
        // boundary-hugging steps (one virtual flank) belong to the trace too
        if (left_open)
            tr.steps.push_back({s.l, s.r});
        else
            tr.steps.push_back({s.r, s.l});
    }
    tr.end = edge_midpoint(s);
    tr.crossed = true;
    return tr;
}

} // namespace perc
