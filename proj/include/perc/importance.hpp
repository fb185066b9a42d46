#pragma once

#include "perc/samplers.hpp"

namespace perc {

// ---------------------------------------------------------------------------
// Window-based importance machinery: enumerate the sites of a box that have
// four alternating arms to a target boundary, count grid squares with the
// four-arm event, and decide the prescribed-arc (square) four-arm event.
// All routines work on a materialized Window so one sample supports several
// counters.
// ---------------------------------------------------------------------------

// Live BFS: mark sites of one color connected to the outer rim of `domain`
// (sites with a neighbor outside). Uses the window's label array with the
// current pass; label 1 = live open, 2 = live closed.
class LiveMarks {
public:
    explicit LiveMarks(size_t cells) : live_(cells, 0) {}

    void compute(Window& win, const Box& domain) {
        std::fill(live_.begin(), live_.end(), 0);
        queue_.clear();
        // seed from the rim layer
        for_each_site_in_box(domain, [&](HexCoord h) {
            bool rim = false;
            for (int k = 0; k < 6 && !rim; ++k)
                if (!domain.contains(h + neighbor_dirs()[k])) rim = true;
            if (!rim) return;
            int32_t i = win.idx(h);
            live_[i] = win.open(h) ? 1 : 2;
            queue_.push_back(i);
        });
        for (size_t head = 0; head < queue_.size(); ++head) {
            int32_t i = queue_[head];
            HexCoord h = win.site(i);
            uint8_t mark = live_[i];
            bool open = mark == 1;
            for (int k = 0; k < 6; ++k) {
                HexCoord nb = h + neighbor_dirs()[k];
                if (!domain.contains(nb)) continue;
                int32_t j = win.idx(nb);
                if (live_[j] || win.open(nb) != open) continue;
                live_[j] = mark;
                queue_.push_back(j);
            }
        }
    }

    bool live_open(int32_t i) const { return live_[i] == 1; }
    bool live_closed(int32_t i) const { return live_[i] == 2; }

private:
    std::vector<uint8_t> live_;
    std::vector<int32_t> queue_;
};

// cheap necessary condition for a four-arm site: at least four cyclic color
// changes among the live-marked neighbors
inline bool four_arm_filter(const Window& win, const LiveMarks& live, HexCoord x) {
    int flags[6];
    int n = 0;
    for (int k = 0; k < 6; ++k) {
        HexCoord nb = x + neighbor_dirs()[k];
        if (!win.in_window(nb)) continue;
        int32_t j = win.idx(nb);
        if (live.live_open(j))
            flags[n++] = 1;
        else if (live.live_closed(j))
            flags[n++] = 0;
    }
    if (n < 4) return false;
    int changes = 0;
    for (int k = 0; k < n; ++k) changes += flags[k] != flags[(k + 1) % n];
    return changes >= 4;
}

// exact: number of interfaces from the hexagon of x crossing to the target
template <class ColorFn>
inline bool site_four_arm_exact(ColorFn&& color, HexCoord x, const Box& target) {
    const HexCoord* dirs = neighbor_dirs();
    int count = 0;
    for (int k = 0; k < 6; ++k) {
        HexCoord u = x + dirs[k];
        HexCoord v = x + dirs[(k + 1) % 6];
        bool cu = color(u);
        if (cu == color(v)) continue;
        WalkState s{v, u, u + v - x};
        auto classify = [&](HexCoord h) -> int {
            if (h == x) return 1;
            return target.contains(h) ? 0 : 2;
        };
        if (run_walk(s, color(v), color, classify) == WalkEnd::HitOutside) ++count;
    }
    return count >= 4;
}

// all sites of `scan` that are important for the target boundary (four
// alternating arms from the site to the outer boundary of `domain`)
inline void important_sites(Window& win, LiveMarks& live, const Box& domain, const Box& scan,
                            const std::vector<HexCoord>& scan_sites,
                            std::vector<HexCoord>& out) {
    out.clear();
    live.compute(win, domain);
    auto color = [&](HexCoord h) { return win.open(h); };
    for (HexCoord x : scan_sites) {
        if (!four_arm_filter(win, live, x)) continue;
        if (site_four_arm_exact(color, x, domain)) out.push_back(x);
    }
    (void)scan;
}

// ---------------------------------------------------------------------------
// Prescribed-arc four-arm event from a box hole to the four sides of an
// outer square: open arms to the right and left sides, closed arms to the
// top and bottom, in cyclic order. Decided from the crossing interfaces and
// the landing arcs of their sector clusters.
// ---------------------------------------------------------------------------

struct PrescribedArcGeom {
    Box hole;     // inner box (2eps square)
    Box outer;    // target square (angle allowed)
    std::vector<StartEdge> starts;
    std::vector<HexCoord> rim_sites;     // outer rim layer of the target
    std::vector<uint8_t> rim_side;       // 0 = E, 1 = N, 2 = W, 3 = S

    PrescribedArcGeom(const Box& hole_box, const Box& outer_box) : hole(hole_box), outer(outer_box) {
        auto hole_sites = box_sites(hole);
        if (hole_sites.empty()) throw std::invalid_argument("prescribed arcs: empty hole");
        Box hb = hole;
        starts = hole_rim_starts(hole_sites, [hb](HexCoord h) { return hb.contains(h); });
        for_each_site_in_box(outer, [&](HexCoord h) {
            bool rim = false;
            for (int k = 0; k < 6 && !rim; ++k)
                if (!outer.contains(h + neighbor_dirs()[k])) rim = true;
            if (!rim) return;
            Vec2 d = embed(h) - outer.center;
            double ca = std::cos(outer.angle), sa = std::sin(outer.angle);
            double u = ca * d.x + sa * d.y, v = -sa * d.x + ca * d.y;
            uint8_t side;
            if (std::fabs(u) >= std::fabs(v))
                side = u >= 0 ? 0 : 2;
            else
                side = v >= 0 ? 1 : 3;
            rim_sites.push_back(h);
            rim_side.push_back(side);
        });
    }
};

// Decides the event on a materialized window. Returns the number of crossing
// interfaces through `count` (useful to the callers).
inline bool prescribed_arc_event(Window& win, const PrescribedArcGeom& g, int* count_out = nullptr) {
    struct Walked {
        double angle;
        bool left_open;
        HexCoord left_seed;
    };
    thread_local std::vector<Walked> walks;
    walks.clear();
    auto color = [&](HexCoord h) { return win.open(h); };
    for (const StartEdge& e : g.starts) {
        bool cl = color(e.l);
        if (cl == color(e.r)) continue;
        WalkState s{e.l, e.r, e.ahead};
        Vec2 inner_end = edge_midpoint(s);
        auto classify = [&](HexCoord h) -> int {
            if (g.hole.contains(h)) return 1;
            return g.outer.contains(h) ? 0 : 2;
        };
        if (run_walk(s, cl, color, classify) != WalkEnd::HitOutside) continue;
        Vec2 rel = inner_end - g.hole.center;
        walks.push_back({std::atan2(rel.y, rel.x), cl, s.l});
    }
    if (count_out) *count_out = (int)walks.size();
    if (walks.size() < 4) return false;
    std::sort(walks.begin(), walks.end(), [](const Walked& a, const Walked& b) {
        if (a.angle != b.angle) return a.angle < b.angle;
        return a.left_seed < b.left_seed;
    });

    // label the sector clusters (counterclockwise flank of each walk) and
    // collect which sides each cluster's rim landing touches
    win.new_pass();
    int32_t next_label = 0;
    thread_local std::vector<int32_t> sector_label;
    sector_label.clear();
    auto in_annulus = [&](HexCoord h) { return g.outer.contains(h) && !g.hole.contains(h); };
    for (const Walked& w : walks)
        sector_label.push_back(win.flood_label(w.left_seed, w.left_open, in_annulus, next_label++));
    thread_local std::vector<uint8_t> lands;
    lands.assign((size_t)next_label, 0);
    for (size_t i = 0; i < g.rim_sites.size(); ++i) {
        int32_t lab = win.label_of(g.rim_sites[i]);
        if (lab >= 0) lands[lab] |= (uint8_t)(1 << g.rim_side[i]);
    }

    // greedy cyclic match: open->E, closed->N, open->W, closed->S
    int p = (int)walks.size();
    const bool target_open[4] = {true, false, true, false};
    for (int s0 = 0; s0 < p; ++s0) {
        if (walks[s0].left_open != target_open[0] || !(lands[sector_label[s0]] & 1)) continue;
        int off = 1;
        bool ok = true;
        for (int t = 1; t < 4 && ok; ++t) {
            bool found = false;
            for (; off < p; ++off) {
                int cand = (s0 + off) % p;
                if (walks[cand].left_open == target_open[t] &&
                    (lands[sector_label[cand]] & (uint8_t)(1 << t))) {
                    found = true;
                    ++off;
                    break;
                }
            }
            ok = found;
        }
        if (ok) return true;
    }
    return false;
}

} // namespace perc
