#pragma once

#include <functional>

#include "perc/importance.hpp"
#include "perc/measures.hpp"

namespace perc {

// ---------------------------------------------------------------------------
// Generic rejection sampler: accepted samples are exactly distributed as the
// unconditional law restricted to the event.
// ---------------------------------------------------------------------------

struct ConditionalSampler {
    RegionPtr region;
    std::function<bool(const Configuration&)> event;
    uint64_t budget = 1000000;
    uint64_t seed = 0;

    struct Draw {
        Configuration config;
        uint64_t attempts = 0;
    };

    // `cursor` advances across calls so successive draws are independent
    Draw sample(uint64_t& cursor) const {
        uint64_t first = cursor;
        for (uint64_t k = 0; k < budget; ++k) {
            Configuration c = Configuration::sample(region, seed, cursor++);
            if (event(c)) return {std::move(c), k + 1};
        }
        double rate = 0.0;
        throw std::runtime_error("ConditionalSampler: budget exhausted after " +
                                 std::to_string(cursor - first) +
                                 " attempts (acceptance rate < " +
                                 std::to_string(rate + 1.0 / (double)budget) + ")");
    }
};

// ---------------------------------------------------------------------------
// Separation of interfaces: conditional law of the interior quality given
// the four-arm event across A(r, R), for several outer radii in one pass.
// ---------------------------------------------------------------------------

struct SeparationRow {
    double r = 0, R = 0;
    uint64_t accepted = 0;
    uint64_t quality_above = 0; // Q > 1/4
    std::array<uint64_t, 24> histogram{}; // quality bins of width 1/8
    Estimate prob(uint64_t seed = 0) const {
        return binomial_estimate(quality_above, accepted, seed);
    }
    void merge(const SeparationRow& o) {
        accepted += o.accepted;
        quality_above += o.quality_above;
        for (size_t i = 0; i < histogram.size(); ++i) histogram[i] += o.histogram[i];
    }
};

struct SeparationResult {
    std::vector<SeparationRow> rows;
    uint64_t n = 0;
};

inline SeparationResult separation_statistic(double r, const std::vector<double>& outer_radii,
                                             uint64_t n, uint64_t seed, int workers) {
    StagedArmGeom geom = StagedArmGeom::box_centered({0, 0}, r, outer_radii);
    struct Acc {
        std::vector<SeparationRow> rows;
        uint64_t n = 0;
    };
    Acc total = run_sharded<Acc>(
        n, workers,
        [&](Acc& acc, uint64_t i) {
            if (acc.rows.empty()) {
                acc.rows.resize(outer_radii.size());
                for (size_t k = 0; k < outer_radii.size(); ++k) {
                    acc.rows[k].r = r;
                    acc.rows[k].R = outer_radii[k];
                }
            }
            LatticeColor color(seed, i);
            thread_local std::vector<std::pair<int, double>> quality;
            quality.clear();
            staged_arm_depth(geom, color, 4, nullptr, &quality);
            for (auto [level, q] : quality) {
                double qn = q / r;
                SeparationRow& row = acc.rows[level];
                row.accepted++;
                if (qn > 0.25) row.quality_above++;
                size_t bin = std::min(row.histogram.size() - 1, (size_t)(qn * 8));
                row.histogram[bin]++;
            }
            acc.n++;
        },
        [](Acc& t, const Acc& p) {
            if (t.rows.empty()) t.rows = p.rows;
            else
                for (size_t i = 0; i < p.rows.size(); ++i) t.rows[i].merge(p.rows[i]);
            t.n += p.n;
        });
    return {total.rows, total.n};
}

// ---------------------------------------------------------------------------
// Exactly four well-separated arms at ratio 2 (the event underlying the
// coupling's per-scale success probability).
// ---------------------------------------------------------------------------

struct ExactlyFourRow {
    double r = 0;
    uint64_t n = 0;
    uint64_t four_interfaces = 0; // alternating four-arm event held to 2r
    uint64_t on_g = 0;            // no extra disjoint arm
    uint64_t separated = 0;       // G with interior and exterior quality > 1/4
};

inline ExactlyFourRow exactly_four_separated_prob(double r, uint64_t n, uint64_t seed,
                                                  int workers) {
    StagedArmGeom geom = StagedArmGeom::box_centered({0, 0}, r, {2 * r});
    Annulus a{{0, 0}, r, 2 * r, 0.0};
    auto shared_ctx = std::make_shared<AnnulusContext>(a);
    struct Acc {
        ExactlyFourRow row;
    };
    Acc total = run_sharded<Acc>(
        n, workers,
        [&](Acc& acc, uint64_t i) {
            acc.row.n++;
            LatticeColor color(seed, i);
            thread_local std::vector<CrossingRecord> walks;
            int depth = staged_arm_depth(geom, color, 4, &walks);
            if (depth < 0) return;
            acc.row.four_interfaces++;
            const AnnulusContext& ctx = *shared_ctx;
            std::vector<uint8_t> state(ctx.region->size());
            for (size_t k = 0; k < state.size(); ++k) {
                HexCoord h = ctx.region->site((int32_t)k);
                state[k] = color(h);
            }
            Configuration c(ctx.region, std::move(state), seed, i);
            auto crossings = crossing_interfaces(c, ctx);
            if (!on_event_g(c, ctx, crossings)) return;
            acc.row.on_g++;
            double qi = interior_quality(walks, {0, 0}, r);
            double qo = exterior_quality(walks, {0, 0}, 2 * r);
            if (qi > 0.25 && qo > 0.25) acc.row.separated++;
        },
        [](Acc& t, const Acc& p) {
            t.row.n += p.row.n;
            t.row.four_interfaces += p.row.four_interfaces;
            t.row.on_g += p.row.on_g;
            t.row.separated += p.row.separated;
        });
    total.row.r = r;
    return total.row;
}

// ---------------------------------------------------------------------------
// Coupling fingerprints: the induced faces at the inner radius compressed to
// (binned endpoint angles, first-sector color, U bit). Samples that do not
// have exactly four crossing interfaces, or whose face structure is
// degenerate, fall into their own classes.
// ---------------------------------------------------------------------------

constexpr uint64_t kKeyMulti = ~0ull;
constexpr uint64_t kKeyNoFaces = ~0ull - 1;

inline uint64_t fingerprint_key(const std::array<int, 4>& bins, bool first_open, int u) {
    return (uint64_t)bins[0] | ((uint64_t)bins[1] << 8) | ((uint64_t)bins[2] << 16) |
           ((uint64_t)bins[3] << 24) | ((uint64_t)(first_open ? 1 : 0) << 32) |
           ((uint64_t)(u ? 1 : 0) << 33);
}

// global color flip: angles fixed, sector colors flip, U flips
inline uint64_t fingerprint_colorswap(uint64_t key) {
    if (key == kKeyMulti || key == kKeyNoFaces) return key;
    return key ^ (1ull << 32) ^ (1ull << 33);
}

// Fingerprint of one accepted sample. The window must be materialized.
inline uint64_t sample_fingerprint(Window& win, const Box& hole, const Box& outer,
                                   const std::vector<StartEdge>& starts, int bins) {
    auto color = [&](HexCoord h) { return win.open(h); };
    struct WalkInfo {
        double angle;
        bool left_open;
    };
    thread_local std::vector<WalkInfo> infos;
    thread_local std::vector<HexCoord> flanks;
    infos.clear();
    flanks.clear();
    for (const StartEdge& e : starts) {
        bool cl = color(e.l);
        if (cl == color(e.r)) continue;
        WalkState s{e.l, e.r, e.ahead};
        Vec2 inner_end = edge_midpoint(s);
        thread_local std::vector<HexCoord> local;
        local.clear();
        bool crossed = false;
        for (;;) {
            local.push_back(s.l);
            local.push_back(s.r);
            if (hole.contains(s.ahead)) break;
            if (!outer.contains(s.ahead)) {
                crossed = true;
                break;
            }
            walk_step(s, color(s.ahead) == cl);
        }
        if (!crossed) continue;
        Vec2 rel = inner_end - hole.center;
        infos.push_back({std::atan2(rel.y, rel.x), cl});
        flanks.insert(flanks.end(), local.begin(), local.end());
        if (infos.size() > 4) return kKeyMulti; // early out
    }
    if (infos.size() != 4) return kKeyMulti;

    // faces: flood the interior from the hole, blocked by the flanks
    win.new_pass();
    for (HexCoord h : flanks) win.visit(win.idx(h));
    thread_local std::vector<int32_t> interior;
    interior.clear();
    thread_local std::vector<int32_t> queue;
    queue.clear();
    for_each_site_in_box(hole, [&](HexCoord h) {
        int32_t i = win.idx(h);
        if (win.visited(i)) return;
        win.visit(i);
        queue.push_back(i);
        interior.push_back(i);
    });
    std::unordered_set<int32_t> flank_set;
    for (HexCoord h : flanks) flank_set.insert(win.idx(h));
    bool leaked = false;
    for (size_t head = 0; head < queue.size() && !leaked; ++head) {
        HexCoord h = win.site(queue[head]);
        for (int k = 0; k < 6; ++k) {
            HexCoord nb = h + neighbor_dirs()[k];
            if (!outer.contains(nb)) {
                if (!hole.contains(h)) leaked = true;
                break;
            }
            int32_t j = win.idx(nb);
            if (win.visited(j)) continue;
            win.visit(j);
            queue.push_back(j);
            interior.push_back(j);
        }
    }
    if (leaked) return kKeyNoFaces;

    // face sites: flanks adjacent to the interior, split by color
    thread_local std::vector<int32_t> face_sites;
    face_sites.clear();
    {
        std::unordered_set<int32_t> seen;
        for (int32_t i : interior) {
            HexCoord h = win.site(i);
            for (int k = 0; k < 6; ++k) {
                HexCoord nb = h + neighbor_dirs()[k];
                if (!win.in_window(nb)) continue;
                int32_t j = win.idx(nb);
                if (flank_set.count(j) && seen.insert(j).second) face_sites.push_back(j);
            }
        }
    }
    // connected components of the open face sites (closed faces mirror them)
    std::unordered_set<int32_t> face_lookup(face_sites.begin(), face_sites.end());
    std::vector<std::vector<int32_t>> open_comps;
    {
        std::unordered_set<int32_t> seen;
        for (int32_t i : face_sites) {
            if (seen.count(i) || !win.open(win.site(i))) continue;
            std::vector<int32_t> comp{i};
            seen.insert(i);
            for (size_t head = 0; head < comp.size(); ++head) {
                HexCoord h = win.site(comp[head]);
                for (int k = 0; k < 6; ++k) {
                    HexCoord nb = h + neighbor_dirs()[k];
                    if (!win.in_window(nb)) continue;
                    int32_t j = win.idx(nb);
                    if (face_lookup.count(j) && !seen.count(j) && win.open(win.site(j))) {
                        seen.insert(j);
                        comp.push_back(j);
                    }
                }
            }
            open_comps.push_back(std::move(comp));
        }
    }
    if (open_comps.size() != 2) return kKeyNoFaces;

    // U: open connection between the two open faces through the interior
    int u = 0;
    {
        std::unordered_set<int32_t> allowed;
        for (int32_t i : interior)
            if (win.open(win.site(i))) allowed.insert(i);
        for (const auto& comp : open_comps)
            for (int32_t i : comp) allowed.insert(i);
        std::unordered_set<int32_t> target(open_comps[1].begin(), open_comps[1].end());
        std::vector<int32_t> stack(open_comps[0].begin(), open_comps[0].end());
        std::unordered_set<int32_t> seen(stack.begin(), stack.end());
        while (!stack.empty()) {
            int32_t i = stack.back();
            stack.pop_back();
            if (target.count(i)) {
                u = 1;
                break;
            }
            HexCoord h = win.site(i);
            for (int k = 0; k < 6; ++k) {
                HexCoord nb = h + neighbor_dirs()[k];
                if (!win.in_window(nb)) continue;
                int32_t j = win.idx(nb);
                if (allowed.count(j) && !seen.count(j)) {
                    seen.insert(j);
                    stack.push_back(j);
                }
            }
        }
    }

    // endpoint bins sorted by angle; the first sector color is the left
    // flank color of the first interface in angular order
    std::sort(infos.begin(), infos.end(),
              [](const WalkInfo& a, const WalkInfo& b) { return a.angle < b.angle; });
    std::array<int, 4> b{};
    for (int k = 0; k < 4; ++k) {
        double t = (infos[k].angle + 3.14159265358979323846) / (2 * 3.14159265358979323846);
        int bin = (int)(t * bins);
        if (bin >= bins) bin = bins - 1;
        if (bin < 0) bin = 0;
        b[k] = bin;
    }
    return fingerprint_key(b, infos[0].left_open, u);
}

// One conditioned arm of the coupling experiment: fingerprints at radius r
// under conditioning on the four-arm event from B(r) to the outer box.
struct FingerprintSample {
    Histogram hist;
    Histogram by_u[2];      // split by the U bit (clean fingerprints only)
    Histogram halves[2];    // split by acceptance parity (noise calibration)
    uint64_t accepted = 0;
    uint64_t attempts = 0;
    void merge(const FingerprintSample& o) {
        for (auto& [k, v] : o.hist) hist[k] += v;
        for (int t = 0; t < 2; ++t) {
            for (auto& [k, v] : o.by_u[t]) by_u[t][k] += v;
            for (auto& [k, v] : o.halves[t]) halves[t][k] += v;
        }
        accepted += o.accepted;
        attempts += o.attempts;
    }
};

inline FingerprintSample conditioned_fingerprints(double r, const Box& outer, int bins,
                                                  uint64_t attempts, uint64_t seed,
                                                  int workers) {
    StagedArmGeom geom = StagedArmGeom::box_centered({0, 0}, r, {});
    geom.stages = dyadic_stages({0, 0}, r, outer);
    geom.level_of_radius = {(int)geom.stages.size() - 1};
    Box hole = geom.hole_box;
    FingerprintSample total = run_sharded<FingerprintSample>(
        attempts, workers,
        [&](FingerprintSample& acc, uint64_t i) {
            acc.attempts++;
            LatticeColor color(seed, i);
            if (staged_arm_depth(geom, color, 4) < 0) return;
            thread_local std::unique_ptr<Window> win;
            thread_local double win_radius = -1;
            double need_radius = outer.radius + norm(outer.center) + 2;
            if (!win || win_radius != need_radius) {
                win = std::make_unique<Window>(Box{{0, 0}, need_radius, outer.angle});
                win_radius = need_radius;
            }
            win->materialize(color.rng);
            uint64_t key = sample_fingerprint(*win, hole, outer, geom.starts, bins);
            acc.accepted++;
            acc.hist[key]++;
            acc.halves[acc.accepted & 1][key]++;
            if (key != kKeyMulti && key != kKeyNoFaces) {
                int u = (int)((key >> 33) & 1);
                acc.by_u[u][key]++;
            }
        },
        [](FingerprintSample& t, const FingerprintSample& p) { t.merge(p); });
    return total;
}

// ---------------------------------------------------------------------------
// One-arm analogue: the outermost open circuit in A(r, u) under one-arm
// conditioning to different outer geometries, compressed to per-sector radius
// bins.
// ---------------------------------------------------------------------------

inline uint64_t circuit_fingerprint(Window& win, const Box& hole, double u_radius) {
    // closed sites attached to the rim of B(u) from outside block the
    // outermost circuit; the circuit is the open layer against that blockade
    Box ubox{hole.center, u_radius, 0.0};
    win.new_pass();
    thread_local std::vector<int32_t> queue;
    queue.clear();
    for_each_site_in_box(ubox, [&](HexCoord h) {
        bool rim = false;
        for (int k = 0; k < 6 && !rim; ++k)
            if (!ubox.contains(h + neighbor_dirs()[k])) rim = true;
        if (!rim || win.open(h)) return;
        int32_t i = win.idx(h);
        if (!win.visited(i)) {
            win.visit(i);
            queue.push_back(i);
        }
    });
    for (size_t head = 0; head < queue.size(); ++head) {
        HexCoord h = win.site(queue[head]);
        for (int k = 0; k < 6; ++k) {
            HexCoord nb = h + neighbor_dirs()[k];
            if (!ubox.contains(nb) || hole.contains(nb)) continue;
            int32_t j = win.idx(nb);
            if (win.visited(j) || win.open(nb)) continue;
            win.visit(j);
            queue.push_back(j);
        }
    }
    // per-sector minimum radius over open sites adjacent to the blockade or
    // to the rim (the outermost circuit when it exists)
    double minr[4] = {1e300, 1e300, 1e300, 1e300};
    bool any = false;
    auto consider = [&](HexCoord h) {
        Vec2 rel = embed(h) - hole.center;
        double rad = std::max(std::fabs(rel.x), std::fabs(rel.y));
        int sector = (rel.x >= 0 ? (rel.y >= 0 ? 0 : 3) : (rel.y >= 0 ? 1 : 2));
        minr[sector] = std::min(minr[sector], rad);
        any = true;
    };
    for_each_site_in_box(ubox, [&](HexCoord h) {
        if (hole.contains(h) || !win.open(h)) return;
        bool against = false;
        for (int k = 0; k < 6 && !against; ++k) {
            HexCoord nb = h + neighbor_dirs()[k];
            if (!ubox.contains(nb)) against = true; // rim layer
            else if (win.visited(win.idx(nb))) against = true;
        }
        if (against) consider(h);
    });
    if (!any) return kKeyNoFaces;
    uint64_t key = 0;
    for (int sct = 0; sct < 4; ++sct) {
        int bin = minr[sct] > 1e200 ? 15 : std::min(15, (int)(minr[sct] / u_radius * 12));
        key |= (uint64_t)bin << (4 * sct);
    }
    return key;
}

inline FingerprintSample one_arm_circuit_fingerprints(double r, double u_radius, const Box& outer,
                                                      uint64_t attempts, uint64_t seed,
                                                      int workers) {
    Box hole{{0, 0}, r, 0.0};
    FingerprintSample total = run_sharded<FingerprintSample>(
        attempts, workers,
        [&](FingerprintSample& acc, uint64_t i) {
            acc.attempts++;
            SiteRng rng(seed, i);
            // one-arm conditioning: open crossing from the hole rim to the
            // outer box boundary (BFS, lazily colored, confined to outer)
            thread_local std::unique_ptr<Window> win;
            thread_local double win_key = -1;
            double need_radius = outer.radius + norm(outer.center) + 2;
            if (!win || win_key != need_radius) {
                win = std::make_unique<Window>(Box{{0, 0}, need_radius, outer.angle});
                win_key = need_radius;
            }
            win->new_pass();
            thread_local std::vector<int32_t> queue;
            queue.clear();
            for_each_site_in_box(hole, [&](HexCoord h) {
                for (int k = 0; k < 6; ++k) {
                    HexCoord nb = h + neighbor_dirs()[k];
                    if (hole.contains(nb) || !outer.contains(nb)) continue;
                    int32_t j = win->idx(nb);
                    if (win->visited(j)) continue;
                    win->visit(j);
                    if (rng.open(nb.q, nb.r)) queue.push_back(j);
                }
            });
            bool reached = false;
            for (size_t head = 0; head < queue.size() && !reached; ++head) {
                HexCoord h = win->site(queue[head]);
                for (int k = 0; k < 6; ++k) {
                    HexCoord nb = h + neighbor_dirs()[k];
                    if (!outer.contains(nb)) {
                        reached = true;
                        break;
                    }
                    if (hole.contains(nb)) continue;
                    int32_t j = win->idx(nb);
                    if (win->visited(j)) continue;
                    win->visit(j);
                    if (rng.open(nb.q, nb.r)) queue.push_back(j);
                }
            }
            if (!reached) return;
            win->materialize(rng);
            uint64_t key = circuit_fingerprint(*win, hole, u_radius);
            acc.accepted++;
            acc.hist[key]++;
            acc.halves[acc.accepted & 1][key]++;
        },
        [](FingerprintSample& t, const FingerprintSample& p) { t.merge(p); });
    return total;
}

// ---------------------------------------------------------------------------
// Relative-quality bookkeeping on endpoint sets (the hierarchical bounding
// box construction used by the separation argument), as a pure diagnostic.
// ---------------------------------------------------------------------------

struct EndpointHierarchy {
    std::vector<Vec2> points;
    double min_dist = 0;

    explicit EndpointHierarchy(std::vector<Vec2> pts) : points(std::move(pts)) {
        min_dist = 1e300;
        for (size_t i = 0; i < points.size(); ++i)
            for (size_t j = i + 1; j < points.size(); ++j)
                min_dist = std::min(min_dist, linf(points[i], points[j]));
    }

    static double linf(Vec2 a, Vec2 b) {
        return std::max(std::fabs(a.x - b.x), std::fabs(a.y - b.y));
    }

    // connected components of the graph joining points closer than
    // min_dist * 2^level
    std::vector<std::vector<int>> clusters(int level) const {
        double cut = min_dist * std::pow(2.0, level);
        int n = (int)points.size();
        std::vector<int> comp(n, -1);
        std::vector<std::vector<int>> out;
        for (int i = 0; i < n; ++i) {
            if (comp[i] >= 0) continue;
            std::vector<int> group{i};
            comp[i] = (int)out.size();
            for (size_t head = 0; head < group.size(); ++head) {
                for (int j = 0; j < n; ++j) {
                    if (comp[j] >= 0) continue;
                    if (linf(points[group[head]], points[j]) < cut) {
                        comp[j] = comp[i];
                        group.push_back(j);
                    }
                }
            }
            out.push_back(std::move(group));
        }
        return out;
    }

    // least intra-cluster distance at a level, normalized by the level scale
    double relative_quality(int level) const {
        double scale = (double)points.size() * min_dist * std::pow(2.0, level - 1);
        double best = 1e300;
        bool found = false;
        for (const auto& cl : clusters(level)) {
            for (size_t i = 0; i < cl.size(); ++i)
                for (size_t j = i + 1; j < cl.size(); ++j) {
                    best = std::min(best, linf(points[cl[i]], points[cl[j]]));
                    found = true;
                }
        }
        return found ? best / scale : 2.0 / (double)points.size();
    }
};

} // namespace perc
