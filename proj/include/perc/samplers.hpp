#pragma once

#include <array>
#include <cstring>

#include "perc/arms.hpp"
#include "perc/faces.hpp"
#include "perc/parallel.hpp"
#include "perc/rng.hpp"
#include "perc/stats.hpp"
#include "perc/unionfind.hpp"

namespace perc {

// Lazy per-sample color source: a pure function of (seed, index, site).
struct LatticeColor {
    SiteRng rng;
    LatticeColor(uint64_t seed, uint64_t index) : rng(seed, index) {}
    bool operator()(HexCoord h) const { return rng.open(h.q, h.r); }
};

// ---------------------------------------------------------------------------
// Window: a dense axial rectangle of cells covering a Euclidean box, with
// materialized colors and stamped scratch arrays reused across samples.
// ---------------------------------------------------------------------------

class Window {
public:
    explicit Window(const Box& cover, int margin = 2) {
        // covering axial ranges: |y| <= rad needs |r| <= rad/(sqrt(3)/2), and
        // q = x - r/2 widens accordingly
        double tilt = std::fabs(std::cos(cover.angle)) + std::fabs(std::sin(cover.angle));
        double rad = cover.radius * tilt + margin + 2.0;
        r0_ = (int32_t)std::floor((cover.center.y - rad) / kSqrt3Over2) - margin;
        int32_t r1 = (int32_t)std::ceil((cover.center.y + rad) / kSqrt3Over2) + margin;
        height_ = r1 - r0_ + 1;
        q0_ = (int32_t)std::floor(cover.center.x - rad - 0.5 * (double)r1) - margin;
        int32_t q1 = (int32_t)std::ceil(cover.center.x + rad - 0.5 * (double)r0_) + margin;
        width_ = q1 - q0_ + 1;
        size_t n = (size_t)width_ * height_;
        colors_.assign(n, 0);
        stamp_.assign(n, 0);
        label_.assign(n, -1);
        cur_stamp_ = 0;
    }

    bool in_window(HexCoord h) const {
        return h.q >= q0_ && h.q < q0_ + width_ && h.r >= r0_ && h.r < r0_ + height_;
    }
    int32_t idx(HexCoord h) const { return (h.r - r0_) * width_ + (h.q - q0_); }
    HexCoord site(int32_t i) const { return {q0_ + i % width_, r0_ + i / width_}; }
    size_t cell_count() const { return colors_.size(); }

    void materialize(const SiteRng& rng) {
        for (int32_t r = 0; r < height_; ++r) {
            uint64_t rk = rng.row_key(r0_ + r);
            uint8_t* row = colors_.data() + (size_t)r * width_;
            for (int32_t q = 0; q < width_; ++q)
                row[q] = SiteRng::open_in_row(rk, q0_ + q);
        }
    }
    void fill(const Configuration& c) {
        for (size_t i = 0; i < colors_.size(); ++i) {
            HexCoord h = site((int32_t)i);
            colors_[i] = c.in_region(h) && c.open(h);
        }
    }
    void set_open(HexCoord h, bool open) { colors_[idx(h)] = open; }

    bool open(HexCoord h) const { return colors_[idx(h)]; }
    bool open_checked(HexCoord h) const { return in_window(h) && colors_[idx(h)]; }

    // stamped visit marks (no clearing between samples)
    void new_pass() { ++cur_stamp_; }
    bool visited(int32_t i) const { return stamp_[i] == cur_stamp_; }
    void visit(int32_t i) { stamp_[i] = cur_stamp_; }

    // flood labels for one color within a membership predicate; labels are
    // valid for the current pass only
    template <class InRegion>
    int32_t flood_label(HexCoord seed, bool color, InRegion&& in_region, int32_t label) {
        int32_t s = idx(seed);
        if (visited(s)) return label_[s];
        std::vector<int32_t>& q = scratch_queue_;
        q.clear();
        q.push_back(s);
        visit(s);
        label_[s] = label;
        for (size_t head = 0; head < q.size(); ++head) {
            HexCoord h = site(q[head]);
            for (int k = 0; k < 6; ++k) {
                HexCoord nb = h + neighbor_dirs()[k];
                if (!in_window(nb) || !in_region(nb)) continue;
                int32_t j = idx(nb);
                if (visited(j) || colors_[j] != (uint8_t)color) continue;
                visit(j);
                label_[j] = label;
                q.push_back(j);
            }
        }
        return label;
    }
    int32_t label_of(HexCoord h) const {
        int32_t i = idx(h);
        return stamp_[i] == cur_stamp_ ? label_[i] : -1;
    }

private:
    int32_t q0_ = 0, r0_ = 0, width_ = 0, height_ = 0;
    std::vector<uint8_t> colors_;
    std::vector<uint32_t> stamp_;
    std::vector<int32_t> label_;
    uint32_t cur_stamp_;
    std::vector<int32_t> scratch_queue_;
};

// ---------------------------------------------------------------------------
// Site-centered and box-centered staged arm estimators (lazy walks).
// ---------------------------------------------------------------------------

// Geometry reused across samples: hole, rim starts, nested stage ladder with
// the requested radii as mandatory stages.
struct StagedArmGeom {
    Vec2 center{};
    double r_inner = 0.5;
    HexCoord hole_site{};
    bool single_site = true;
    Box hole_box{};
    std::vector<StartEdge> starts;
    std::vector<Box> stages;
    std::vector<int> level_of_radius; // stage index of each requested radius

    static StagedArmGeom site_centered(HexCoord x, const std::vector<double>& radii) {
        StagedArmGeom g;
        g.center = embed(x);
        g.hole_site = x;
        g.single_site = true;
        g.hole_box = Box{g.center, 0.5, 0.0};
        g.starts = hole_rim_starts({x}, [&](HexCoord h) { return h == x; });
        g.build_stages(radii);
        return g;
    }
    static StagedArmGeom box_centered(Vec2 center, double r_inner,
                                      const std::vector<double>& radii) {
        StagedArmGeom g;
        g.center = center;
        g.r_inner = r_inner;
        g.single_site = false;
        g.hole_box = Box{center, r_inner, 0.0};
        auto hole = box_sites(g.hole_box);
        if (hole.empty()) throw std::invalid_argument("staged arm probe: empty hole");
        Box hb = g.hole_box;
        g.starts = hole_rim_starts(hole, [hb](HexCoord h) { return hb.contains(h); });
        g.build_stages(radii);
        return g;
    }

    void build_stages(const std::vector<double>& radii) {
        double r = std::max(2.0 * std::max(r_inner, 0.5), 2.0);
        size_t next = 0;
        while (next < radii.size()) {
            if (r < radii[next] * 0.75) {
                stages.push_back({center, r, 0.0});
                r *= 2;
            } else {
                stages.push_back({center, radii[next], 0.0});
                level_of_radius.push_back((int)stages.size() - 1);
                r = radii[next] * 2;
                ++next;
            }
        }
    }

    bool in_hole(HexCoord h) const {
        return single_site ? h == hole_site : hole_box.contains(h);
    }
};

// per-sample staged crossing count with early abort below `need`; returns the
// index of the deepest requested radius reached with >= need crossings
// (-1 if none), plus optionally the surviving walks at the end.
template <class ColorFn>
inline int staged_arm_depth(const StagedArmGeom& g, ColorFn&& color, int need,
                            std::vector<CrossingRecord>* collect = nullptr,
                            std::vector<std::pair<int, double>>* quality_per_level = nullptr) {
    thread_local std::vector<CrossingRecord> alive;
    alive.clear();
    for (const StartEdge& e : g.starts) {
        bool cl = color(e.l);
        if (cl == color(e.r)) continue;
        CrossingRecord rec;
        rec.state = {e.l, e.r, e.ahead};
        rec.inner_end = edge_midpoint(rec.state);
        rec.left_open = cl;
        alive.push_back(rec);
    }
    int depth = -1;
    size_t next_level = 0;
    for (size_t k = 0; k < g.stages.size(); ++k) {
        const Box& box = g.stages[k];
        size_t kept = 0;
        for (size_t i = 0; i < alive.size(); ++i) {
            CrossingRecord& rec = alive[i];
            auto classify = [&](HexCoord h) -> int {
                if (g.in_hole(h)) return 1;
                if (!box.contains(h)) return 2;
                return 0;
            };
            if (run_walk(rec.state, rec.left_open, color, classify) == WalkEnd::HitOutside) {
                rec.outer_end = edge_midpoint(rec.state);
                alive[kept++] = rec;
            }
        }
        alive.resize(kept);
        if ((int)kept < need) break;
        if (next_level < g.level_of_radius.size() && (int)k == g.level_of_radius[next_level]) {
            depth = (int)next_level;
            ++next_level;
            if (quality_per_level) {
                double q = interior_quality(alive, g.center, 1.0); // un-normalized
                quality_per_level->push_back({depth, q});
            }
        }
    }
    if (collect) *collect = alive;
    return depth;
}

// Monte Carlo estimates of alternating arm probabilities at nested radii.
// need = 2j for the pattern (OC)^j; radii in lattice units.
struct LadderCounts {
    std::vector<uint64_t> hits; // hits[k]: >= need crossings out to radii[k]
    uint64_t n = 0;
    void init(size_t levels) { hits.assign(levels, 0); }
    void merge(const LadderCounts& o) {
        if (hits.size() < o.hits.size()) hits.resize(o.hits.size(), 0);
        for (size_t i = 0; i < o.hits.size(); ++i) hits[i] += o.hits[i];
        n += o.n;
    }
};

inline LadderCounts alternating_arm_ladder(const StagedArmGeom& g, int need, uint64_t n,
                                           uint64_t seed, int workers) {
    size_t levels = g.level_of_radius.size();
    return run_sharded<LadderCounts>(
        n, workers,
        [&](LadderCounts& acc, uint64_t i) {
            if (acc.hits.empty()) acc.init(levels);
            LatticeColor color(seed, i);
            int depth = staged_arm_depth(g, color, need);
            for (int k = 0; k <= depth; ++k) acc.hits[k]++;
            acc.n++;
        },
        [](LadderCounts& t, const LadderCounts& p) { t.merge(p); });
}

// ---------------------------------------------------------------------------
// One-arm ladder: BFS of the open cluster of the center site, lazily colored.
// The deepest radius whose boundary ring the cluster touches is recorded.
// ---------------------------------------------------------------------------

class OneArmSampler {
public:
    OneArmSampler(HexCoord x, std::vector<double> radii)
        : x_(x), radii_(std::move(radii)), win_(Box{embed(x), radii_.back() + 2, 0.0}) {
        for (double r : radii_) boxes_.push_back(Box{embed(x), r, 0.0});
    }

    // returns deepest level reached (-1 when the center is closed or the
    // cluster dies before the first radius)
    int sample(const SiteRng& rng) {
        win_.new_pass();
        if (!rng.open(x_.q, x_.r)) return -1;
        thread_local std::vector<int32_t> queue;
        queue.clear();
        int32_t s = win_.idx(x_);
        win_.visit(s);
        queue.push_back(s);
        const Box& final_box = boxes_.back();
        int deepest = -1;
        for (size_t head = 0; head < queue.size(); ++head) {
            HexCoord h = win_.site(queue[head]);
            for (int k = 0; k < 6; ++k) {
                HexCoord nb = h + neighbor_dirs()[k];
                while (deepest + 1 < (int)boxes_.size() && !boxes_[deepest + 1].contains(nb))
                    ++deepest;
                if (!final_box.contains(nb)) continue;
                int32_t j = win_.idx(nb);
                if (win_.visited(j)) continue;
                win_.visit(j);
                if (rng.open(nb.q, nb.r)) queue.push_back(j);
            }
            if (deepest + 1 == (int)boxes_.size()) break; // reached the top
        }
        return deepest;
    }

private:
    HexCoord x_;
    std::vector<double> radii_;
    Window win_;
    std::vector<Box> boxes_;
};

inline LadderCounts one_arm_ladder(const std::vector<double>& radii, uint64_t n, uint64_t seed,
                                   int workers) {
    return run_sharded<LadderCounts>(
        n, workers,
        [&](LadderCounts& acc, uint64_t i) {
            thread_local std::unique_ptr<OneArmSampler> sampler;
            thread_local std::vector<double> sampler_radii;
            if (!sampler || sampler_radii != radii) {
                sampler = std::make_unique<OneArmSampler>(HexCoord{0, 0}, radii);
                sampler_radii = radii;
            }
            if (acc.hits.empty()) acc.init(radii.size());
            SiteRng rng(seed, i);
            int depth = sampler->sample(rng);
            for (int k = 0; k <= depth; ++k) acc.hits[k]++;
            acc.n++;
        },
        [](LadderCounts& t, const LadderCounts& p) { t.merge(p); });
}

// ---------------------------------------------------------------------------
// Two-point connectivity: open path between two given sites inside a box.
// ---------------------------------------------------------------------------

class TwoPointSampler {
public:
    TwoPointSampler(HexCoord x, HexCoord y, double box_radius)
        : x_(x), y_(y),
          box_{0.5 * (embed(x) + embed(y)), box_radius, 0.0},
          win_(box_) {}

    bool sample(const SiteRng& rng) {
        if (!rng.open(x_.q, x_.r) || !rng.open(y_.q, y_.r)) return false;
        win_.new_pass();
        thread_local std::vector<int32_t> queue;
        queue.clear();
        int32_t s = win_.idx(x_);
        win_.visit(s);
        queue.push_back(s);
        for (size_t head = 0; head < queue.size(); ++head) {
            HexCoord h = win_.site(queue[head]);
            if (h == y_) return true;
            for (int k = 0; k < 6; ++k) {
                HexCoord nb = h + neighbor_dirs()[k];
                if (!box_.contains(nb)) continue;
                int32_t j = win_.idx(nb);
                if (win_.visited(j)) continue;
                win_.visit(j);
                if (rng.open(nb.q, nb.r)) queue.push_back(j);
            }
        }
        return false;
    }

private:
    HexCoord x_, y_;
    Box box_;
    Window win_;
};

// ---------------------------------------------------------------------------
// Crossing probability of an axial rhombus (open bottom-top crossing).
// ---------------------------------------------------------------------------

inline bool rhombus_crossing_sample(const SiteRng& rng, int32_t w, int32_t h, Window& win) {
    win.new_pass();
    thread_local std::vector<int32_t> queue;
    queue.clear();
    uint64_t rk = rng.row_key(0);
    for (int32_t q = 0; q < w; ++q) {
        if (SiteRng::open_in_row(rk, q)) {
            int32_t i = win.idx({q, 0});
            if (!win.visited(i)) {
                win.visit(i);
                queue.push_back(i);
            }
        }
    }
    for (size_t head = 0; head < queue.size(); ++head) {
        HexCoord s = win.site(queue[head]);
        if (s.r == h - 1) return true;
        for (int k = 0; k < 6; ++k) {
            HexCoord nb = s + neighbor_dirs()[k];
            if (nb.q < 0 || nb.q >= w || nb.r < 0 || nb.r >= h) continue;
            int32_t j = win.idx(nb);
            if (win.visited(j)) continue;
            win.visit(j);
            if (rng.open(nb.q, nb.r)) queue.push_back(j);
        }
    }
    return false;
}

} // namespace perc
