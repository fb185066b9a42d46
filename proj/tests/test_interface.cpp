#include <catch2/catch_amalgamated.hpp>

#include "perc/interface.hpp"
#include "perc/oracle.hpp"

using namespace perc;

namespace {

RegionPtr annulus_region(const Annulus& a) { return make_region(annulus_sites(a)); }

bool open_crossing_bfs(const Configuration& c, const Annulus& a) {
    Box inner = a.inner_box(), outer = a.outer_box();
    std::unordered_set<HexCoord, HexHash> seen;
    std::vector<HexCoord> stack;
    for (HexCoord h : c.region().sites()) {
        if (!c.open(h)) continue;
        for (HexCoord nb : neighbors(h))
            if (inner.contains(nb)) {
                stack.push_back(h);
                seen.insert(h);
                break;
            }
    }
    while (!stack.empty()) {
        HexCoord h = stack.back();
        stack.pop_back();
        for (HexCoord nb : neighbors(h)) {
            if (!outer.contains(nb)) return true;
            if (c.in_region(nb) && c.open(nb) && !seen.count(nb)) {
                seen.insert(nb);
                stack.push_back(nb);
            }
        }
    }
    return false;
}

} // namespace

TEST_CASE("walk step keeps flanks adjacent and advances one triangle") {
    WalkState s{{0, 1}, {1, 0}, {1, 1}}; // wait: needs a valid triangle
    s = WalkState{{0, 1}, {1, 0}, {0, 0}};
    REQUIRE(adjacent(s.l, s.r));
    REQUIRE(adjacent(s.l, s.ahead));
    REQUIRE(adjacent(s.r, s.ahead));
    for (bool dir : {true, false}) {
        WalkState t = s;
        walk_step(t, dir);
        REQUIRE(adjacent(t.l, t.r));
        REQUIRE(adjacent(t.l, t.ahead));
        REQUIRE(adjacent(t.r, t.ahead));
    }
}

TEST_CASE("no crossing interfaces in constant configurations") {
    Annulus a{{0, 0}, 0.5, 3.2, 0.0};
    auto region = annulus_region(a);
    Configuration open_c = Configuration::constant(region, Color::Open);
    REQUIRE(crossing_interfaces(open_c, a).empty());
    Configuration closed_c = Configuration::constant(region, Color::Closed);
    REQUIRE(crossing_interfaces(closed_c, a).empty());
}

TEST_CASE("crossing interface count is even") {
    Annulus a{{0, 0}, 1.1, 6.2, 0.0};
    auto region = annulus_region(a);
    for (uint64_t i = 0; i < 2000; ++i) {
        Configuration c = Configuration::sample(region, 1234, i);
        REQUIRE(crossing_interfaces(c, a).size() % 2 == 0);
    }
}

TEST_CASE("quadrant coloring produces exactly four diagonal interfaces") {
    Annulus a{{0, 0}, 0.5, 3.4, 0.0};
    auto region = annulus_region(a);
    Configuration c = Configuration::constant(region, Color::Closed);
    for (HexCoord h : region->sites()) {
        Vec2 p = embed(h);
        if (std::fabs(p.x) > std::fabs(p.y)) c.set_raw(region->index_of(h), true);
    }
    auto crossings = crossing_interfaces(c, a);
    REQUIRE(crossings.size() == 4);
    // interior and exterior endpoints are spread to the four diagonals
    for (const InterfaceTrace& tr : crossings) {
        REQUIRE(std::fabs(std::fabs(tr.end.x) - std::fabs(tr.end.y)) < 1.5);
    }
}

TEST_CASE("radial exploration outcome equals open-crossing existence, exhaustively") {
    std::vector<Annulus> geoms = {
        {{0.3, 0.2}, 0.6, 2.1, 0.0},
        {{0.3, 0.2}, 0.5, 2.2, 0.0},
        {{0.1, -0.3}, 1.0, 2.2, 0.0},
        {{0, 0}, 1.2, 2.3, 0.0},
        {{0.5, 0.3}, 0.6, 2.2, 0.0},
    };
    for (const Annulus& a : geoms) {
        auto region = annulus_region(a);
        INFO("annulus sites " << region->size());
        REQUIRE(region->size() >= 10);
        REQUIRE(region->size() <= 19);
        auto mism = oracle::enumerate(region, [&](const Configuration& c) {
            return radial_exploration(c, a).reached_outer != open_crossing_bfs(c, a);
        });
        REQUIRE(mism.count == 0);
    }
}

TEST_CASE("radial exploration trivial cases") {
    Annulus a{{0, 0}, 0.5, 4.2, 0.0};
    auto region = annulus_region(a);
    Configuration open_c = Configuration::constant(region, Color::Open);
    auto r1 = radial_exploration(open_c, a);
    REQUIRE(r1.reached_outer);
    REQUIRE(r1.forced_turns == 0);
    Configuration closed_c = Configuration::constant(region, Color::Closed);
    auto r2 = radial_exploration(closed_c, a);
    REQUIRE(!r2.reached_outer);
}

TEST_CASE("radial exploration outcome on larger random annuli") {
    Annulus a{{0, 0}, 2.0, 12.0, 0.0};
    auto region = annulus_region(a);
    int outers = 0;
    for (uint64_t i = 0; i < 400; ++i) {
        Configuration c = Configuration::sample(region, 555, i);
        auto res = radial_exploration(c, a);
        REQUIRE(res.reached_outer == open_crossing_bfs(c, a));
        outers += res.reached_outer;
    }
    REQUIRE(outers > 0);
    REQUIRE(outers < 400);
}

TEST_CASE("chordal interface on constant quads hugs the opposite wiring") {
    DobrushinFrame f = dobrushin_rhombus(6, 5);
    auto region = make_region([&] {
        std::vector<HexCoord> s;
        for (int32_t r = 0; r < 5; ++r)
            for (int32_t q = 0; q < 6; ++q) s.push_back({q, r});
        return s;
    }());
    Configuration open_c = Configuration::constant(region, Color::Open);
    InterfaceTrace tr = chordal_interface(open_c, f);
    // all steps have a real open side and a virtual closed side on the arc ba
    for (const TraceStep& st : tr.steps) {
        REQUIRE(f.in_region(st.open_side));
        REQUIRE(!f.in_region(st.closed_side));
    }
    REQUIRE(tr.steps.size() >= 10); // hugs left + top + right boundaries

    Configuration closed_c = Configuration::constant(region, Color::Closed);
    InterfaceTrace tr2 = chordal_interface(closed_c, f);
    for (const TraceStep& st : tr2.steps) {
        REQUIRE(f.in_region(st.closed_side));
        REQUIRE(!f.in_region(st.open_side));
    }
}

TEST_CASE("chordal interface separates and is local") {
    DobrushinFrame f = dobrushin_rhombus(7, 6);
    std::vector<HexCoord> sites;
    for (int32_t r = 0; r < 6; ++r)
        for (int32_t q = 0; q < 7; ++q) sites.push_back({q, r});
    auto region = make_region(sites);
    for (uint64_t i = 0; i < 200; ++i) {
        Configuration c = Configuration::sample(region, 808, i);
        InterfaceTrace tr = chordal_interface(c, f);
        // every real open side connects to the open-wired exterior through
        // open sites (separation property)
        std::unordered_set<HexCoord, HexHash> open_reach;
        std::vector<HexCoord> stack;
        for (HexCoord h : sites)
            if (c.open(h) && h.r == 0) {
                stack.push_back(h);
                open_reach.insert(h);
            }
        while (!stack.empty()) {
            HexCoord h = stack.back();
            stack.pop_back();
            for (HexCoord nb : neighbors(h))
                if (region->contains(nb) && c.open(nb) && !open_reach.count(nb)) {
                    open_reach.insert(nb);
                    stack.push_back(nb);
                }
        }
        for (const TraceStep& st : tr.steps)
            if (f.in_region(st.open_side)) REQUIRE(open_reach.count(st.open_side) == 1);

        // flipping a site not adjacent to the trace leaves it unchanged
        std::unordered_set<HexCoord, HexHash> near_trace;
        for (const TraceStep& st : tr.steps) {
            for (HexCoord h : {st.open_side, st.closed_side}) {
                near_trace.insert(h);
                for (HexCoord nb : neighbors(h)) near_trace.insert(nb);
            }
        }
        for (HexCoord h : sites) {
            if (near_trace.count(h)) continue;
            InterfaceTrace tr2 = chordal_interface(c.flipped(h), f);
            REQUIRE(tr2.steps.size() == tr.steps.size());
            break; // one distant site per sample is enough
        }
    }
}

TEST_CASE("chordal trace agrees with an independent geometric stepper") {
    DobrushinFrame f = dobrushin_rhombus(5, 4);
    std::vector<HexCoord> sites;
    for (int32_t r = 0; r < 4; ++r)
        for (int32_t q = 0; q < 5; ++q) sites.push_back({q, r});
    auto region = make_region(sites);
    for (uint64_t i = 0; i < 500; ++i) {
        Configuration c = Configuration::sample(region, 17, i);
        auto ecolor = [&](HexCoord h) { return f.in_region(h) ? c.open(h) : f.ext_open(h); };
        // independent stepper: keep the undirected edge {a,b} and previous
        // triangle third t; pick the next third geometrically
        InterfaceTrace tr = chordal_interface(c, f);
        HexCoord a = f.start.l, b = f.start.r, t = f.start.l + f.start.r - f.start.ahead;
        size_t steps = 0;
        for (;;) {
            HexCoord w = a + b - t; // forward triangle third
            // continue along the edge of the forward triangle separating colors
            HexCoord na = a, nb = b;
            if (ecolor(w) == ecolor(a)) na = w; else nb = w;
            t = ecolor(w) == ecolor(a) ? a : b;
            a = na;
            b = nb;
            if (!f.in_region(a) && !f.in_region(b)) break;
            ++steps;
            REQUIRE(steps < 10000);
        }
        REQUIRE(steps == tr.steps.size());
    }
}
