#include <catch2/catch_amalgamated.hpp>

#include "perc/arms.hpp"
#include "perc/faces.hpp"
#include "perc/oracle.hpp"

using namespace perc;

namespace {

RegionPtr annulus_region(const Annulus& a) { return make_region(annulus_sites(a)); }

// exhaustive agreement of the production detector with the first-principles
// oracle decision for a list of patterns
void check_patterns_exhaustive(const Annulus& a, const std::vector<std::string>& patterns) {
    AnnulusContext ctx(a);
    auto region = ctx.region;
    INFO("annulus sites: " << region->size());
    REQUIRE(region->size() <= 19);
    auto sa = oracle::SmallAnnulus::make(region, [&](HexCoord h) {
        return a.inner_box().contains(h);
    });
    size_t n = region->size();
    Configuration c = Configuration::constant(region, Color::Closed);
    uint64_t mismatches = 0;
    for (uint64_t mask = 0; mask < (1ull << n); ++mask) {
        for (size_t i = 0; i < n; ++i) c.set_raw((int32_t)i, (mask >> i) & 1);
        for (const std::string& p : patterns) {
            bool fast = arm_event(c, ctx, ArmPattern{p});
            bool slow = oracle::arm_event_small(sa, c, p);
            if (fast != slow) {
                ++mismatches;
                INFO("pattern " << p << " mask " << mask);
                REQUIRE(fast == slow);
            }
        }
    }
    REQUIRE(mismatches == 0);
}

} // namespace

TEST_CASE("arm events agree with exhaustive enumeration on five geometries") {
    std::vector<Annulus> geoms = {
        {{0.3, 0.2}, 0.6, 2.1, 0.0},
        {{0.3, 0.2}, 0.5, 2.2, 0.0},
        {{0.1, -0.3}, 1.0, 2.2, 0.0},
        {{0, 0}, 1.2, 2.3, 0.0},
        {{0.5, 0.3}, 0.6, 2.2, 0.0},
    };
    for (const Annulus& a : geoms)
        check_patterns_exhaustive(a, {"O", "C", "OC", "OCOC"});
}

TEST_CASE("doubled-color patterns agree with enumeration") {
    std::vector<Annulus> geoms = {
        {{0.3, 0.2}, 0.6, 2.1, 0.0},
        {{0, 0}, 1.2, 2.3, 0.0},
    };
    for (const Annulus& a : geoms)
        check_patterns_exhaustive(a, {"OOC", "OCC", "OCOCC", "OOCOC"});
}

TEST_CASE("constant configurations") {
    Annulus a{{0, 0}, 0.8, 3.3, 0.0};
    auto region = annulus_region(a);
    Configuration open_c = Configuration::constant(region, Color::Open);
    REQUIRE(arm_event(open_c, a, ArmPattern{"O"}));
    REQUIRE(!arm_event(open_c, a, ArmPattern{"OC"}));
    REQUIRE(!arm_event(open_c, a, ArmPattern{"OCOC"}));
}

TEST_CASE("pattern validation") {
    REQUIRE_THROWS(ArmPattern{"OO"}.validate());
    REQUIRE_THROWS(ArmPattern{""}.validate());
    REQUIRE_THROWS(ArmPattern{"OX"}.validate());
    ArmPattern{"OCOCC"}.validate();
}

TEST_CASE("degenerate annulus is an error") {
    Annulus a{{0.25, 0.1}, 1.97, 1.99, 0.0};
    REQUIRE(annulus_sites(a).empty());
    auto region = make_region(box_sites(a.outer_box()));
    Configuration c = Configuration::constant(region, Color::Open);
    REQUIRE_THROWS(arm_event(c, a, ArmPattern{"O"}));
}

TEST_CASE("robust quality on the quadrant coloring") {
    Annulus a{{0, 0}, 0.5, 3.4, 0.0};
    auto region = annulus_region(a);
    Configuration c = Configuration::constant(region, Color::Closed);
    for (HexCoord h : region->sites()) {
        Vec2 p = embed(h);
        if (std::fabs(p.x) > std::fabs(p.y)) c.set_raw(region->index_of(h), true);
    }
    auto [qi, qo] = robust_arm_quality(c, a);
    REQUIRE(qi >= 1.0);
    REQUIRE(qo >= 1.0);
    Configuration open_c = Configuration::constant(region, Color::Open);
    auto [zi, zo] = robust_arm_quality(open_c, a);
    REQUIRE(zi == 0.0);
    REQUIRE(zo == 0.0);
}

TEST_CASE("site importance agrees with enumeration") {
    // disc minus the center site; importance of the center = alternating four
    // arms from the center to the outer rim
    std::vector<Annulus> pool = {
        {{0.3, 0.2}, 0.5, 2.2, 0.0},   {{0.2, 0.1}, 0.5, 2.15, 0.0},
        {{0.3, 0.2}, 0.5, 2.1, 0.0},   {{-0.25, 0.1}, 0.5, 2.1, 0.0},
        {{0.1, -0.2}, 0.5, 2.1, 0.0},  {{0.4, 0.3}, 0.5, 2.1, 0.0},
        {{-0.1, -0.35}, 0.5, 2.1, 0.0}, {{0.45, -0.15}, 0.5, 2.1, 0.0},
    };
    std::vector<Annulus> geoms;
    for (const Annulus& a : pool) {
        if (geoms.size() == 5) break;
        if (box_sites(a.inner_box()).size() == 1 && annulus_sites(a).size() <= 19)
            geoms.push_back(a);
    }
    REQUIRE(geoms.size() == 5);
    for (const Annulus& a : geoms) {
        auto hole_sites = box_sites(a.inner_box());
        HexCoord x = hole_sites[0];
        auto region = annulus_region(a);
        auto sa = oracle::SmallAnnulus::make(region, [&](HexCoord h) { return h == x; });
        size_t n = region->size();
        Configuration c = Configuration::constant(region, Color::Closed);
        for (uint64_t mask = 0; mask < (1ull << n); ++mask) {
            for (size_t i = 0; i < n; ++i) c.set_raw((int32_t)i, (mask >> i) & 1);
            bool fast = is_A_important(c, x, a);
            bool slow = oracle::arm_event_small(sa, c, "OCOC");
            if (fast != slow) {
                INFO("mask " << mask);
                REQUIRE(fast == slow);
            }
        }
    }
}

TEST_CASE("importance restriction: smaller outer boxes keep importance") {
    Annulus big{{0, 0}, 0.5, 5.2, 0.0};
    auto region = annulus_region(big);
    HexCoord x{0, 0};
    int found = 0;
    for (uint64_t i = 0; i < 4000 && found < 25; ++i) {
        Configuration c = Configuration::sample(region, 22, i);
        if (!is_A_important(c, x, big)) continue;
        ++found;
        for (double r2 : {4.2, 3.2, 2.2}) {
            Annulus smaller{{0, 0}, 0.5, r2, 0.0};
            REQUIRE(is_A_important(c, x, smaller));
        }
    }
    REQUIRE(found > 0);
}

TEST_CASE("rho importance monotone in rho") {
    Annulus a{{0, 0}, 0.5, 6.2, 0.0};
    std::vector<HexCoord> sites = annulus_sites(a);
    sites.push_back({0, 0});
    auto region = make_region(sites);
    for (uint64_t i = 0; i < 2000; ++i) {
        Configuration c = Configuration::sample(region, 7, i);
        bool big = is_rho_important(c, {0, 0}, 6.2);
        bool small = is_rho_important(c, {0, 0}, 3.1);
        if (big) REQUIRE(small);
    }
}

TEST_CASE("all-closed has no important site") {
    Annulus a{{0, 0}, 0.5, 3.2, 0.0};
    auto region = annulus_region(a);
    Configuration c = Configuration::constant(region, Color::Closed);
    REQUIRE(!is_A_important(c, {0, 0}, a));
}

TEST_CASE("pivotality flip test equals arm test, exhaustively") {
    for (auto [w, h] : {std::pair{4, 4}, {5, 3}, {3, 5}}) {
        Quad q = Quad::rhombus(w, h);
        size_t n = q.region->size();
        REQUIRE(n <= 16);
        Configuration c = Configuration::constant(q.region, Color::Closed);
        for (uint64_t mask = 0; mask < (1ull << n); ++mask) {
            for (size_t i = 0; i < n; ++i) c.set_raw((int32_t)i, (mask >> i) & 1);
            for (HexCoord x : q.region->sites()) {
                bool by_flip = is_quad_pivotal(c, x, q);
                bool by_arms = quad_pivotal_arms(c, x, q);
                if (by_flip != by_arms) {
                    INFO("quad " << w << "x" << h << " mask " << mask << " site (" << x.q << ","
                                 << x.r << ")");
                    REQUIRE(by_flip == by_arms);
                }
            }
        }
    }
}

TEST_CASE("pivotality on random larger quads") {
    Quad q = Quad::rhombus(9, 8);
    for (uint64_t i = 0; i < 150; ++i) {
        Configuration c = Configuration::sample(q.region, 3131, i);
        for (HexCoord x : q.region->sites())
            REQUIRE(is_quad_pivotal(c, x, q) == quad_pivotal_arms(c, x, q));
    }
}

TEST_CASE("single-file quad: every open site on an all-open column is pivotal") {
    Quad q = Quad::rhombus(1, 6);
    Configuration c = Configuration::constant(q.region, Color::Open);
    for (HexCoord x : q.region->sites()) REQUIRE(is_quad_pivotal(c, x, q));
}

TEST_CASE("wide all-open quad has no pivotal interior site") {
    Quad q = Quad::rhombus(8, 8);
    Configuration c = Configuration::constant(q.region, Color::Open);
    REQUIRE(!is_quad_pivotal(c, {4, 4}, q));
}
