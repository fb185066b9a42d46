#include <catch2/catch_amalgamated.hpp>

#include "perc/faces.hpp"
#include "perc/oracle.hpp"
#include "test_util.hpp"

using namespace perc;
using namespace perc::testutil;

TEST_CASE("no faces off the event G") {
    Annulus a{{0, 0}, 1.1, 4.2, 0.0};
    auto region = annulus_region(a);
    Configuration open_c = Configuration::constant(region, Color::Open);
    REQUIRE(!extract_faces(open_c, a).has_value());
    // wide quadrants have four interfaces but carry extra disjoint arms
    Configuration quad = quadrant_config(region);
    REQUIRE(crossing_interfaces(quad, a).size() == 4);
    REQUIRE(!exactly_four_arms(quad, a));
    REQUIRE(!extract_faces(quad, a).has_value());
}

TEST_CASE("pinched four-arm configuration is on G and yields faces") {
    Annulus a{{0, 0}, 1.1, 4.2, 0.0};
    auto region = annulus_region(a);
    Configuration c = pinched_four_arm_config(region);
    auto crossings = crossing_interfaces(c, a);
    REQUIRE(crossings.size() == 4);
    REQUIRE(exactly_four_arms(c, a));
    auto fc = extract_faces(c, a);
    REQUIRE(fc.has_value());
    REQUIRE(fc->endpoints.size() == 4);
    // quality of the face configuration equals the interface quality
    double q = 1e300;
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = i + 1; j < 4; ++j)
            q = std::min(q, dist(crossings[i].start, crossings[j].start));
    q /= a.r_inner;
    REQUIRE(fc->quality == Catch::Approx(q));
    for (const auto& face : fc->open_faces)
        for (HexCoord h : face) REQUIRE(c.open(h));
    for (const auto& face : fc->closed_faces)
        for (HexCoord h : face) REQUIRE(!c.open(h));
}

TEST_CASE("u_theta on the pinched configuration follows the interior row") {
    Annulus a{{0, 0}, 1.1, 4.2, 0.0};
    std::vector<HexCoord> all = annulus_sites(a);
    for (HexCoord h : box_sites(a.inner_box())) all.push_back(h);
    auto big_region = make_region(all);
    Configuration c = pinched_four_arm_config(big_region);
    auto fc = extract_faces(c, a);
    REQUIRE(fc.has_value());
    // the open x-axis row continues through the hole: the two open faces
    // connect inside D
    REQUIRE(u_theta(c, *fc) == 1);
    // closing the interior row cuts the connection
    Configuration blocked = c;
    for (HexCoord h : fc->interior)
        if (std::fabs(embed(h).y) < 0.6) blocked.set_raw(big_region->index_of(h), false);
    REQUIRE(u_theta(blocked, *fc) == 0);
}

TEST_CASE("u_theta agrees with exhaustive interior search") {
    Annulus a{{0, 0}, 0.6, 2.6, 0.0};
    auto region = annulus_region(a);
    std::vector<HexCoord> all = region->sites();
    for (HexCoord h : box_sites(a.inner_box())) all.push_back(h);
    auto big_region = make_region(all);
    AnnulusContext ctx(a);
    int checked = 0;
    for (uint64_t i = 0; i < 20000 && checked < 200; ++i) {
        Configuration c = Configuration::sample(big_region, 404, i);
        auto fc = extract_faces(c, ctx);
        if (!fc.has_value()) continue;
        ++checked;
        std::unordered_set<HexCoord, HexHash> allowed;
        for (HexCoord h : fc->interior)
            if (c.open(h)) allowed.insert(h);
        for (HexCoord h : fc->open_faces[0]) allowed.insert(h);
        for (HexCoord h : fc->open_faces[1]) allowed.insert(h);
        std::unordered_set<HexCoord, HexHash> target(fc->open_faces[1].begin(),
                                                     fc->open_faces[1].end());
        std::vector<HexCoord> stack(fc->open_faces[0].begin(), fc->open_faces[0].end());
        std::unordered_set<HexCoord, HexHash> seen(stack.begin(), stack.end());
        bool reach = false;
        while (!stack.empty() && !reach) {
            HexCoord h = stack.back();
            stack.pop_back();
            if (target.count(h)) {
                reach = true;
                break;
            }
            for (HexCoord nb : neighbors(h))
                if (allowed.count(nb) && !seen.count(nb)) {
                    seen.insert(nb);
                    stack.push_back(nb);
                }
        }
        REQUIRE(u_theta(c, *fc) == (reach ? 1 : 0));
    }
    REQUIRE(checked >= 50);
}

TEST_CASE("faces exist exactly on G for random samples") {
    // G given four arms is likely only when the radii are well separated
    // (the extra-arm probability decays in the ratio)
    Annulus a{{0, 0}, 3.0, 18.0, 0.0};
    auto region = make_region(box_sites(a.outer_box()));
    AnnulusContext ctx(a);
    int on_g = 0;
    for (uint64_t i = 0; i < 3000; ++i) {
        Configuration c = Configuration::sample(region, 99, i);
        bool g = on_event_g(c, ctx);
        auto fc = extract_faces(c, ctx);
        REQUIRE(fc.has_value() == g);
        if (!g) continue;
        ++on_g;
        REQUIRE(fc->endpoints.size() == 4);
        for (const auto& face : fc->open_faces) REQUIRE(!face.empty());
        for (const auto& face : fc->closed_faces) REQUIRE(!face.empty());
        u_theta(c, *fc); // interior states defined: must not throw
    }
    REQUIRE(on_g > 12);
}
