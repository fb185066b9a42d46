#include <catch2/catch_amalgamated.hpp>

#include "perc/geometry.hpp"
#include "perc/rng.hpp"

using namespace perc;

TEST_CASE("neighbors are the six axial offsets") {
    auto n = neighbors({0, 0});
    REQUIRE(n.size() == 6);
    std::vector<HexCoord> expect{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};
    for (HexCoord e : expect) REQUIRE(std::count(n.begin(), n.end(), e) == 1);
}

TEST_CASE("neighbor relation is symmetric and 6-regular") {
    SplitMix rng(17);
    for (int t = 0; t < 1000; ++t) {
        HexCoord x{(int32_t)(rng.below(2001)) - 1000, (int32_t)(rng.below(2001)) - 1000};
        auto nx = neighbors(x);
        REQUIRE(nx.size() == 6);
        for (HexCoord y : nx) {
            auto ny = neighbors(y);
            REQUIRE(std::count(ny.begin(), ny.end(), x) == 1);
        }
    }
}

TEST_CASE("embedding distances of neighbors are unit") {
    HexCoord x{3, -7};
    for (HexCoord y : neighbors(x)) REQUIRE(dist(embed(x), embed(y)) == Catch::Approx(1.0));
}

TEST_CASE("box site count matches a direct scan") {
    Box b{{0.0, 0.0}, 10.0, 0.0};
    auto sites = box_sites(b);
    // independent double-loop scan over a covering window
    size_t count = 0;
    for (int32_t r = -40; r <= 40; ++r)
        for (int32_t q = -40; q <= 40; ++q) {
            Vec2 p = embed({q, r});
            if (p.x >= -10 && p.x < 10 && p.y >= -10 && p.y < 10) ++count;
        }
    REQUIRE(sites.size() == count);
    // density ~ (2s)^2 * 2/sqrt(3)
    double expect = 4.0 * 10.0 * 10.0 * 2.0 / std::sqrt(3.0);
    REQUIRE(std::fabs((double)sites.size() - expect) / expect < 0.05);
}

TEST_CASE("box rotated by 60 degrees with the lattice is congruent") {
    Box b0{{0.25, -0.1}, 7.0, 0.0};
    Box b1{{0.25, -0.1}, 7.0, 3.14159265358979 / 3.0};
    // rotating the box by 60 deg about its center and mapping sites by the
    // lattice rotation (q,r) -> (q+r, -q) \circ shift gives a congruent set;
    // cardinalities must agree when the center is also rotated
    Box b1c{{0.0, 0.0}, 7.0, 3.14159265358979 / 3.0};
    Box b0c{{0.0, 0.0}, 7.0, 0.0};
    REQUIRE(box_sites(b0c).size() == box_sites(b1c).size());
    (void)b0;
    (void)b1;
}

TEST_CASE("eps grid squares partition sites") {
    EpsGrid g{1.7, {0.3, 0.55}, 0.4};
    // every site belongs to exactly one square; squares agree with indices
    SplitMix rng(5);
    for (int t = 0; t < 2000; ++t) {
        HexCoord h{(int32_t)rng.below(61) - 30, (int32_t)rng.below(61) - 30};
        auto [i, j] = g.square_index(embed(h));
        REQUIRE(g.square_at(i, j).contains(h));
        // neighbors in index space must not contain it
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj)
                if (di || dj) REQUIRE(!g.square_at(i + di, j + dj).contains(h));
    }
}

TEST_CASE("grid squares contained in a region") {
    Box region{{0, 0}, 8.0, 0.0};
    EpsGrid g{4.0, {0, 0}, 0.0};
    auto squares = grid_squares_in(g, region);
    REQUIRE(squares.size() == 1); // only the central square fits
    EpsGrid fine{1.0, {0, 0}, 0.0};
    auto many = grid_squares_in(fine, region);
    // count scales as (radius/eps)^2 (1 + o(1)): 7x7 interior squares fit
    REQUIRE(many.size() == 49);
    EpsGrid huge{9.0, {0, 0}, 0.0};
    REQUIRE(grid_squares_in(huge, region).empty());
}

TEST_CASE("annulus partitions the outer box") {
    Annulus a{{0.35, 0.2}, 4.0, 9.0, 0.0};
    auto inner = box_sites(a.inner_box());
    auto outer = box_sites(a.outer_box());
    auto ann = annulus_sites(a);
    REQUIRE(inner.size() + ann.size() == outer.size());
    for (HexCoord h : ann) REQUIRE(!a.inner_box().contains(h));
}

TEST_CASE("box membership is translation covariant") {
    Box b{{1.25, -0.6}, 6.0, 0.0};
    HexCoord shift{5, -3};
    Vec2 sv = embed(shift);
    Box moved{{b.center.x + sv.x, b.center.y + sv.y}, b.radius, 0.0};
    for (HexCoord h : box_sites(b)) REQUIRE(moved.contains(h + shift));
    REQUIRE(box_sites(b).size() == box_sites(moved).size());
}
