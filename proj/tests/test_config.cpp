#include <catch2/catch_amalgamated.hpp>

#include "perc/config.hpp"
#include "perc/parallel.hpp"

using namespace perc;

TEST_CASE("sampling is reproducible bit for bit") {
    auto region = make_region(box_sites({{0, 0}, 12.0, 0.0}));
    Configuration a = Configuration::sample(region, 42, 7);
    Configuration b = Configuration::sample(region, 42, 7);
    REQUIRE(a.raw() == b.raw());
    Configuration c = Configuration::sample(region, 42, 8);
    REQUIRE(a.raw() != c.raw());
}

TEST_CASE("empty region is rejected") {
    auto region = make_region({});
    REQUIRE_THROWS(Configuration::sample(region, 1, 0));
}

TEST_CASE("open density is 1/2 within CLT bounds") {
    // 10^6 sites, 4 sigma band: 0.5 +- 0.002
    SiteRng rng(2024, 0);
    uint64_t open = 0, n = 0;
    for (int32_t r = -500; r < 500; ++r)
        for (int32_t q = -500; q < 500; ++q) {
            open += rng.open(q, r);
            ++n;
        }
    double density = (double)open / (double)n;
    REQUIRE(std::fabs(density - 0.5) < 0.002);
}

TEST_CASE("neighbor pair correlation is unbiased") {
    SiteRng rng(99, 3);
    int64_t agree = 0, n = 0;
    for (int32_t r = -300; r < 300; ++r)
        for (int32_t q = -300; q < 300; ++q) {
            agree += rng.open(q, r) == rng.open(q + 1, r);
            ++n;
        }
    REQUIRE(std::fabs((double)agree / n - 0.5) < 0.004);
}

TEST_CASE("flip is a local involution") {
    auto region = make_region(box_sites({{0, 0}, 5.0, 0.0}));
    Configuration c = Configuration::sample(region, 3, 0);
    HexCoord s{1, 1};
    Configuration f = flip(c, s);
    REQUIRE(f.open(s) != c.open(s));
    size_t diff = 0;
    for (HexCoord h : region->sites())
        if (f.open(h) != c.open(h)) ++diff;
    REQUIRE(diff == 1);
    REQUIRE(flip(f, s).raw() == c.raw());
    long delta = (long)f.open_count() - (long)c.open_count();
    REQUIRE((delta == 1 || delta == -1));
    REQUIRE_THROWS(flip(c, HexCoord{100, 100}));
}

TEST_CASE("flip of all-open keeps neighbors open") {
    auto region = make_region(box_sites({{0, 0}, 4.0, 0.0}));
    Configuration c = Configuration::constant(region, Color::Open);
    Configuration f = flip(c, {0, 0});
    for (HexCoord nb : neighbors({0, 0})) REQUIRE(f.open(nb));
}

TEST_CASE("shard decomposition is order independent") {
    // statistics computed from the union of per-index samples agree no
    // matter how the index range is partitioned, because colors are pure
    // functions of (seed, index, site)
    uint64_t seed = 77;
    auto stat = [&](uint64_t index) {
        SiteRng rng(seed, index);
        int s = 0;
        for (int32_t q = 0; q < 16; ++q)
            for (int32_t r = 0; r < 16; ++r) s += rng.open(q, r);
        return s;
    };
    int64_t direct = 0;
    for (uint64_t i = 0; i < 200; ++i) direct += stat(i);
    struct Acc {
        int64_t sum = 0;
    };
    for (int workers : {1, 3, 8}) {
        Acc total = run_sharded<Acc>(
            200, workers, [&](Acc& a, uint64_t i) { a.sum += stat(i); },
            [](Acc& t, const Acc& p) { t.sum += p.sum; });
        REQUIRE(total.sum == direct);
    }
}

TEST_CASE("color flip symmetry of a translation invariant statistic") {
    // mean open-neighbor-pair count matches between flipped and unflipped
    // ensembles within a generous CI
    auto region = make_region(box_sites({{0, 0}, 16.0, 0.0}));
    double a = 0, b = 0;
    int n = 200;
    for (int i = 0; i < n; ++i) {
        Configuration c = Configuration::sample(region, 5, i);
        Configuration f = c.color_flipped();
        auto pairs = [&](const Configuration& cf) {
            int count = 0;
            for (HexCoord h : region->sites()) {
                HexCoord nb = h + neighbor_dirs()[0];
                if (region->contains(nb) && cf.open(h) && cf.open(nb)) ++count;
            }
            return count;
        };
        a += pairs(c);
        b += pairs(f);
    }
    REQUIRE(std::fabs(a - b) / a < 0.02);
}

TEST_CASE("rle round trip") {
    auto region = make_region(box_sites({{0, 0}, 9.0, 0.0}));
    Configuration c = Configuration::sample(region, 11, 0);
    auto runs = rle_encode(c.raw());
    REQUIRE(rle_decode(runs) == c.raw());
}
