#pragma once

#include "perc/arms.hpp"
#include "perc/faces.hpp"

namespace perc {

// Weighted Dirac masses on sites or edges. Atoms are stored raw (weight 1);
// the normalization is metadata applied at report time, so runs can be
// re-normalized with better arm-probability references later.
struct PointMeasure {
    enum class Kind { Pivotal4, Cluster1, Interface2, Raw };

    struct Atom {
        Vec2 position{};
        HexCoord site{}; // for edge atoms: the open flank
        double weight = 1.0;
    };

    std::vector<Atom> atoms;
    Kind kind = Kind::Raw;
    double mesh = 1.0;           // eta
    double alpha_reference = 0.0; // estimated alpha_k(eta, 1); 0 = raw

    double normalized_weight() const {
        if (alpha_reference <= 0.0) return 1.0;
        return mesh * mesh / alpha_reference;
    }
    double total_mass() const {
        double m = 0;
        for (const Atom& a : atoms) m += a.weight;
        return m * normalized_weight();
    }
    std::vector<HexCoord> atom_sites() const {
        std::vector<HexCoord> out;
        out.reserve(atoms.size());
        for (const Atom& a : atoms) out.push_back(a.site);
        std::sort(out.begin(), out.end());
        return out;
    }
};

// all quad-pivotal sites
inline PointMeasure pivotal_measure(const Configuration& c, const Quad& q, double mesh = 1.0,
                                    double alpha4_ref = 0.0) {
    PointMeasure m;
    m.kind = PointMeasure::Kind::Pivotal4;
    m.mesh = mesh;
    m.alpha_reference = alpha4_ref;
    bool base = has_crossing(c, q, Color::Open);
    for (HexCoord h : q.region->sites()) {
        if (has_crossing(c.flipped(h), q, Color::Open) != base)
            m.atoms.push_back({embed(h), h, 1.0});
    }
    return m;
}

// all A-important sites of the inner face
inline PointMeasure A_important_measure(const Configuration& c, const Annulus& a,
                                        double mesh = 1.0, double alpha4_ref = 0.0) {
    PointMeasure m;
    m.kind = PointMeasure::Kind::Pivotal4;
    m.mesh = mesh;
    m.alpha_reference = alpha4_ref;
    for (HexCoord h : box_sites(a.inner_box())) {
        if (!c.in_region(h)) continue;
        if (is_A_important(c, h, a)) m.atoms.push_back({embed(h), h, 1.0});
    }
    return m;
}

// sites of the inner face with an open arm to the outer boundary
inline PointMeasure cluster_measure(const Configuration& c, const Annulus& a, double mesh = 1.0,
                                    double alpha1_ref = 0.0) {
    PointMeasure m;
    m.kind = PointMeasure::Kind::Cluster1;
    m.mesh = mesh;
    m.alpha_reference = alpha1_ref;
    // open clusters restricted to the outer box; an inner-face site counts
    // when its cluster touches the outer rim
    Box outer = a.outer_box();
    auto region = make_region(box_sites(outer));
    Configuration cr = detail::restrict_config(c, region);
    ClusterIndex idx(cr, Color::Open);
    std::unordered_set<int32_t> live;
    for (HexCoord h : region->sites()) {
        bool rim = false;
        for (int k = 0; k < 6 && !rim; ++k)
            if (!outer.contains(h + neighbor_dirs()[k])) rim = true;
        if (!rim || !cr.open(h)) continue;
        live.insert(idx.root(h));
    }
    for (HexCoord h : box_sites(a.inner_box())) {
        if (!cr.open(h)) continue;
        if (live.count(idx.root(h))) m.atoms.push_back({embed(h), h, 1.0});
    }
    return m;
}

// edges of the chordal exploration trace
inline PointMeasure interface_measure(const Configuration& c, const DobrushinFrame& f,
                                      double mesh = 1.0, double alpha2_ref = 0.0) {
    PointMeasure m;
    m.kind = PointMeasure::Kind::Interface2;
    m.mesh = mesh;
    m.alpha_reference = alpha2_ref;
    InterfaceTrace tr = chordal_interface(c, f);
    for (const TraceStep& st : tr.steps) {
        Vec2 pos = 0.5 * (embed(st.open_side) + embed(st.closed_side));
        m.atoms.push_back({pos, st.open_side, 1.0});
    }
    return m;
}

// rho-important sites of a domain
inline PointMeasure rho_measure(const Configuration& c, const Box& domain, double rho,
                                double mesh = 1.0, double alpha4_ref = 0.0) {
    if (rho <= 0) throw std::invalid_argument("rho_measure: rho must be positive");
    PointMeasure m;
    m.kind = PointMeasure::Kind::Pivotal4;
    m.mesh = mesh;
    m.alpha_reference = alpha4_ref;
    for (HexCoord h : box_sites(domain)) {
        if (is_rho_important(c, h, rho)) m.atoms.push_back({embed(h), h, 1.0});
    }
    return m;
}

// ---------------------------------------------------------------------------
// Enhanced tilings: families of annuli whose inner faces tile the domain.
// ---------------------------------------------------------------------------

struct EnhancedTiling {
    std::vector<Annulus> annuli;

    // uniform square tiling of a domain box: inner faces of radius tile_r on
    // a grid of pitch 2*tile_r, outer boxes of radius outer_r
    static EnhancedTiling uniform(const Box& domain, double tile_r, double outer_r) {
        EnhancedTiling t;
        EpsGrid grid{tile_r, domain.center, 0.0};
        double span = domain.radius + 2 * tile_r;
        int64_t m = (int64_t)std::ceil(span / (2 * tile_r)) + 1;
        for (int64_t i = -m; i <= m; ++i)
            for (int64_t j = -m; j <= m; ++j) {
                Box tile = grid.square_at(i, j);
                // keep annuli whose tile intersects the domain
                Vec2 d = tile.center - domain.center;
                if (std::fabs(d.x) > domain.radius + tile_r ||
                    std::fabs(d.y) > domain.radius + tile_r)
                    continue;
                t.annuli.push_back(Annulus{tile.center, tile_r, outer_r, 0.0});
            }
        return t;
    }

    // which annulus owns a site (its inner face contains it); -1 if none
    int32_t owner(HexCoord h) const {
        for (size_t i = 0; i < annuli.size(); ++i)
            if (annuli[i].inner_box().contains(h)) return (int32_t)i;
        return -1;
    }

    void validate_tiling(const std::vector<HexCoord>& domain_sites) const {
        for (HexCoord h : domain_sites) {
            int owners = 0;
            for (const Annulus& a : annuli)
                if (a.inner_box().contains(h)) ++owners;
            if (owners != 1) throw std::invalid_argument("tiling_measure: not a tiling");
        }
    }
};

// an enhanced tiling refines another when every annulus with an intersecting
// inner face has its outer box contained in the other's
inline bool refines(const EnhancedTiling& h1, const EnhancedTiling& h2) {
    for (const Annulus& a : h1.annuli) {
        Box b1 = a.inner_box();
        Box b2 = a.outer_box();
        for (const Annulus& ap : h2.annuli) {
            Box b1p = ap.inner_box();
            // inner faces intersect? compare as axis-aligned boxes
            if (std::fabs(b1.center.x - b1p.center.x) >= b1.radius + b1p.radius ||
                std::fabs(b1.center.y - b1p.center.y) >= b1.radius + b1p.radius)
                continue;
            Box b2p = ap.outer_box();
            // containment of b2 in b2p (both axis aligned)
            if (b2.center.x - b2.radius < b2p.center.x - b2p.radius ||
                b2.center.x + b2.radius > b2p.center.x + b2p.radius ||
                b2.center.y - b2.radius < b2p.center.y - b2p.radius ||
                b2.center.y + b2.radius > b2p.center.y + b2p.radius)
                return false;
        }
    }
    return true;
}

// sum of the A-important measures over the tiling: every site is counted for
// the unique annulus whose inner face contains it
inline PointMeasure tiling_measure(const Configuration& c, const EnhancedTiling& t,
                                   const std::vector<HexCoord>& domain_sites, double mesh = 1.0,
                                   double alpha4_ref = 0.0) {
    t.validate_tiling(domain_sites);
    PointMeasure m;
    m.kind = PointMeasure::Kind::Pivotal4;
    m.mesh = mesh;
    m.alpha_reference = alpha4_ref;
    for (HexCoord h : domain_sites) {
        int32_t own = t.owner(h);
        if (own < 0) continue;
        if (is_A_important(c, h, t.annuli[own])) m.atoms.push_back({embed(h), h, 1.0});
    }
    return m;
}

// number of grid squares contained in B whose doubled square has the
// alternating four-arm event to the target's outer boundary
inline int grid_count_Y(const Configuration& c, const Box& b, const Box& target_outer,
                        const EpsGrid& grid, double mesh = 1.0) {
    if (grid.eps <= 2 * mesh)
        throw std::invalid_argument("grid_count_Y: grid too fine for mesh");
    int count = 0;
    for (const GridSquare& gs : grid_squares_in(grid, b)) {
        // snap the doubled square to the tile nearest the square center
        auto center_sites = box_sites(Box{gs.q.center, 0.75, 0.0});
        if (center_sites.empty()) continue;
        HexCoord q0 = center_sites.front();
        double best = 1e300;
        for (HexCoord h : center_sites) {
            double d = dist(embed(h), gs.q.center);
            if (d < best) {
                best = d;
                q0 = h;
            }
        }
        Box hole{embed(q0), 2 * grid.eps, grid.angle};
        auto hole_sites = box_sites(hole);
        auto starts = hole_rim_starts(hole_sites, [&](HexCoord h) { return hole.contains(h); });
        int crossers = 0;
        for (const StartEdge& e : starts) {
            if (!c.in_region(e.l) || !c.in_region(e.r)) continue;
            bool cl = c.open(e.l);
            if (cl == c.open(e.r)) continue;
            WalkState s{e.l, e.r, e.ahead};
            auto classify = [&](HexCoord h) -> int {
                if (hole.contains(h)) return 1;
                if (!target_outer.contains(h) || !c.in_region(h)) return 2;
                return 0;
            };
            auto color = [&](HexCoord h) { return c.open(h); };
            if (run_walk(s, cl, color, classify) == WalkEnd::HitOutside) ++crossers;
        }
        if (crossers >= 4) ++count;
    }
    return count;
}

} // namespace perc
