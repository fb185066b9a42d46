#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace perc {

// Axial coordinates on the triangular lattice. Euclidean embedding (in units
// of the mesh): x = q + r/2, y = r*sqrt(3)/2. Every site has 6 neighbors.
struct HexCoord {
    int32_t q = 0;
    int32_t r = 0;

    friend bool operator==(HexCoord a, HexCoord b) { return a.q == b.q && a.r == b.r; }
    friend bool operator!=(HexCoord a, HexCoord b) { return !(a == b); }
    friend bool operator<(HexCoord a, HexCoord b) {
        return a.r != b.r ? a.r < b.r : a.q < b.q;
    }
    friend HexCoord operator+(HexCoord a, HexCoord b) { return {a.q + b.q, a.r + b.r}; }
    friend HexCoord operator-(HexCoord a, HexCoord b) { return {a.q - b.q, a.r - b.r}; }
};

struct HexHash {
    size_t operator()(HexCoord c) const {
        uint64_t x = ((uint64_t)(uint32_t)c.q << 32) | (uint32_t)c.r;
        x ^= x >> 33; x *= 0xff51afd7ed558ccdull; x ^= x >> 33;
        return (size_t)x;
    }
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
};

inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

constexpr double kSqrt3Over2 = 0.8660254037844386467637231707529;

// Embedding in lattice units (mesh = 1). Physical coordinates are mesh*embed.
inline Vec2 embed(HexCoord c) {
    return {c.q + 0.5 * c.r, kSqrt3Over2 * c.r};
}

// Neighbor offsets in counterclockwise order.
inline const HexCoord* neighbor_dirs() {
    static const HexCoord dirs[6] = {
        {1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1},
    };
    return dirs;
}

inline std::vector<HexCoord> neighbors(HexCoord c) {
    std::vector<HexCoord> out;
    out.reserve(6);
    for (int k = 0; k < 6; ++k) out.push_back(c + neighbor_dirs()[k]);
    return out;
}

inline bool adjacent(HexCoord a, HexCoord b) {
    for (int k = 0; k < 6; ++k)
        if (a + neighbor_dirs()[k] == b) return true;
    return false;
}

// Axis-aligned-in-its-own-frame square of given radius (half side length),
// possibly rotated. Site membership is half-open: the embedded center must
// lie in center + e^{i angle} [-radius, radius)^2. Lengths are in lattice
// units throughout the geometry layer; callers apply the mesh.
struct Box {
    Vec2 center{};
    double radius = 0.0;
    double angle = 0.0;

    bool contains_point(Vec2 p) const {
        Vec2 d = p - center;
        double c = std::cos(angle), s = std::sin(angle);
        double u = c * d.x + s * d.y;
        double v = -s * d.x + c * d.y;
        return u >= -radius && u < radius && v >= -radius && v < radius;
    }
    bool contains(HexCoord h) const { return contains_point(embed(h)); }

    Box scaled(double lambda) const { return {lambda * center, lambda * radius, angle}; }
};

struct Annulus {
    Vec2 center{};
    double r_inner = 0.0;
    double r_outer = 0.0;
    double angle = 0.0;

    Box inner_box() const { return {center, r_inner, angle}; }
    Box outer_box() const { return {center, r_outer, angle}; }
};

// Grid of 2eps-side squares centered at 2eps*e^{i theta}*Z^2 + shift. The
// half-open box rule makes the squares tile the plane with no site counted
// twice.
struct EpsGrid {
    double eps = 0.0;
    Vec2 shift{};
    double angle = 0.0;

    // index of the grid square containing an embedded point
    std::pair<int64_t, int64_t> square_index(Vec2 p) const {
        Vec2 d = p - shift;
        double c = std::cos(angle), s = std::sin(angle);
        double u = c * d.x + s * d.y;
        double v = -s * d.x + c * d.y;
        return {(int64_t)std::floor((u + eps) / (2 * eps)),
                (int64_t)std::floor((v + eps) / (2 * eps))};
    }
    Box square_at(int64_t i, int64_t j) const {
        double c = std::cos(angle), s = std::sin(angle);
        Vec2 off{2 * eps * i, 2 * eps * j};
        Vec2 rot{c * off.x - s * off.y, s * off.x + c * off.y};
        return {shift + rot, eps, angle};
    }
};

// Enumerate lattice sites whose embedded centers lie in the box. Plain scan
// over the covering axial window.
template <class F>
inline void for_each_site_in_box(const Box& b, F&& f) {
    double rad = b.radius * 1.4142135623730951 + 2.0;
    int32_t r_lo = (int32_t)std::floor((b.center.y - rad) / kSqrt3Over2) - 1;
    int32_t r_hi = (int32_t)std::ceil((b.center.y + rad) / kSqrt3Over2) + 1;
    for (int32_t r = r_lo; r <= r_hi; ++r) {
        double x0 = b.center.x;
        int32_t q_lo = (int32_t)std::floor(x0 - rad - 0.5 * r) - 1;
        int32_t q_hi = (int32_t)std::ceil(x0 + rad - 0.5 * r) + 1;
        for (int32_t q = q_lo; q <= q_hi; ++q) {
            HexCoord h{q, r};
            if (b.contains(h)) f(h);
        }
    }
}

inline std::vector<HexCoord> box_sites(const Box& b) {
    std::vector<HexCoord> out;
    for_each_site_in_box(b, [&](HexCoord h) { out.push_back(h); });
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<HexCoord> annulus_sites(const Annulus& a) {
    std::vector<HexCoord> out;
    Box inner = a.inner_box();
    for_each_site_in_box(a.outer_box(), [&](HexCoord h) {
        if (!inner.contains(h)) out.push_back(h);
    });
    std::sort(out.begin(), out.end());
    return out;
}

// Grid squares fully contained in `region`, paired with the concentric
// doubled square 2Q.
struct GridSquare {
    Box q;
    Box q2;
    int64_t i = 0, j = 0;
};

inline std::vector<GridSquare> grid_squares_in(const EpsGrid& g, const Box& region) {
    std::vector<GridSquare> out;
    if (g.eps <= 0) throw std::invalid_argument("grid_squares_in: eps must be positive");
    // scan a generous index window around the region
    double span = region.radius + 4 * g.eps + norm(region.center - g.shift);
    int64_t n = (int64_t)std::ceil(span / (2 * g.eps)) + 1;
    for (int64_t i = -n; i <= n; ++i) {
        for (int64_t j = -n; j <= n; ++j) {
            Box q = g.square_at(i, j);
            // containment of the closed square by its 4 corners
            bool inside = true;
            double c = std::cos(q.angle), s = std::sin(q.angle);
            for (int cx = -1; cx <= 1 && inside; cx += 2)
                for (int cy = -1; cy <= 1 && inside; cy += 2) {
                    Vec2 corner{q.center.x + (cx * q.radius) * c - (cy * q.radius) * s,
                                q.center.y + (cx * q.radius) * s + (cy * q.radius) * c};
                    Vec2 d = corner - region.center;
                    double cc = std::cos(region.angle), ss = std::sin(region.angle);
                    double u = cc * d.x + ss * d.y, v = -ss * d.x + cc * d.y;
                    if (u < -region.radius || u > region.radius || v < -region.radius ||
                        v > region.radius)
                        inside = false;
                }
            if (inside) out.push_back({q, Box{q.center, 2 * g.eps, q.angle}, i, j});
        }
    }
    return out;
}

// Boundary of a site set: members with at least one neighbor outside the set.
template <class Contains>
inline std::vector<HexCoord> boundary_layer(const std::vector<HexCoord>& sites, Contains&& in) {
    std::vector<HexCoord> out;
    for (HexCoord h : sites) {
        for (int k = 0; k < 6; ++k) {
            if (!in(h + neighbor_dirs()[k])) {
                out.push_back(h);
                break;
            }
        }
    }
    return out;
}

} // namespace perc
