#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "tropgw/intvec.hpp"
#include "tropgw/rational.hpp"

namespace tropgw {

struct RatPoint {
    Rat x, y;
    friend bool operator==(const RatPoint&, const RatPoint&) = default;
    friend bool operator<(const RatPoint& a, const RatPoint& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    }
};

struct RatVec2 {
    Rat x, y;
    bool is_zero() const { return x == 0 && y == 0; }
};

inline RatVec2 operator-(const RatPoint& a, const RatPoint& b) { return {a.x - b.x, a.y - b.y}; }
inline RatPoint operator+(const RatPoint& p, const RatVec2& v) { return {p.x + v.x, p.y + v.y}; }
inline RatVec2 to_rat(IntVec2 v) { return {Rat(v.x), Rat(v.y)}; }
inline RatVec2 scale_vec(const RatVec2& v, const Rat& t) { return {v.x * t, v.y * t}; }

inline Rat pairing(const RatVec2& v, const RatVec2& w) { return v.x * w.y - v.y * w.x; }
inline Rat pairing(const RatVec2& v, IntVec2 w) { return v.x * w.y - v.y * w.x; }
inline Rat pairing(IntVec2 v, const RatVec2& w) { return Rat(v.x) * w.y - Rat(v.y) * w.x; }
inline Rat dot(const RatVec2& v, IntVec2 w) { return v.x * w.x + v.y * w.y; }
inline Rat norm2(const RatVec2& v) { return v.x * v.x + v.y * v.y; }

inline RatVec2 apply(const Mat2& m, const RatVec2& v) {
    return {Rat(m.a) * v.x + Rat(m.b) * v.y, Rat(m.c) * v.x + Rat(m.d) * v.y};
}

struct PathThroughSingularity : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RayHitsSingularity : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OnBoundary : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedSingularityType : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TrivialMonodromy : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Focus-focus singularity presented in a single chart with two branch cuts.
// The open sector swept counterclockwise from cut_minus to cut_plus is
// discarded; the cuts are glued by x -> position + matrix (x - position),
// which maps the cut_plus ray onto the cut_minus ray.
struct Singularity {
    RatPoint position;
    IntVec2 cut_plus;  // primitive direction of l+
    IntVec2 cut_minus; // primitive direction of l-
    Mat2 matrix;       // maps cut_plus direction to cut_minus direction
    IntVec2 invariant_dir;

    bool valid() const {
        if (!is_focus_focus(matrix)) return false;
        if (matrix.apply(cut_plus) != cut_minus) return false;
        IntVec2 inv = invariant_direction(matrix);
        if (inv != invariant_dir && inv != -invariant_dir) return false;
        // sector strictly less than a half turn
        return pairing(cut_minus, cut_plus) > 0;
    }

    // Direction strictly inside the discarded sector.
    bool dir_in_sector(const RatVec2& d) const {
        return pairing(to_rat(cut_minus), d) > 0 && pairing(d, to_rat(cut_plus)) > 0;
    }
    bool point_in_open_sector(const RatPoint& p) const {
        RatVec2 v = p - position;
        if (v.is_zero()) return false;
        return dir_in_sector(v);
    }
    // p lies on the given cut ray, the singular point excluded.
    bool on_cut(const RatPoint& p, bool plus) const {
        RatVec2 v = p - position;
        if (v.is_zero()) return false;
        IntVec2 d = plus ? cut_plus : cut_minus;
        return pairing(v, d) == 0 && dot(v, d) > 0;
    }
    RatPoint glue_plus_to_minus(const RatPoint& p) const {
        return position + apply(matrix, p - position);
    }
    RatPoint glue_minus_to_plus(const RatPoint& p) const {
        return position + apply(matrix.inverse(), p - position);
    }
};

// cross_cut: transports v across the cut of s. orientation +1 crosses l+
// (applies the matrix), -1 crosses l- (applies the inverse).
inline IntVec2 cross_cut(IntVec2 v, const Singularity& s, int orientation) {
    return orientation > 0 ? s.matrix.apply(v) : s.matrix.inverse().apply(v);
}

// At a non-apex point of the given cut ray, whether direction v points
// strictly into the discarded sector. The sector occupies the clockwise side
// of l+ and the counterclockwise side of l-.
inline bool enters_sector_from_cut(const Singularity& s, bool plus, IntVec2 v) {
    return plus ? pairing(s.cut_plus, v) < 0 : pairing(s.cut_minus, v) > 0;
}

enum class Region { X, Y, XYInv };

inline const char* region_name(Region r) {
    switch (r) {
        case Region::X: return "x";
        case Region::Y: return "y";
        default: return "1/xy";
    }
}

// The chart-with-cuts presentation of the base. For the CPS P^2 instance the
// three regions of the chart are available; toy bases have no singularities.
struct AffineBase {
    std::vector<Singularity> sings;
    bool has_regions = false; // CPS region structure present
    Rat radius = 8;           // bounding radius for all scattering-era tracing

    // --- point classification -------------------------------------------

    bool is_singular_point(const RatPoint& p) const {
        for (auto& s : sings)
            if (p == s.position) return true;
        return false;
    }
    bool in_discarded_sector(const RatPoint& p) const {
        for (auto& s : sings)
            if (s.point_in_open_sector(p)) return true;
        return false;
    }
    // index of the singularity whose l+ (plus=true) or l- contains p
    std::optional<int> cut_index(const RatPoint& p, bool plus) const {
        for (int i = 0; i < (int)sings.size(); ++i)
            if (sings[i].on_cut(p, plus)) return i;
        return std::nullopt;
    }
    // A chart point is canonical unless it lies on some l-; those re-represent
    // on the corresponding l+ through the gluing.
    RatPoint canonical_point(const RatPoint& p) const {
        if (auto i = cut_index(p, false)) return sings[*i].glue_minus_to_plus(p);
        return p;
    }
    // Valid chart representative: outside closed sectors except the owned l+.
    bool is_valid_point(const RatPoint& p) const {
        if (is_singular_point(p)) return false;
        if (in_discarded_sector(p)) return false;
        if (cut_index(p, false)) return false; // l- points are aliases
        return true;
    }

    // --- CPS regions ------------------------------------------------------

    // Regions are only defined for the CPS chart layout (three singularities
    // u1=(1/2,1/2), u2=(0,-1/2), u3=(-1/2,0) with the standard cuts).
    Region region_of(const RatPoint& p) const {
        if (!has_regions) throw std::logic_error("base has no region structure");
        const Rat h(1, 2);
        auto between = [](const Rat& v, const Rat& lo, const Rat& hi) {
            return v > lo && v < hi;
        };
        // x-region: right of the corner segments, between l1- and l2+.
        if (p.x > 0 && between(p.y, -h, p.x <= h ? p.x : h)) return Region::X;
        // y-region: mirror image across the diagonal.
        if (p.y > 0 && between(p.x, -h, p.y <= h ? p.y : h)) return Region::Y;
        // 1/xy-region: the strip between the two diagonal cuts, lower left.
        if (p.x < 0 && p.y < 0 && between(p.y - p.x, -h, h)) return Region::XYInv;
        throw OnBoundary("point on a region boundary or outside all regions");
    }

    // Pairing vector defining the scale in a region.
    static IntVec2 scale_covector(Region r) {
        switch (r) {
            case Region::X: return {1, 0};
            case Region::Y: return {0, 1};
            default: return {-1, -1};
        }
    }
    // Outward monodromy-invariant direction of each region near infinity.
    static IntVec2 outward_direction(Region r) {
        switch (r) {
            case Region::X: return {1, 0};
            case Region::Y: return {0, 1};
            default: return {-1, -1};
        }
    }
    static std::int64_t scale(IntVec2 v, Region r) {
        IntVec2 c = scale_covector(r);
        return v.x * c.x + v.y * c.y;
    }

    // Region of a far point reached travelling outward (the wedge structure
    // extends to infinity; cut rays bound the wedges outside the core).
    Region region_at_infinity(const RatPoint& far_point) const {
        return region_of(far_point);
    }
};

// The explicit affine base for P^2 minus a smooth cubic (Carl-Pumperla-
// Siebert chart): three focus-focus points with radial cuts.
inline AffineBase cps_p2_base() {
    AffineBase b;
    b.has_regions = true;
    const Rat h(1, 2);
    Singularity u1{{h, h}, {0, 1}, {1, 0}, Mat2{2, 1, -1, 0}, {1, -1}};
    Singularity u2{{0, -h}, {1, 0}, {-1, -1}, Mat2{-1, 4, -1, 3}, {2, 1}};
    Singularity u3{{-h, 0}, {-1, -1}, {0, 1}, Mat2{-1, 1, -4, 3}, {1, 2}};
    b.sings = {u1, u2, u3};
    for (auto& s : b.sings)
        if (!s.valid()) throw std::logic_error("cps_p2_base: invalid singularity data");
    return b;
}

// Chart with no singularities (for toy diagrams).
inline AffineBase toy_base() {
    AffineBase b;
    b.radius = 8;
    return b;
}

// Counterclockwise monodromy of a loop enclosing exactly the given
// singularities, based just after the reference direction seen from the loop.
// Crossing l- counterclockwise applies the inverse gluing matrix; the
// traversal teleports across each discarded sector, which is sound because no
// sector contains another singularity's cut.
inline Mat2 loop_monodromy(const AffineBase& base, const std::vector<int>& which,
                           IntVec2 ref = {1, 0}) {
    std::vector<std::pair<IntVec2, int>> events; // (l- direction, sing index)
    events.reserve(which.size());
    for (int i : which) events.push_back({base.sings[i].cut_minus, i});
    CcwFrom cmp{ref};
    std::sort(events.begin(), events.end(),
              [&](auto& a, auto& b) { return cmp(a.first, b.first); });
    Mat2 m = Mat2::identity();
    for (auto& [dir, i] : events) m = base.sings[i].matrix.inverse().mul(m);
    return m;
}

inline Mat2 total_monodromy(const AffineBase& base) {
    std::vector<int> all(base.sings.size());
    for (int i = 0; i < (int)all.size(); ++i) all[i] = i;
    // base direction not parallel to any crossing event
    for (IntVec2 ref : {IntVec2{1, 0}, {5, 1}, {1, 5}, {7, 3}, {3, 7}, {11, 2}}) {
        bool ok = true;
        for (int i : all)
            if (pairing(ref, base.sings[i].cut_minus) == 0) ok = false;
        if (ok) return loop_monodromy(base, all, ref);
    }
    throw std::logic_error("no reference direction for the total monodromy");
}

} // namespace tropgw
