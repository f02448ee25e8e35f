#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tropgw {

// Integral tangent vector / boundary class in the chart lattice.
struct IntVec2 {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend bool operator==(const IntVec2&, const IntVec2&) = default;
    friend auto operator<=>(const IntVec2&, const IntVec2&) = default;

    IntVec2 operator+(IntVec2 o) const { return {x + o.x, y + o.y}; }
    IntVec2 operator-(IntVec2 o) const { return {x - o.x, y - o.y}; }
    IntVec2 operator-() const { return {-x, -y}; }
    IntVec2 operator*(std::int64_t k) const { return {x * k, y * k}; }
    bool is_zero() const { return x == 0 && y == 0; }
};

// Antisymmetric lattice pairing <v,w> = v.x*w.y - v.y*w.x.
inline std::int64_t pairing(IntVec2 v, IntVec2 w) { return v.x * w.y - v.y * w.x; }

inline std::int64_t content(IntVec2 v) {
    return std::gcd(v.x < 0 ? -v.x : v.x, v.y < 0 ? -v.y : v.y);
}

inline IntVec2 primitive(IntVec2 v) {
    if (v.is_zero()) throw std::invalid_argument("primitive of zero vector");
    auto g = content(v);
    return {v.x / g, v.y / g};
}

// True if w is a positive multiple of v.
inline bool positively_parallel(IntVec2 v, IntVec2 w) {
    return pairing(v, w) == 0 && v.x * w.x + v.y * w.y > 0;
}

// Strict ccw order on nonzero directions starting just after direction `ref`.
// Angle class: half-plane split first, then cross product within a half-plane.
struct CcwFrom {
    IntVec2 ref;
    // 0 if d ~ ref (positively parallel), else 1..: position in the ccw sweep.
    static int half(IntVec2 r, IntVec2 d) {
        auto cr = pairing(r, d);
        if (cr > 0) return 0;                 // strictly ccw side, first half
        if (cr < 0) return 1;                 // second half
        return (r.x * d.x + r.y * d.y) > 0 ? -1 : 0; // parallel: -1 = same dir
    }
    bool operator()(IntVec2 a, IntVec2 b) const {
        int ha = half(ref, a), hb = half(ref, b);
        // same direction as ref sorts last (sweep starts just after ref)
        int ka = (ha == -1) ? 2 : ha, kb = (hb == -1) ? 2 : hb;
        if (ka != kb) return ka < kb;
        if (ka == 2) return false;
        auto cr = pairing(a, b);
        if (cr != 0) return cr > 0;
        return false;
    }
};

// 2x2 integer matrix acting on column vectors; rows stored.
struct Mat2 {
    std::int64_t a = 1, b = 0, c = 0, d = 1; // [[a,b],[c,d]]

    friend bool operator==(const Mat2&, const Mat2&) = default;

    IntVec2 apply(IntVec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 mul(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    std::int64_t det() const { return a * d - b * c; }
    std::int64_t trace() const { return a + d; }
    Mat2 inverse() const {
        auto dt = det();
        if (dt != 1 && dt != -1) throw std::invalid_argument("non-unimodular matrix");
        if (dt == 1) return {d, -b, -c, a};
        return {-d, b, c, -a};
    }
    static Mat2 identity() { return {}; }
    bool is_identity() const { return *this == Mat2{}; }
};

// SL2(Z) matrix conjugate to [[1,1],[0,1]]: trace 2, det 1, not the identity.
inline bool is_focus_focus(const Mat2& m) {
    return m.det() == 1 && m.trace() == 2 && !m.is_identity();
}

// For trace-2 unipotent M != I, gcd of the entries of M - I. A loop matrix is
// conjugate to [[1,k],[0,1]] exactly when this gcd equals k.
inline std::int64_t unipotent_index(const Mat2& m) {
    auto g = std::gcd(std::gcd(std::abs(m.a - 1), std::abs(m.b)),
                      std::gcd(std::abs(m.c), std::abs(m.d - 1)));
    return g;
}

// Primitive generator of ker(M - I) for a focus-focus matrix.
inline IntVec2 invariant_direction(const Mat2& m) {
    // (M - I) v = 0; rank 1 for focus-focus matrices.
    IntVec2 r1{m.a - 1, m.b}, r2{m.c, m.d - 1};
    IntVec2 row = r1.is_zero() ? r2 : r1;
    if (row.is_zero()) throw std::invalid_argument("identity has no invariant direction");
    return primitive({row.y, -row.x});
}

} // namespace tropgw
