#pragma once

#include <cassert>
#include <optional>
#include <vector>

#include "tropgw/affine_base.hpp"

namespace tropgw {

// One straight piece of a traced ray in the chart. frame maps vectors from
// the ray's base frame into this segment's frame (product of cut matrices).
struct Segment {
    RatPoint a;
    RatPoint b;
    IntVec2 dir; // primitive direction of travel in this chart
    Mat2 frame;
};

struct CrossEvent {
    int sing;
    bool plus;   // which cut ray was hit
    RatPoint at; // chart point of the hit, on the cut that was hit
};

// Refracted polyline support of a ray together with its crossing events.
struct TransportPath {
    std::vector<Segment> segments;
    std::vector<CrossEvent> events;
    bool exited = false;   // left the bounding radius
    IntVec2 exit_dir{};    // direction of the final segment
    Mat2 exit_frame{};     // base frame -> exit frame
};

namespace detail {

struct TraceEvent {
    Rat t;
    int sing = -1;   // -1: singularity hit irrelevant
    bool plus = false;
    bool hits_singularity = false;
};

// Earliest event along p + t v for t in (0, tmax]; tmax <= 0 means unbounded.
inline std::optional<TraceEvent> first_event(const AffineBase& base, const RatPoint& p,
                                             const RatVec2& v, const Rat& tmax) {
    std::optional<TraceEvent> best;
    auto consider = [&](const TraceEvent& e) {
        if (tmax > 0 && e.t > tmax) return;
        if (!best || e.t < best->t ||
            (e.t == best->t && e.hits_singularity && !best->hits_singularity))
            best = e;
    };
    for (int i = 0; i < (int)base.sings.size(); ++i) {
        const Singularity& s = base.sings[i];
        RatVec2 w = s.position - p;
        // direct hit of the singular point (covers riding along a cut into it)
        if (!w.is_zero() && pairing(w, v) == 0) {
            Rat dv = dot(w, {1, 0}) * v.x + dot(w, {0, 1}) * v.y; // w . v
            if (dv > 0) {
                Rat t = (v.x != 0) ? w.x / v.x : w.y / v.y;
                consider({t, i, false, true});
            }
        }
        for (bool plus : {true, false}) {
            IntVec2 d = plus ? s.cut_plus : s.cut_minus;
            Rat den = pairing(v, d);
            if (den == 0) continue; // parallel: riding, or disjoint
            Rat t = pairing(w, d) / den;
            Rat u = pairing(w, v) / den;
            if (t <= 0 || u <= 0) continue; // u == 0 handled as direct hit
            consider({t, i, plus, false});
        }
    }
    return best;
}

} // namespace detail

// Traces the affine ray from `start` in direction `dir`, refracting at each
// cut crossing, until it leaves the bounding radius or max_segments is hit.
// The start may lie on an owned cut ray (l+) or on an l- alias point.
inline TransportPath trace_ray(const AffineBase& base, const RatPoint& start, IntVec2 dir,
                               int max_segments = 64) {
    if (dir.is_zero()) throw std::invalid_argument("trace_ray: zero direction");
    TransportPath path;
    RatPoint p = start;
    IntVec2 v = primitive(dir);
    Mat2 frame = Mat2::identity();
    const Rat r2 = base.radius * base.radius;

    // a start on a cut pointing into the sector lives in the glued chart
    for (bool moved = true; moved;) {
        moved = false;
        for (auto& s : base.sings) {
            if (s.on_cut(p, true) && enters_sector_from_cut(s, true, v)) {
                p = s.glue_plus_to_minus(p);
                v = s.matrix.apply(v);
                frame = s.matrix.mul(frame);
                moved = true;
            } else if (s.on_cut(p, false) && enters_sector_from_cut(s, false, v)) {
                p = s.glue_minus_to_plus(p);
                v = s.matrix.inverse().apply(v);
                frame = s.matrix.inverse().mul(frame);
                moved = true;
            }
        }
    }

    for (int seg = 0; seg < max_segments; ++seg) {
        auto ev = detail::first_event(base, p, to_rat(v), Rat(0));
        if (!ev) {
            // no further crossings: run the final segment well past the radius
            Rat step = base.radius * 4 + 1;
            RatVec2 ext = scale_vec(to_rat(v), step);
            path.segments.push_back({p, p + ext, v, frame});
            path.exited = true;
            path.exit_dir = v;
            path.exit_frame = frame;
            return path;
        }
        RatPoint q = p + scale_vec(to_rat(v), ev->t);
        if (ev->hits_singularity && norm2(q - RatPoint{0, 0}) <= r2)
            throw RayHitsSingularity("ray hits a singular point");
        path.segments.push_back({p, q, v, frame});
        if (ev->hits_singularity) {
            path.exited = true;
            path.exit_dir = v;
            path.exit_frame = frame;
            return path;
        }
        const Singularity& s = base.sings[ev->sing];
        RatPoint landing = ev->plus ? s.glue_plus_to_minus(q) : s.glue_minus_to_plus(q);
        // the chart radius is not glue-invariant: a crossing point and its
        // glued partner may straddle the bounding circle. Stop only when both
        // representatives are outside.
        if (norm2(q - RatPoint{0, 0}) > r2 && norm2(landing - RatPoint{0, 0}) > r2) {
            path.exited = true;
            path.exit_dir = v;
            path.exit_frame = frame;
            return path;
        }
        path.events.push_back({ev->sing, ev->plus, q});
        const Mat2 m = ev->plus ? s.matrix : s.matrix.inverse();
        p = landing;
        v = m.apply(v);
        frame = m.mul(frame);
        // the continuation must point off the target cut back into B
        assert(!enters_sector_from_cut(s, !ev->plus, v));
    }
    throw std::runtime_error("trace_ray: segment budget exhausted");
}

// Parallel transport of a lattice vector along a piecewise path given by
// displacement vectors from `start`; each displacement is interpreted in the
// developed frame of the current chart, and crossings teleport through the
// gluing. Errors out if a leg passes through a singular point.
inline IntVec2 transport(const AffineBase& base, const RatPoint& start,
                         const std::vector<RatVec2>& displacements, IntVec2 v) {
    RatPoint p = start;
    Mat2 acc = Mat2::identity();
    for (RatVec2 leg0 : displacements) {
        RatVec2 leg = apply(acc, leg0);
        while (!leg.is_zero()) {
            auto ev = detail::first_event(base, p, leg, Rat(1));
            if (!ev) {
                p = p + leg;
                break;
            }
            if (ev->hits_singularity)
                throw PathThroughSingularity("path leg hits a singular point");
            const Singularity& s = base.sings[ev->sing];
            RatPoint q = p + scale_vec(leg, ev->t);
            RatVec2 rest = {leg.x * (1 - ev->t), leg.y * (1 - ev->t)};
            const Mat2 m = ev->plus ? s.matrix : s.matrix.inverse();
            p = ev->plus ? s.glue_plus_to_minus(q) : s.glue_minus_to_plus(q);
            leg = apply(m, rest);
            acc = m.mul(acc);
        }
    }
    return acc.apply(v);
}

} // namespace tropgw
