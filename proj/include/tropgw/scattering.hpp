#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <thread>
#include <vector>

#include "tropgw/omega.hpp"
#include "tropgw/series.hpp"
#include "tropgw/trace.hpp"

namespace tropgw {

struct PointIsSingular : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoRayThroughPoint : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CollisionOnCut : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RadiusExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Provenance {
    enum Kind { Initial, Scattered, Seed } kind = Seed;
    int sing = -1;            // Initial: singularity index
    int sign = +1;            // Initial: which of the two rays
    RatPoint point{};         // Scattered: canonical collision point
    std::vector<int> parents; // Scattered: rays meeting at the point at creation
};

// A wall of the diagram: base point, primitive direction, wall function with
// monomials written in the frame at the base, refracted support, provenance.
struct Ray {
    int id = -1;
    RatPoint base;
    IntVec2 dir;
    WallFunction wall;
    TransportPath support;
    Provenance prov;
};

struct ScatteringDiagram {
    AffineBase base;
    int order = 0;
    std::vector<Ray> rays;

    const Ray& ray(int id) const { return rays.at(id); }
};

// ---------------------------------------------------------------------------
// construction of initial diagrams

inline ScatteringDiagram initial_diagram(const AffineBase& base, int order) {
    ScatteringDiagram d{base, order, {}};
    for (int i = 0; i < (int)base.sings.size(); ++i) {
        const Singularity& s = base.sings[i];
        if (!is_focus_focus(s.matrix))
            throw UnsupportedSingularityType("only focus-focus singularities occur here");
        for (int sign : {+1, -1}) {
            IntVec2 v = sign > 0 ? s.invariant_dir : -s.invariant_dir;
            Ray r;
            r.id = (int)d.rays.size();
            r.base = s.position;
            r.dir = v;
            FormalSeries f = FormalSeries::one(order);
            f.add_term({v, 1}, 1);
            r.wall = {f, v};
            r.support = trace_ray(base, r.base, v);
            r.prov = {Provenance::Initial, i, sign, {}, {}};
            d.rays.push_back(std::move(r));
        }
    }
    return d;
}

// Two transversal seed walls through the origin (the classic two-wall toy).
inline ScatteringDiagram toy_two_wall_diagram(int order) {
    AffineBase base = toy_base();
    ScatteringDiagram d{base, order, {}};
    auto add = [&](RatPoint from, IntVec2 v) {
        Ray r;
        r.id = (int)d.rays.size();
        r.base = from;
        r.dir = v;
        FormalSeries f = FormalSeries::one(order);
        f.add_term({v, 1}, 1);
        r.wall = {f, v};
        r.support = trace_ray(base, r.base, v);
        r.prov = {Provenance::Seed, -1, +1, {}, {}};
        d.rays.push_back(std::move(r));
    };
    add({-4, 0}, {1, 0});
    add({0, -4}, {0, 1});
    return d;
}

// Initial rays attached to a type-II (5-ray) singular fibre, following the
// classes gamma1 = -g1, gamma2 = g2, gamma3 = g1+g2, gamma4 = g1, gamma5 = -g2.
// No such fibre occurs in the P^2 chart; this exists for its own unit tests.
// The order grade carried by the slab functions is a parameter.
inline std::vector<Ray> type2_initial_rays(const AffineBase& base, const RatPoint& at,
                                           IntVec2 g1, IntVec2 g2, int grade, int order) {
    if (pairing(g1, g2) == 0)
        throw UnsupportedSingularityType("type-II data needs independent classes");
    std::vector<IntVec2> cls = {-g1, g2, g1 + g2, g1, -g2};
    std::vector<Ray> out;
    for (auto c : cls) {
        Ray r;
        r.id = (int)out.size();
        r.base = at;
        r.dir = primitive(c);
        FormalSeries f = FormalSeries::one(order);
        f.add_term({c, grade}, 1);
        r.wall = {f, r.dir};
        r.support = trace_ray(base, at, r.dir);
        r.prov = {Provenance::Seed, -1, +1, {}, {}};
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// local picture at a point: strands of rays through it, in one reference frame

struct Strand {
    int ray_id;
    IntVec2 dir_ref;   // direction pointing away from the point
    IntVec2 gamma_ref; // primitive wall direction in the reference frame
    FormalSeries f_ref;
    int eps;           // crossing sign for a ccw loop
};

namespace detail {

inline bool point_on_segment(const RatPoint& p, const Segment& s) {
    RatVec2 ap = p - s.a, ab = s.b - s.a;
    if (pairing(ap, ab) != 0) return false;
    Rat t = (ab.x != 0) ? ap.x / ab.x : ap.y / ab.y;
    return t >= 0 && t <= 1;
}

struct LocalFrame {
    RatPoint q;                    // canonical point (never on an l- ray)
    std::optional<int> cut_sing;   // set when q lies on an l+ cut ray
    RatPoint q_alias{};            // glued representative on l-
    Mat2 pullback = Mat2::identity(); // maps alias-chart vectors into the frame
};

inline LocalFrame local_frame(const AffineBase& base, const RatPoint& q_canon) {
    LocalFrame lf;
    lf.q = q_canon;
    if (auto i = base.cut_index(q_canon, true)) {
        lf.cut_sing = *i;
        lf.q_alias = base.sings[*i].glue_plus_to_minus(q_canon);
        lf.pullback = base.sings[*i].matrix.inverse();
    }
    return lf;
}

} // namespace detail

// All strands of diagram rays at the canonical point q. When q lies on a cut
// the neighbourhood is unrolled: the half-disc on the glued side is pulled
// back through the inverse gluing matrix, so every strand direction lives in
// the single reference chart of q.
inline std::vector<Strand> strands_at(const ScatteringDiagram& d, const RatPoint& q_canon) {
    detail::LocalFrame lf = detail::local_frame(d.base, q_canon);
    std::vector<Strand> out;

    auto add = [&](const Ray& r, const Segment& seg, bool alias, const RatPoint& q_chart) {
        Mat2 conv = alias ? lf.pullback.mul(seg.frame) : seg.frame;
        IntVec2 gamma = primitive(conv.apply(r.dir));
        FormalSeries f = r.wall.f.mapped(alias ? lf.pullback.mul(seg.frame) : seg.frame);
        auto push = [&](IntVec2 sd) {
            int eps = positively_parallel(sd, gamma) ? -1 : +1;
            out.push_back({r.id, sd, gamma, f, eps});
        };
        IntVec2 dchart = seg.dir;
        IntVec2 dref = alias ? lf.pullback.apply(dchart) : dchart;
        bool at_start = (q_chart == seg.a);
        bool at_end = (q_chart == seg.b);
        if (at_start && at_end) return; // degenerate
        if (at_start) push(dref);
        else if (at_end) push(-dref);
        else {
            push(dref);
            push(-dref);
        }
    };

    for (const Ray& r : d.rays) {
        for (const Segment& seg : r.support.segments) {
            if (detail::point_on_segment(lf.q, seg)) add(r, seg, false, lf.q);
            else if (lf.cut_sing && detail::point_on_segment(lf.q_alias, seg))
                add(r, seg, true, lf.q_alias);
        }
    }
    return out;
}

// Images of the two lattice generators under the ordered product of the
// wall crossings around a small ccw loop.
struct ThetaResult {
    FormalSeries x_img{0}, y_img{0};
    int trunc = 0;

    bool is_identity() const {
        return x_img == FormalSeries::monomial(trunc, {{1, 0}, 0}, 1) &&
               y_img == FormalSeries::monomial(trunc, {{0, 1}, 0}, 1);
    }
    // nonzero defect terms grouped by wall monomial, at the given grade
    std::map<IntVec2, std::pair<Rat, Rat>> defect(int grade) const {
        std::map<IntVec2, std::pair<Rat, Rat>> res;
        for (auto& [e, c] : x_img.terms())
            if (e.a == grade) res[{e.m.x - 1, e.m.y}].first = c;
        for (auto& [e, c] : y_img.terms())
            if (e.a == grade) res[{e.m.x, e.m.y - 1}].second = c;
        return res;
    }
};

inline ThetaResult theta_loop(const ScatteringDiagram& d, const RatPoint& q_raw, int order) {
    if (d.base.is_singular_point(q_raw))
        throw PointIsSingular("theta loop is not defined at a singular point");
    RatPoint q = d.base.canonical_point(q_raw);
    std::vector<Strand> strands = strands_at(d, q);

    // reference direction not parallel to any strand
    IntVec2 ref{0, 0};
    for (IntVec2 cand : std::vector<IntVec2>{{1, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 1}, {1, 3},
                                             {3, 1}, {1, 4}, {2, 3}, {5, 1}, {1, 5}, {4, 3}}) {
        bool ok = true;
        for (auto& s : strands)
            if (pairing(cand, s.dir_ref) == 0) ok = false;
        if (ok) {
            ref = cand;
            break;
        }
    }
    if (ref.is_zero()) throw std::runtime_error("no reference direction found");

    CcwFrom cmp{ref};
    std::stable_sort(strands.begin(), strands.end(),
                     [&](const Strand& a, const Strand& b) { return cmp(a.dir_ref, b.dir_ref); });

    ThetaResult th;
    th.trunc = order;
    th.x_img = FormalSeries::monomial(order, {{1, 0}, 0}, 1);
    th.y_img = FormalSeries::monomial(order, {{0, 1}, 0}, 1);
    for (const Strand& s : strands) {
        WallAutomorphism k{{s.f_ref.truncated(order), s.gamma_ref}, s.eps};
        th.x_img = k.apply(th.x_img);
        th.y_img = k.apply(th.y_img);
    }
    return th;
}

// ---------------------------------------------------------------------------
// collision enumeration

namespace detail {

inline std::optional<RatPoint> segment_intersection(const Segment& s, const Segment& t) {
    RatVec2 r = s.b - s.a, q = t.b - t.a;
    Rat den = pairing(r, q);
    if (den == 0) return std::nullopt; // parallel or collinear: commuting walls
    RatVec2 w = t.a - s.a;
    Rat tt = pairing(w, q) / den;
    Rat uu = pairing(w, r) / den;
    if (tt < 0 || tt > 1 || uu < 0 || uu > 1) return std::nullopt;
    return s.a + scale_vec(r, tt);
}

} // namespace detail

// Canonical intersection points of pairwise transversal support segments,
// inside the bounding radius and away from singular points.
// A glued point is in scope when one of its chart representatives lies inside
// the bounding radius.
inline bool in_scope(const AffineBase& base, const RatPoint& p) {
    const Rat r2 = base.radius * base.radius;
    if (norm2(p - RatPoint{0, 0}) <= r2) return true;
    for (bool plus : {true, false}) {
        if (auto i = base.cut_index(p, plus)) {
            RatPoint other = plus ? base.sings[*i].glue_plus_to_minus(p)
                                  : base.sings[*i].glue_minus_to_plus(p);
            if (norm2(other - RatPoint{0, 0}) <= r2) return true;
        }
    }
    return false;
}

inline std::set<RatPoint> collision_points(const ScatteringDiagram& d) {
    std::set<RatPoint> pts;
    for (size_t i = 0; i < d.rays.size(); ++i) {
        for (size_t j = i + 1; j < d.rays.size(); ++j) {
            for (const Segment& si : d.rays[i].support.segments) {
                for (const Segment& sj : d.rays[j].support.segments) {
                    auto p = detail::segment_intersection(si, sj);
                    if (!p) continue;
                    if (!in_scope(d.base, *p)) continue;
                    if (d.base.is_singular_point(*p)) continue;
                    pts.insert(d.base.canonical_point(*p));
                }
            }
        }
    }
    return pts;
}

// ---------------------------------------------------------------------------
// Kontsevich-Soibelman completion

struct Insertion {
    RatPoint at;  // canonical defect point
    IntVec2 m;    // defect monomial boundary vector, reference frame at `at`
    int grade;
    Rat coeff;
    std::vector<int> parents;
};

namespace detail {

// Solve the insertion coefficient for a defect monomial m: a single new ray
// through the loop once with sign -1 cancels the linear defect.
inline Rat insertion_coefficient(IntVec2 m, const std::pair<Rat, Rat>& cxy) {
    IntVec2 p = primitive(m);
    auto ex = pairing(IntVec2{1, 0}, p);
    auto ey = pairing(IntVec2{0, 1}, p);
    Rat c;
    if (ex != 0) c = cxy.first / Rat(ex);
    else c = cxy.second / Rat(ey);
    if (ex != 0 && ey != 0) {
        Rat alt = cxy.second / Rat(ey);
        if (alt != c) throw std::logic_error("defect is not a wall defect");
    }
    return c;
}

} // namespace detail

// Computes the grade-k defects at one point. Throws if a lower-grade defect
// survived (would indicate a bug in earlier rounds).
inline std::vector<Insertion> defects_at(const ScatteringDiagram& d, const RatPoint& q, int k) {
    ThetaResult th = theta_loop(d, q, k);
    for (int g = 1; g < k; ++g)
        if (!th.defect(g).empty())
            throw std::logic_error("unresolved defect below current order");
    std::vector<Insertion> out;
    std::vector<int> parents;
    for (auto& s : strands_at(d, q)) parents.push_back(s.ray_id);
    std::sort(parents.begin(), parents.end());
    parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
    for (auto& [m, cxy] : th.defect(k)) {
        Rat c = detail::insertion_coefficient(m, cxy);
        if (c != 0) out.push_back({q, m, k, c, parents});
    }
    return out;
}

// Materializes one insertion into the diagram, merging with an existing ray
// when base point and direction coincide.
inline void apply_insertion(ScatteringDiagram& d, const Insertion& ins) {
    const AffineBase& base = d.base;
    detail::LocalFrame lf = detail::local_frame(base, ins.at);
    IntVec2 p = primitive(ins.m);
    RatPoint start = ins.at;
    IntVec2 dir = p;
    IntVec2 m = ins.m;
    if (lf.cut_sing) {
        const Singularity& s = base.sings[*lf.cut_sing];
        // direction strictly inside the pulled-back half lives in the other chart
        bool into_alias = enters_sector_from_cut(s, true, p);
        if (into_alias) {
            start = lf.q_alias;
            dir = s.matrix.apply(p);
            m = s.matrix.apply(m);
        } else if (positively_parallel(-s.cut_plus, p)) {
            throw RayHitsSingularity("defect ray would ride a cut into the singular point");
        }
    }
    for (Ray& r : d.rays) {
        if (r.base == start && r.dir == dir) {
            r.wall.f.add_term({m, ins.grade}, ins.coeff);
            return;
        }
    }
    Ray r;
    r.id = (int)d.rays.size();
    r.base = start;
    r.dir = dir;
    FormalSeries f = FormalSeries::one(d.order);
    f.add_term({m, ins.grade}, ins.coeff);
    r.wall = {f, dir};
    r.support = trace_ray(base, start, dir);
    r.prov = {Provenance::Scattered, -1, +1, ins.at, ins.parents};
    d.rays.push_back(std::move(r));
}

enum class ProcessOrder { Canonical, Reversed };

// Order-by-order completion. Within one order the collision points are
// independent; they may be processed in any order and in parallel.
inline ScatteringDiagram complete(ScatteringDiagram d, int order,
                                  ProcessOrder po = ProcessOrder::Canonical,
                                  unsigned threads = 1) {
    d.order = order;
    for (Ray& r : d.rays) r.wall.f = r.wall.f.truncated(order);
    for (int k = 2; k <= order; ++k) {
        auto pts_set = collision_points(d);
        std::vector<RatPoint> pts(pts_set.begin(), pts_set.end());
        if (po == ProcessOrder::Reversed) std::reverse(pts.begin(), pts.end());

        std::vector<std::vector<Insertion>> results(pts.size());
        if (threads <= 1 || pts.size() < 2) {
            for (size_t i = 0; i < pts.size(); ++i) results[i] = defects_at(d, pts[i], k);
        } else {
            std::atomic<size_t> next{0};
            auto worker = [&]() {
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= pts.size()) return;
                    results[i] = defects_at(d, pts[i], k);
                }
            };
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < std::min<unsigned>(threads, pts.size()); ++t)
                pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }

        std::vector<Insertion> all;
        for (auto& v : results)
            for (auto& ins : v) all.push_back(ins);
        // canonical application order regardless of processing order
        std::sort(all.begin(), all.end(), [](const Insertion& a, const Insertion& b) {
            if (!(a.at == b.at)) return a.at < b.at;
            if (a.m != b.m) return a.m < b.m;
            return a.grade < b.grade;
        });
        for (auto& ins : all) apply_insertion(d, ins);
    }
    return d;
}

// ---------------------------------------------------------------------------
// consistency

struct Defect {
    RatPoint at;
    int grade;
    IntVec2 m;
    std::pair<Rat, Rat> coeffs;
};

// theta = id at every collision point mod t^(order+1). Loops around the
// singular points themselves are not wall-consistency statements in this
// truncated model; the singularity data is validated structurally instead.
inline std::vector<Defect> consistency_check(const ScatteringDiagram& d, int order) {
    std::vector<Defect> out;
    for (const RatPoint& q : collision_points(d)) {
        ThetaResult th = theta_loop(d, q, order);
        for (int g = 1; g <= order; ++g)
            for (auto& [m, cxy] : th.defect(g)) out.push_back({q, g, m, cxy});
    }
    for (auto& s : d.base.sings) {
        if (!s.valid())
            out.push_back({s.position, 0, {0, 0}, {Rat(0), Rat(0)}});
    }
    return out;
}

// ---------------------------------------------------------------------------
// tropical disc invariants along a ray through a point

// Product of the wall functions of all rays through u whose transported
// monomial direction matches gamma_dir, expressed in the frame at u; also
// returns the generator class of the product's support lattice.
inline std::pair<FormalSeries, ClassExponent> wall_product_at(const ScatteringDiagram& d,
                                                              const RatPoint& u_raw,
                                                              IntVec2 gamma_dir) {
    RatPoint u = d.base.canonical_point(u_raw);
    IntVec2 p = primitive(gamma_dir);
    FormalSeries prod = FormalSeries::one(d.order);
    int found = 0;
    for (auto& s : strands_at(d, u)) {
        if (s.gamma_ref != p) continue;
        // each passing ray contributes two strands; count the wall once
        // (based rays have a single outgoing strand)
        if (!positively_parallel(s.dir_ref, s.gamma_ref)) continue;
        prod = prod * s.f_ref;
        ++found;
    }
    if (found == 0) throw NoRayThroughPoint("no ray with that class through the point");
    // generator of the support lattice
    std::optional<ClassExponent> gen;
    std::int64_t g = 0;
    for (auto& [e, c] : prod.terms()) {
        if (e.is_unit()) continue;
        g = g == 0 ? content(e.m) : std::gcd(g, content(e.m));
    }
    for (auto& [e, c] : prod.terms()) {
        if (e.is_unit()) continue;
        if (content(e.m) == g) {
            gen = e;
            break;
        }
    }
    if (!gen) throw NoRayThroughPoint("trivial wall product at the point");
    return {prod, *gen};
}

// OmegaTilde^trop(d * gamma; u): log of the product of wall functions through
// u in the class direction, normalized per slot.
inline std::map<int, Rat> omega_trop(const ScatteringDiagram& d, const RatPoint& u,
                                     IntVec2 gamma_dir) {
    auto [prod, gen] = wall_product_at(d, u, gamma_dir);
    return extract_omega_tilde(prod, gen);
}

} // namespace tropgw
