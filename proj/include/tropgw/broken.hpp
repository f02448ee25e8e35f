#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "tropgw/scattering.hpp"

namespace tropgw {

struct EndpointOnWall : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EndpointInDiscardedSector : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotAdjacent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BrokenBend {
    RatPoint at;
    std::vector<int> ray_ids;
    ClassExponent consumed;
    Rat factor;
};

// A broken line ending at the endpoint. The search walks backwards: it leaves
// the endpoint along the monomial direction, sheds wall factors at bends, and
// must escape to infinity as a plain invariant-direction line of grade one.
struct BrokenLine {
    ClassExponent cls; // final monomial at the endpoint, in the endpoint frame
    Rat weight;
    std::vector<RatPoint> trail; // endpoint, bends/cut jumps, far exit point
    std::vector<BrokenBend> bends;
    Region entry_region = Region::X;
};

namespace detail {

struct WallHit {
    Rat t;
    int ray_id;
    int seg_idx;
    Rat s;
};

inline std::vector<WallHit> wall_hits(const ScatteringDiagram& d, const RatPoint& p,
                                      const RatVec2& v, const Rat& tmax, bool open_end) {
    std::vector<WallHit> hits;
    for (const Ray& r : d.rays) {
        for (int si = 0; si < (int)r.support.segments.size(); ++si) {
            const Segment& seg = r.support.segments[si];
            RatVec2 q = seg.b - seg.a;
            Rat den = pairing(v, q);
            if (den == 0) continue;
            RatVec2 w = seg.a - p;
            Rat t = pairing(w, q) / den;
            Rat s = pairing(w, v) / den;
            if (t <= 0 || s < 0 || s > 1) continue;
            if (tmax > 0 && (t > tmax || (open_end && t >= tmax))) continue;
            hits.push_back({t, r.id, si, s});
        }
    }
    return hits;
}

} // namespace detail

class BrokenLineSearch {
public:
    BrokenLineSearch(const ScatteringDiagram& d, RatPoint endpoint, int budget,
                     std::optional<std::vector<IntVec2>> entry_dirs = std::nullopt)
        : d_(d), u_(d.base.canonical_point(endpoint)), budget_(budget),
          entry_dirs_(std::move(entry_dirs)) {
        validate_endpoint();
    }

    std::vector<BrokenLine> run() {
        bound_ = seed_bound();
        for (;;) {
            lines_.clear();
            for (std::int64_t mx = -bound_; mx <= bound_; ++mx)
                for (std::int64_t my = -bound_; my <= bound_; ++my) {
                    IntVec2 m{mx, my};
                    if (m.is_zero()) continue;
                    for (int a = 1; a <= budget_; ++a)
                        walk(u_, {m, a}, 1, {u_}, {}, {m, a});
                }
            std::int64_t margin = bound_ - max_term_norm() - 2;
            bool rerun = false;
            for (auto& bl : lines_)
                if (std::max(std::abs(bl.cls.m.x), std::abs(bl.cls.m.y)) > margin) rerun = true;
            if (!rerun) break;
            bound_ *= 2;
            if (bound_ > 4096) throw std::runtime_error("broken line search bound blow-up");
        }
        std::sort(lines_.begin(), lines_.end(), [](const BrokenLine& a, const BrokenLine& b) {
            if (!(a.cls == b.cls)) return a.cls < b.cls;
            return a.weight < b.weight;
        });
        return lines_;
    }

private:
    const ScatteringDiagram& d_;
    RatPoint u_;
    int budget_;
    std::optional<std::vector<IntVec2>> entry_dirs_;
    std::int64_t bound_ = 0;
    std::vector<BrokenLine> lines_;

    void validate_endpoint() {
        if (d_.base.is_singular_point(u_))
            throw EndpointInDiscardedSector("endpoint at a singular point");
        if (d_.base.in_discarded_sector(u_))
            throw EndpointInDiscardedSector("endpoint inside a discarded sector");
        for (const Ray& r : d_.rays)
            for (const Segment& s : r.support.segments)
                if (detail::point_on_segment(u_, s))
                    throw EndpointOnWall("endpoint lies on the support of the diagram");
    }

    std::int64_t max_term_norm() const {
        std::int64_t m = 3;
        for (const Ray& r : d_.rays)
            for (auto& [e, c] : r.wall.f.terms())
                if (!e.is_unit() && e.a < budget_)
                    m = std::max({m, std::abs(e.m.x), std::abs(e.m.y)});
        return m;
    }
    std::int64_t seed_bound() const {
        return std::max<std::int64_t>(16, (budget_ + 1) * (max_term_norm() + 2));
    }

    static bool normalize_state(const AffineBase& base, RatPoint& p, ClassExponent& e) {
        for (auto& s : base.sings) {
            IntVec2 v = primitive(e.m);
            if (s.on_cut(p, true) && enters_sector_from_cut(s, true, v)) {
                p = s.glue_plus_to_minus(p);
                e.m = s.matrix.apply(e.m);
                return true;
            }
            if (s.on_cut(p, false) && enters_sector_from_cut(s, false, v)) {
                p = s.glue_minus_to_plus(p);
                e.m = s.matrix.inverse().apply(e.m);
                return true;
            }
        }
        return false;
    }

    void accept(const ClassExponent& seed, const ClassExponent& e, const Rat& weight,
                std::vector<RatPoint> trail, std::vector<BrokenBend> bends,
                const RatPoint& exit_from, IntVec2 dir) {
        if (e.a != 1 || content(e.m) != 1) return;
        Rat step = d_.base.radius * 4 + 1;
        RatPoint far = exit_from + scale_vec(to_rat(dir), step);
        Region reg = Region::X;
        if (d_.base.has_regions) {
            try {
                reg = d_.base.region_of(far);
            } catch (const OnBoundary&) {
                return; // exits exactly along a wedge boundary: not an entry line
            }
            if (!positively_parallel(AffineBase::outward_direction(reg), dir)) return;
        } else {
            if (!entry_dirs_) return;
            bool ok = false;
            for (auto ed : *entry_dirs_)
                if (positively_parallel(ed, dir)) ok = true;
            if (!ok) return;
        }
        if ((int)bends.size() > budget_)
            throw std::logic_error("bend count exceeded the grade budget");
        trail.push_back(far);
        lines_.push_back({seed, weight, std::move(trail), std::move(bends), reg});
    }

    void walk(RatPoint p, ClassExponent e, Rat weight, std::vector<RatPoint> trail,
              std::vector<BrokenBend> bends, const ClassExponent& seed) {
        const Rat r2 = d_.base.radius * d_.base.radius;
        for (int guard = 0; guard < 512; ++guard) {
            while (normalize_state(d_.base, p, e)) {}
            IntVec2 v = primitive(e.m);
            auto cut_ev = detail::first_event(d_.base, p, to_rat(v), Rat(0));
            Rat t_cut = cut_ev ? cut_ev->t : Rat(-1);
            auto hits = detail::wall_hits(d_, p, to_rat(v), t_cut, false);
            std::optional<Rat> t_wall;
            for (auto& h : hits)
                if (!t_wall || h.t < *t_wall) t_wall = h.t;

            if (t_wall) {
                RatPoint x = p + scale_vec(to_rat(v), *t_wall);
                if (norm2(x - RatPoint{0, 0}) > r2) {
                    accept(seed, e, weight, trail, bends, p, v);
                    return;
                }
                // composite automorphism of every wall through x, this chart
                std::map<int, std::pair<FormalSeries, IntVec2>> walls;
                for (auto& h : hits) {
                    if (h.t != *t_wall) continue;
                    const Ray& r = d_.ray(h.ray_id);
                    const Segment& seg = r.support.segments[h.seg_idx];
                    // grazing the base point of a ray does not cross its wall
                    if (h.s == 0 && h.seg_idx == 0) continue;
                    walls.emplace(h.ray_id,
                                  std::make_pair(r.wall.f.mapped(seg.frame).truncated(budget_),
                                                 primitive(seg.frame.apply(r.dir))));
                }
                FormalSeries comp = FormalSeries::one(budget_);
                std::vector<int> ids;
                for (auto& [id, fg] : walls) {
                    long ex = pairing(e.m, fg.second);
                    if (ex < 0) ex = -ex; // exponent eps<m,gamma> with eps = sgn<m,gamma>
                    if (ex != 0) comp = comp * fg.first.int_pow(ex);
                    ids.push_back(id);
                }
                for (auto& [te, tc] : comp.terms()) {
                    if (te.is_unit()) continue;
                    ClassExponent e2{e.m - te.m, e.a - te.a};
                    if (e2.a < 1 || e2.m.is_zero()) continue;
                    auto trail2 = trail;
                    trail2.push_back(x);
                    auto bends2 = bends;
                    bends2.push_back({x, ids, te, tc});
                    walk(x, e2, weight * tc, std::move(trail2), std::move(bends2), seed);
                }
                p = x; // pass through and keep walking
                continue;
            }

            if (cut_ev) {
                RatPoint x = p + scale_vec(to_rat(v), cut_ev->t);
                if (norm2(x - RatPoint{0, 0}) > r2) {
                    accept(seed, e, weight, trail, bends, p, v);
                    return;
                }
                if (cut_ev->hits_singularity) return; // path runs into a singular point
                const Singularity& s = d_.base.sings[cut_ev->sing];
                const Mat2 m = cut_ev->plus ? s.matrix : s.matrix.inverse();
                p = cut_ev->plus ? s.glue_plus_to_minus(x) : s.glue_minus_to_plus(x);
                e.m = m.apply(e.m);
                trail.push_back(p);
                continue;
            }

            accept(seed, e, weight, trail, bends, p, v);
            return;
        }
        throw std::runtime_error("broken line walk did not terminate");
    }
};

inline std::vector<BrokenLine> enumerate_broken_lines(
    const ScatteringDiagram& d, const RatPoint& u, int budget,
    std::optional<std::vector<IntVec2>> entry_dirs = std::nullopt) {
    BrokenLineSearch s(d, u, budget, std::move(entry_dirs));
    return s.run();
}

inline Rat n_trop(const ScatteringDiagram& d, const RatPoint& u, const ClassExponent& beta,
                  int budget, std::optional<std::vector<IntVec2>> entry_dirs = std::nullopt) {
    Rat acc = 0;
    for (auto& bl : enumerate_broken_lines(d, u, budget, entry_dirs))
        if (bl.cls == beta) acc += bl.weight;
    return acc;
}

struct Superpotential {
    RatPoint at;
    int order;
    std::map<ClassExponent, Rat> terms;

    FormalSeries as_series() const {
        FormalSeries s(order);
        for (auto& [e, c] : terms) s.add_term(e, c);
        return s;
    }
};

inline Superpotential superpotential(const ScatteringDiagram& d, const RatPoint& u, int budget,
                                     std::optional<std::vector<IntVec2>> entry_dirs = std::nullopt) {
    Superpotential w{d.base.canonical_point(u), budget, {}};
    for (auto& bl : enumerate_broken_lines(d, u, budget, entry_dirs)) {
        w.terms[bl.cls] += bl.weight;
        if (w.terms[bl.cls] == 0) w.terms.erase(bl.cls);
    }
    return w;
}

// Covariance across one wall: with gamma the transported wall direction at
// the crossing, the side of positive pairing carries K applied to the other.
inline bool wallcross_check(const ScatteringDiagram& d, const RatPoint& u1, const RatPoint& u2,
                            int ray_id, int budget,
                            std::optional<std::vector<IntVec2>> entry_dirs = std::nullopt) {
    RatVec2 leg = u2 - u1;
    if (detail::first_event(d.base, u1, leg, Rat(1)))
        throw NotAdjacent("sample pair separated by a branch cut");
    std::optional<detail::WallHit> hit;
    int crossings = 0;
    for (auto& h : detail::wall_hits(d, u1, leg, Rat(1), true)) {
        ++crossings;
        hit = h;
    }
    if (crossings != 1 || hit->ray_id != ray_id)
        throw NotAdjacent("sample pair must straddle exactly the requested wall");

    const Ray& r = d.ray(ray_id);
    const Segment& seg = r.support.segments[hit->seg_idx];
    FormalSeries floc = r.wall.f.mapped(seg.frame).truncated(budget);
    IntVec2 gam = primitive(seg.frame.apply(r.dir));
    RatPoint x = u1 + scale_vec(leg, hit->t);

    Superpotential w1 = superpotential(d, u1, budget, entry_dirs);
    Superpotential w2 = superpotential(d, u2, budget, entry_dirs);
    int side = pairing(gam, u1 - x) > 0 ? +1 : -1;
    WallAutomorphism k{{floc, gam}, +1};
    FormalSeries lhs = side > 0 ? w1.as_series() : w2.as_series();
    FormalSeries rhs = side > 0 ? w2.as_series() : w1.as_series();
    return lhs == k.apply(rhs);
}

} // namespace tropgw
