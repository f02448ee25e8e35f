#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tropgw/scattering.hpp"

namespace tropgw {

struct NotStabilized : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Primitive eigenvector of the total-loop monodromy.
inline IntVec2 infinity_direction(const AffineBase& base) {
    Mat2 m = total_monodromy(base);
    if (m.is_identity()) throw TrivialMonodromy("total monodromy is trivial");
    return invariant_direction(m);
}

// A diagram ray escaping to infinity with monodromy-invariant direction.
struct AdmissibleRay {
    int ray_id;
    IntVec2 exit_dir;
    Region exit_region;
    std::int64_t tangency;     // boundary content of the primitive slot
    Rat multiplicity;          // OmegaTilde of the primitive class
    ClassExponent generator;   // primitive class of the wall, base frame
};

namespace detail {

// Region of the far end of an exited support; rays riding a cut are assigned
// the region on the B side of that cut.
inline std::optional<Region> exit_region(const AffineBase& base, const TransportPath& sup) {
    if (!base.has_regions || !sup.exited || sup.segments.empty()) return std::nullopt;
    const Segment& last = sup.segments.back();
    try {
        for (auto& s : base.sings) {
            for (bool plus : {true, false}) {
                IntVec2 d = plus ? s.cut_plus : s.cut_minus;
                if (pairing(last.dir, d) != 0) continue;
                RatVec2 v = last.b - s.position;
                if (!v.is_zero() && pairing(v, d) == 0) {
                    // riding this cut: probe a point just off it, on the B side
                    IntVec2 n{-d.y, d.x};
                    if (!plus) n = -n; // l- has B on the clockwise side of its line
                    RatPoint probe = last.b + scale_vec(to_rat(n), Rat(1, 1000));
                    return base.region_of(probe);
                }
            }
        }
        return base.region_of(last.b);
    } catch (const OnBoundary&) {
        return std::nullopt; // exits outside the wedge structure: not admissible
    }
}

inline std::optional<ClassExponent> wall_generator(const WallFunction& w) {
    std::int64_t g = 0;
    for (auto& [e, c] : w.f.terms()) {
        if (e.is_unit()) continue;
        g = g == 0 ? content(e.m) : std::gcd(g, content(e.m));
    }
    if (g == 0) return std::nullopt;
    for (auto& [e, c] : w.f.terms())
        if (!e.is_unit() && content(e.m) == g) return e;
    return std::nullopt;
}

} // namespace detail

// Rays whose support exits the bounding radius with transported direction
// proportional to the monodromy-invariant direction of the exit region (for
// chart bases without singularities an explicit direction must be supplied).
inline std::vector<AdmissibleRay> admissible_rays(const ScatteringDiagram& d, int order,
                                                  std::optional<IntVec2> m_out = std::nullopt) {
    std::vector<AdmissibleRay> out;
    for (const Ray& r : d.rays) {
        if (!r.support.exited) continue;
        if (r.wall.is_trivial_mod(order)) continue;
        IntVec2 ed = r.support.exit_dir;
        Region reg = Region::X;
        if (d.base.has_regions) {
            auto er = detail::exit_region(d.base, r.support);
            if (!er) continue;
            if (!positively_parallel(AffineBase::outward_direction(*er), ed)) continue;
            reg = *er;
        } else {
            if (!m_out || !positively_parallel(*m_out, ed)) continue;
        }
        auto gen = detail::wall_generator(r.wall);
        if (!gen) continue;
        auto slots = log_slots(r.wall.f.truncated(order), *gen);
        std::int64_t w0 = content(gen->m);
        Rat mult = slots.count(1) ? slots[1] / Rat(w0) : Rat(0);
        out.push_back({r.id, ed, reg, w0, mult, *gen});
    }
    std::sort(out.begin(), out.end(),
              [](const AdmissibleRay& a, const AdmissibleRay& b) { return a.ray_id < b.ray_id; });
    return out;
}

// Product of all admissible wall functions, collapsed to the two Gabele
// variables: the slot index is the tangency w (boundary content, invariant
// under transport), the grade is kept as-is. Encoded as a FormalSeries with
// m = (w, 0).
inline FormalSeries f_out(const ScatteringDiagram& d, int order,
                          std::optional<IntVec2> m_out = std::nullopt) {
    FormalSeries prod = FormalSeries::one(order);
    for (const AdmissibleRay& ar : admissible_rays(d, order, m_out)) {
        const Ray& r = d.ray(ar.ray_id);
        FormalSeries collapsed(order);
        for (auto& [e, c] : r.wall.f.terms()) {
            if (e.is_unit()) collapsed.add_term({{0, 0}, 0}, c);
            else collapsed.add_term({{content(e.m), 0}, e.a}, c);
        }
        prod = prod * collapsed;
    }
    return prod;
}

// Tropical relative Gromov-Witten invariant of degree d: the tangency-3d slot
// of log f_out divided by 3d. Cross-checked against the sum-of-logs route.
inline Rat relative_gw(const ScatteringDiagram& dia, int d,
                       std::optional<IntVec2> m_out = std::nullopt) {
    int order = dia.order;
    const std::int64_t w = 3 * d;
    // route 1: log of the product
    Rat via_product = 0;
    FormalSeries log_prod = f_out(dia, order, m_out).log();
    for (auto& [e, c] : log_prod.terms())
        if (e.m.x == w) via_product += c;
    // route 2: sum of the per-ray logs
    Rat via_sum = 0;
    for (const AdmissibleRay& ar : admissible_rays(dia, order, m_out)) {
        FormalSeries lg = dia.ray(ar.ray_id).wall.f.truncated(order).log();
        for (auto& [e, c] : lg.terms())
            if (!e.is_unit() && content(e.m) == w) via_sum += c;
    }
    if (via_product != via_sum)
        throw std::logic_error("dual-path extraction mismatch in relative_gw");
    return via_product / Rat(w);
}

// Stabilization guard: the degree-d invariant must agree between consecutive
// truncation orders before it is reported.
template <typename MakeDiagram>
Rat relative_gw_stabilized(MakeDiagram&& make, int d, int order) {
    ScatteringDiagram a = make(order);
    ScatteringDiagram b = make(order + 1);
    Rat va = relative_gw(a, d), vb = relative_gw(b, d);
    if (va != vb) throw NotStabilized("relative GW invariant not stabilized at this order");
    return va;
}

// One tropical disc contribution in the degree decomposition of a ray slot.
struct DiscTree {
    std::string label;
    Rat weight;
};

// Tropical discs attached to a ray, by multiple d of its primitive class.
// d = 1: the single irreducible disc, weight OmegaTilde(gamma0).
// d = 2 on a two-parent scattered ray: the four discs of the degree-two
// decomposition (both legs doubled; one leg doubled, two ways; all simple).
inline std::map<int, std::vector<DiscTree>> tropical_discs(const ScatteringDiagram& dia,
                                                           int ray_id) {
    const Ray& r = dia.ray(ray_id);
    auto gen = detail::wall_generator(r.wall);
    std::map<int, std::vector<DiscTree>> out;
    if (!gen) return out;
    auto omega = extract_omega_tilde(r.wall.f, *gen);
    if (r.prov.kind != Provenance::Scattered) {
        for (auto& [d, v] : omega) out[d] = {{"thimble cover x" + std::to_string(d), v}};
        return out;
    }
    if (omega.count(1)) out[1] = {{"irreducible", omega[1]}};
    if (omega.count(2) && r.prov.parents.size() == 2) {
        const Ray& pa = dia.ray(r.prov.parents[0]);
        const Ray& pb = dia.ray(r.prov.parents[1]);
        auto ga = detail::wall_generator(pa.wall);
        auto gb = detail::wall_generator(pb.wall);
        if (ga && gb) {
            auto oa = extract_omega_tilde(pa.wall.f, *ga);
            auto ob = extract_omega_tilde(pb.wall.f, *gb);
            if (oa.count(2) && ob.count(2)) {
                // pairing of the parent classes in the frame of the collision
                std::vector<IntVec2> pm;
                for (auto& s : strands_at(dia, r.prov.point)) {
                    if ((s.ray_id == pa.id || s.ray_id == pb.id) &&
                        positively_parallel(s.dir_ref, s.gamma_ref))
                        pm.push_back(s.gamma_ref * content((s.ray_id == pa.id ? *ga : *gb).m));
                }
                if (pm.size() == 2) {
                    Rat kappa = Rat(std::abs(pairing(pm[0], pm[1])));
                    out[2] = {
                        {"both legs doubled", 4 * kappa * oa[2] * ob[2]},
                        {"first leg doubled", 2 * kappa * kappa * oa[2]},
                        {"second leg doubled", 2 * kappa * kappa * ob[2]},
                        {"irreducible", omega[2]},
                    };
                }
            }
        }
    }
    return out;
}

struct RayBps {
    int ray_id;
    std::int64_t tangency;
    int refinement;              // quadratic refinement c = (-1)^(w0/3)
    std::map<int, Rat> omega_tilde;
    std::map<int, BpsValue> bps; // indexed by multiple of the ray generator
};

struct RelGWRow {
    int degree;
    Rat n_trop;
    std::map<int, Rat> per_ray; // ray id -> OmegaTilde contribution
    Rat bps_sum;
    bool all_integral;
};

struct RelGWTable {
    std::vector<RelGWRow> rows;
    std::vector<RayBps> rays;
};

// Moebius inversion per admissible direction with refinement (-1)^degree,
// plus the per-degree aggregation. Integrality is reported, never enforced.
inline RelGWTable bps_counts(const ScatteringDiagram& dia, int d_max,
                             std::optional<IntVec2> m_out = std::nullopt) {
    RelGWTable table;
    auto adm = admissible_rays(dia, dia.order, m_out);
    for (const AdmissibleRay& ar : adm) {
        RayBps rb;
        rb.ray_id = ar.ray_id;
        rb.tangency = ar.tangency;
        int d0 = (int)(ar.tangency % 3 == 0 ? ar.tangency / 3 : ar.tangency);
        rb.refinement = (d0 % 2 == 0) ? +1 : -1;
        rb.omega_tilde = extract_omega_tilde(dia.ray(ar.ray_id).wall.f, ar.generator);
        rb.bps = mobius_invert(rb.omega_tilde, rb.refinement);
        table.rays.push_back(std::move(rb));
    }
    for (int d = 1; d <= d_max; ++d) {
        RelGWRow row;
        row.degree = d;
        row.n_trop = 0;
        row.bps_sum = 0;
        row.all_integral = true;
        const std::int64_t w = 3 * d;
        for (auto& rb : table.rays) {
            if (w % rb.tangency != 0) continue;
            int mult = (int)(w / rb.tangency);
            auto it = rb.omega_tilde.find(mult);
            if (it == rb.omega_tilde.end()) continue;
            row.n_trop += it->second;
            row.per_ray[rb.ray_id] = it->second;
            auto bit = rb.bps.find(mult);
            if (bit != rb.bps.end()) {
                row.bps_sum += bit->second.value;
                row.all_integral = row.all_integral && bit->second.integral;
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace tropgw
