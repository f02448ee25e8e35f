#pragma once

#include <json.hpp>

#include "tropgw/broken.hpp"
#include "tropgw/relgw.hpp"
#include "tropgw/scattering.hpp"

namespace tropgw {

using Json = nlohmann::ordered_json;

// All numbers cross the boundary as exact fraction strings.

inline Json to_json(const Rat& r) { return to_string(r); }
inline Json to_json(const RatPoint& p) { return Json::array({to_string(p.x), to_string(p.y)}); }
inline Json to_json(IntVec2 v) { return Json::array({v.x, v.y}); }
inline Json to_json(const Mat2& m) {
    return Json::array({Json::array({m.a, m.b}), Json::array({m.c, m.d})});
}

inline RatPoint point_from_json(const Json& j) {
    return {parse_rat(j.at(0).get<std::string>()), parse_rat(j.at(1).get<std::string>())};
}
inline IntVec2 ivec_from_json(const Json& j) {
    return {j.at(0).get<std::int64_t>(), j.at(1).get<std::int64_t>()};
}
inline Mat2 mat_from_json(const Json& j) {
    return {j.at(0).at(0).get<std::int64_t>(), j.at(0).at(1).get<std::int64_t>(),
            j.at(1).at(0).get<std::int64_t>(), j.at(1).at(1).get<std::int64_t>()};
}

inline Json to_json(const FormalSeries& f) {
    Json terms = Json::array();
    for (auto& [e, c] : f.terms()) {
        if (e.is_unit()) continue; // wall functions: unit term implied
        terms.push_back(Json{{"m", to_json(e.m)}, {"a", e.a}, {"coeff", to_string(c)}});
    }
    return terms;
}

inline FormalSeries series_from_json(const Json& j, int trunc, bool with_unit) {
    FormalSeries f = with_unit ? FormalSeries::one(trunc) : FormalSeries(trunc);
    for (auto& t : j) {
        ClassExponent e{ivec_from_json(t.at("m")), t.at("a").get<int>()};
        f.add_term(e, parse_rat(t.at("coeff").get<std::string>()));
    }
    return f;
}

inline Json to_json(const AffineBase& b) {
    Json sings = Json::array();
    for (auto& s : b.sings) {
        sings.push_back(Json{{"position", to_json(s.position)},
                             {"cut_plus", to_json(s.cut_plus)},
                             {"cut_minus", to_json(s.cut_minus)},
                             {"matrix", to_json(s.matrix)},
                             {"invariant_dir", to_json(s.invariant_dir)}});
    }
    return Json{{"radius", to_string(b.radius)},
                {"regions", b.has_regions},
                {"singularities", sings}};
}

inline AffineBase base_from_json(const Json& j) {
    AffineBase b;
    b.radius = parse_rat(j.at("radius").get<std::string>());
    b.has_regions = j.at("regions").get<bool>();
    for (auto& js : j.at("singularities")) {
        Singularity s{point_from_json(js.at("position")), ivec_from_json(js.at("cut_plus")),
                      ivec_from_json(js.at("cut_minus")), mat_from_json(js.at("matrix")),
                      ivec_from_json(js.at("invariant_dir"))};
        if (!s.valid()) throw std::invalid_argument("invalid singularity data in base");
        b.sings.push_back(s);
    }
    return b;
}

// Canonical form: rays sorted by (base, dir), ids renumbered, parents remapped.
inline ScatteringDiagram canonicalized(const ScatteringDiagram& d) {
    ScatteringDiagram out = d;
    std::vector<int> perm(out.rays.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = (int)i;
    std::sort(perm.begin(), perm.end(), [&](int a, int b) {
        const Ray &ra = out.rays[a], &rb = out.rays[b];
        if (!(ra.base == rb.base)) return ra.base < rb.base;
        return ra.dir < rb.dir;
    });
    std::vector<int> inv(perm.size());
    for (size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = (int)i;
    std::vector<Ray> rays;
    rays.reserve(out.rays.size());
    for (size_t i = 0; i < perm.size(); ++i) {
        Ray r = out.rays[perm[i]];
        r.id = (int)i;
        for (int& p : r.prov.parents) p = inv[p];
        std::sort(r.prov.parents.begin(), r.prov.parents.end());
        rays.push_back(std::move(r));
    }
    out.rays = std::move(rays);
    return out;
}

inline Json to_json(const ScatteringDiagram& d) {
    Json rays = Json::array();
    for (const Ray& r : d.rays) {
        Json prov;
        switch (r.prov.kind) {
            case Provenance::Initial:
                prov = Json{{"kind", "initial"}, {"singularity", r.prov.sing},
                            {"sign", r.prov.sign}};
                break;
            case Provenance::Scattered:
                prov = Json{{"kind", "scattered"},
                            {"at", to_json(r.prov.point)},
                            {"parents", r.prov.parents}};
                break;
            default:
                prov = Json{{"kind", "seed"}};
        }
        Json support = Json::array();
        for (auto& s : r.support.segments) {
            support.push_back(Json{{"a", to_json(s.a)},
                                   {"b", to_json(s.b)},
                                   {"dir", to_json(s.dir)},
                                   {"frame", to_json(s.frame)}});
        }
        rays.push_back(Json{{"id", r.id},
                            {"base", to_json(r.base)},
                            {"dir", to_json(r.dir)},
                            {"wall", to_json(r.wall.f)},
                            {"provenance", prov},
                            {"exited", r.support.exited},
                            {"exit_dir", to_json(r.support.exit_dir)},
                            {"support", support}});
    }
    return Json{{"schema", "tropgw-diagram"},
                {"version", 1},
                {"order", d.order},
                {"base", to_json(d.base)},
                {"rays", rays}};
}

inline ScatteringDiagram diagram_from_json(const Json& j) {
    if (j.at("schema") != "tropgw-diagram") throw std::invalid_argument("not a diagram file");
    ScatteringDiagram d{base_from_json(j.at("base")), j.at("order").get<int>(), {}};
    for (auto& jr : j.at("rays")) {
        Ray r;
        r.id = jr.at("id").get<int>();
        r.base = point_from_json(jr.at("base"));
        r.dir = ivec_from_json(jr.at("dir"));
        r.wall = {series_from_json(jr.at("wall"), d.order, true), r.dir};
        auto& jp = jr.at("provenance");
        std::string kind = jp.at("kind").get<std::string>();
        if (kind == "initial")
            r.prov = {Provenance::Initial, jp.at("singularity").get<int>(),
                      jp.at("sign").get<int>(), {}, {}};
        else if (kind == "scattered")
            r.prov = {Provenance::Scattered, -1, +1, point_from_json(jp.at("at")),
                      jp.at("parents").get<std::vector<int>>()};
        else
            r.prov = {Provenance::Seed, -1, +1, {}, {}};
        r.support = trace_ray(d.base, r.base, r.dir);
        d.rays.push_back(std::move(r));
    }
    return d;
}

inline Json to_json(const Superpotential& w) {
    Json terms = Json::array();
    for (auto& [e, c] : w.terms)
        terms.push_back(Json{{"m", to_json(e.m)}, {"a", e.a}, {"coeff", to_string(c)}});
    return Json{{"schema", "tropgw-superpotential"},
                {"at", to_json(w.at)},
                {"order", w.order},
                {"terms", terms}};
}

inline Json to_json(const BrokenLine& bl) {
    Json trail = Json::array();
    for (auto& p : bl.trail) trail.push_back(to_json(p));
    Json bends = Json::array();
    for (auto& b : bl.bends)
        bends.push_back(Json{{"at", to_json(b.at)},
                             {"rays", b.ray_ids},
                             {"consumed", Json{{"m", to_json(b.consumed.m)}, {"a", b.consumed.a}}},
                             {"factor", to_string(b.factor)}});
    return Json{{"class", Json{{"m", to_json(bl.cls.m)}, {"a", bl.cls.a}}},
                {"weight", to_string(bl.weight)},
                {"bends", bends},
                {"trail", trail}};
}

inline Json to_json(const RelGWTable& t) {
    Json rows = Json::array();
    for (auto& r : t.rows) {
        Json per;
        for (auto& [id, v] : r.per_ray) per[std::to_string(id)] = to_string(v);
        rows.push_back(Json{{"d", r.degree},
                            {"N_trop", to_string(r.n_trop)},
                            {"bps", to_string(r.bps_sum)},
                            {"integral", r.all_integral},
                            {"per_ray", per}});
    }
    Json rays = Json::array();
    for (auto& rb : t.rays) {
        Json om = Json::array(), bp = Json::array();
        for (auto& [k, v] : rb.omega_tilde)
            om.push_back(Json{{"d", k}, {"value", to_string(v)}});
        for (auto& [k, v] : rb.bps)
            bp.push_back(Json{{"d", k}, {"value", to_string(v.value)}, {"integral", v.integral}});
        rays.push_back(Json{{"ray", rb.ray_id},
                            {"tangency", rb.tangency},
                            {"refinement", rb.refinement},
                            {"omega_tilde", om},
                            {"bps", bp}});
    }
    return Json{{"schema", "tropgw-relgw"}, {"rows", rows}, {"rays", rays}};
}

} // namespace tropgw
