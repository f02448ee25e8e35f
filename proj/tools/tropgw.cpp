// Command-line surface for the scattering / broken-line pipeline.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "tropgw/json_io.hpp"
#include "tropgw/svg.hpp"

namespace {

using namespace tropgw;

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

unsigned default_threads() {
    if (const char* env = std::getenv("TROPGW_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 256) return (unsigned)v;
    }
    return 1;
}

AffineBase make_base(const std::string& name, const Rat& radius) {
    AffineBase b;
    if (name == "cps-p2") b = cps_p2_base();
    else if (name == "toy-two-wall") b = toy_base();
    else {
        std::ifstream in(name);
        if (!in) throw DomainError("cannot open base/diagram file: " + name);
        Json j = Json::parse(in);
        if (j.contains("schema")) b = base_from_json(j.at("base"));
        else b = base_from_json(j);
    }
    if (radius > 0) b.radius = radius;
    return b;
}

ScatteringDiagram build_diagram(const std::string& base_name, int order, const Rat& radius,
                                ProcessOrder po, unsigned threads) {
    if (base_name == "toy-two-wall") {
        ScatteringDiagram d0 = toy_two_wall_diagram(order);
        if (radius > 0) d0.base.radius = radius;
        return complete(std::move(d0), order, po, threads);
    }
    AffineBase b = make_base(base_name, radius);
    return complete(initial_diagram(b, order), order, po, threads);
}

ScatteringDiagram load_diagram(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open diagram file: " + path);
    return diagram_from_json(Json::parse(in));
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write output file: " + path);
    out << text;
}

RatPoint parse_point(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw DomainError("expected x,y with exact rationals");
    return {parse_rat(s.substr(0, comma)), parse_rat(s.substr(comma + 1))};
}

// Deterministic exact offset suggestion for a non-generic endpoint.
std::optional<RatPoint> suggest_offset(const ScatteringDiagram& d, const RatPoint& u, int budget) {
    for (int k = 7; k <= 20; ++k) {
        Rat eps = Rat(1, 1 << k);
        for (auto dv : {RatVec2{eps, eps / 3}, RatVec2{-eps, eps / 5}, RatVec2{eps / 7, -eps}}) {
            RatPoint cand = u + dv;
            try {
                BrokenLineSearch s(d, cand, budget);
                return cand;
            } catch (const std::exception&) {
                continue;
            }
        }
    }
    return std::nullopt;
}

// Deterministic sample of adjacent chamber pairs across walls of the diagram.
struct ChamberPair {
    RatPoint u1, u2;
    int ray_id;
};

std::vector<ChamberPair> sample_adjacent_pairs(const ScatteringDiagram& d, int want, int budget) {
    std::vector<ChamberPair> out;
    for (const Ray& r : d.rays) {
        if ((int)out.size() >= want) break;
        for (size_t si = 0; si < r.support.segments.size(); ++si) {
            const Segment& seg = r.support.segments[si];
            RatPoint mid{(seg.a.x + seg.b.x) / 2, (seg.a.y + seg.b.y) / 2};
            if (norm2(mid - RatPoint{0, 0}) > d.base.radius * d.base.radius) continue;
            IntVec2 n{-seg.dir.y, seg.dir.x};
            bool done = false;
            for (int k = 5; k <= 14 && !done; ++k) {
                Rat eps = Rat(1, 1 << k);
                RatPoint u1 = mid + scale_vec(to_rat(n), eps);
                RatPoint u2 = mid + scale_vec(to_rat(n), -eps);
                try {
                    if (wallcross_check(d, u1, u2, r.id, budget)) {
                        out.push_back({u1, u2, r.id});
                        done = true;
                    } else {
                        // a definite covariance failure: report it as a sample
                        out.push_back({u1, u2, r.id});
                        done = true;
                    }
                } catch (const std::exception&) {
                    continue;
                }
            }
            if (done) break;
        }
    }
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"scattering diagrams, broken lines and tropical relative GW invariants"};
    app.require_subcommand(1);
    unsigned threads = default_threads();
    app.add_option("--threads", threads, "worker threads for completion");

    // ---- scatter ----
    auto* sc = app.add_subcommand("scatter", "build and complete a scattering diagram");
    std::string sc_base = "cps-p2";
    int sc_order = 6;
    std::string sc_radius = "0";
    std::string sc_out = "-";
    std::string sc_po = "canonical";
    sc->add_option("--base", sc_base, "cps-p2 | toy-two-wall | diagram/base file");
    sc->add_option("--order", sc_order, "truncation order N")->check(CLI::PositiveNumber);
    sc->add_option("--radius", sc_radius, "bounding radius override (exact rational)");
    sc->add_option("--process-order", sc_po, "canonical | reversed collision processing");
    sc->add_option("-o,--output", sc_out, "output path (default stdout)");

    // ---- potential ----
    auto* po = app.add_subcommand("potential", "broken lines and superpotential at a point");
    std::string po_input, po_at = "1/100,1/100", po_out = "-", po_svg;
    int po_order = 0;
    bool po_auto = false;
    po->add_option("diagram", po_input, "completed diagram JSON")->required();
    po->add_option("--at", po_at, "endpoint x,y (exact rationals)");
    po->add_option("--order", po_order, "grade budget (default: diagram order)");
    po->add_option("--svg", po_svg, "write an SVG overlay");
    po->add_flag("--auto-offset", po_auto, "perturb a non-generic endpoint automatically");
    po->add_option("-o,--output", po_out, "output path (default stdout)");

    // ---- relgw ----
    auto* rg = app.add_subcommand("relgw", "tropical relative GW invariants and BPS counts");
    std::string rg_input, rg_out = "-", rg_csv;
    int rg_dmax = 0, rg_order = 0;
    bool rg_stab = false;
    rg->add_option("diagram", rg_input, "completed diagram JSON")->required();
    rg->add_option("--dmax", rg_dmax, "maximal degree (default: order/3)");
    rg->add_option("--order", rg_order, "truncate the diagram to this order first");
    rg->add_flag("--check-stability", rg_stab, "recompute at order+1 and compare");
    rg->add_option("--csv", rg_csv, "also write rows as CSV");
    rg->add_option("-o,--output", rg_out, "output path (default stdout)");

    // ---- verify ----
    auto* vf = app.add_subcommand("verify", "consistency and wall-crossing checks");
    std::string vf_input;
    int vf_pairs = 20, vf_budget = 2;
    vf->add_option("diagram", vf_input, "completed diagram JSON")->required();
    vf->add_option("--pairs", vf_pairs, "number of adjacent chamber pairs to sample");
    vf->add_option("--budget", vf_budget, "grade budget for the wall-crossing samples");

    // ---- plot ----
    auto* pl = app.add_subcommand("plot", "render the diagram as SVG");
    std::string pl_input, pl_out = "-", pl_at;
    int pl_px = 800;
    pl->add_option("diagram", pl_input, "completed diagram JSON")->required();
    pl->add_option("-o,--output", pl_out, "output SVG path (default stdout)");
    pl->add_option("--broken-at", pl_at, "overlay broken lines ending at x,y");
    pl->add_option("--pixels", pl_px, "image size in pixels");

    CLI11_PARSE(app, argc, argv);

    if (sc->parsed()) {
        ProcessOrder p = sc_po == "reversed" ? ProcessOrder::Reversed : ProcessOrder::Canonical;
        ScatteringDiagram d =
            build_diagram(sc_base, sc_order, parse_rat(sc_radius), p, threads);
        write_text(sc_out, to_json(canonicalized(d)).dump(2) + "\n");
        return 0;
    }
    if (po->parsed()) {
        ScatteringDiagram d = load_diagram(po_input);
        int budget = po_order > 0 ? po_order : d.order;
        RatPoint at = parse_point(po_at);
        Json extra;
        std::vector<BrokenLine> lines;
        try {
            lines = enumerate_broken_lines(d, at, budget);
        } catch (const EndpointOnWall& e) {
            auto off = suggest_offset(d, at, budget);
            if (!po_auto || !off) {
                Json err{{"error", e.what()}};
                if (off) err["suggested_at"] = to_json(*off);
                std::cerr << err.dump(2) << "\n";
                return 1;
            }
            extra["offset_applied"] = to_json(*off);
            at = *off;
            lines = enumerate_broken_lines(d, at, budget);
        }
        Superpotential w{d.base.canonical_point(at), budget, {}};
        Json jlines = Json::array();
        for (auto& bl : lines) {
            w.terms[bl.cls] += bl.weight;
            jlines.push_back(to_json(bl));
        }
        Json out = to_json(w);
        out["broken_lines"] = jlines;
        if (!extra.is_null()) out["notes"] = extra;
        write_text(po_out, out.dump(2) + "\n");
        if (!po_svg.empty()) {
            SvgPlot plot((double)(d.base.radius.convert_to<double>()));
            plot.add_diagram(d);
            for (auto& bl : lines) plot.add_broken_line(bl);
            write_text(po_svg, plot.str());
        }
        return 0;
    }
    if (rg->parsed()) {
        ScatteringDiagram d = load_diagram(rg_input);
        if (rg_order > 0 && rg_order < d.order) {
            d.order = rg_order;
            for (Ray& r : d.rays) r.wall.f = r.wall.f.truncated(rg_order);
        }
        int dmax = rg_dmax > 0 ? rg_dmax : std::max(1, d.order / 3);
        if (rg_stab) {
            ScatteringDiagram d2 = complete(initial_diagram(d.base, d.order + 1), d.order + 1);
            for (int dd = 1; dd <= dmax; ++dd)
                if (relative_gw(d, dd) != relative_gw(d2, dd))
                    throw NotStabilized("relative GW not stabilized at order " +
                                        std::to_string(d.order));
        }
        RelGWTable table = bps_counts(d, dmax);
        std::string csv = "d,N_trop,bps,integral\n";
        for (auto& row : table.rows) {
            // cross-check the log-of-product route
            Rat n = relative_gw(d, row.degree);
            if (n != row.n_trop) throw std::logic_error("table/product extraction mismatch");
            csv += std::to_string(row.degree) + "," + to_string(row.n_trop) + "," +
                   to_string(row.bps_sum) + "," + (row.all_integral ? "true" : "false") + "\n";
        }
        write_text(rg_out, to_json(table).dump(2) + "\n");
        if (!rg_csv.empty()) write_text(rg_csv, csv);
        else std::cout << csv;
        return 0;
    }
    if (vf->parsed()) {
        ScatteringDiagram d = load_diagram(vf_input);
        auto defects = consistency_check(d, d.order);
        int bad_pairs = 0, checked = 0;
        for (auto& pr : sample_adjacent_pairs(d, vf_pairs, vf_budget)) {
            ++checked;
            if (!wallcross_check(d, pr.u1, pr.u2, pr.ray_id, vf_budget)) ++bad_pairs;
        }
        std::cout << defects.size() << " defects, " << bad_pairs << " covariance failures ("
                  << checked << " pairs sampled)\n";
        return (defects.empty() && bad_pairs == 0) ? 0 : 1;
    }
    if (pl->parsed()) {
        ScatteringDiagram d = load_diagram(pl_input);
        SvgPlot plot((double)(d.base.radius.convert_to<double>()), pl_px);
        plot.add_diagram(d);
        if (!pl_at.empty())
            for (auto& bl : enumerate_broken_lines(d, parse_point(pl_at), d.order))
                plot.add_broken_line(bl);
        write_text(pl_out, plot.str());
        return 0;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const DomainError& e) {
        std::cerr << Json{{"error", e.what()}}.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << Json{{"error", e.what()}}.dump(2) << "\n";
        return 1;
    }
}
