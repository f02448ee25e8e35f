#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "tropgw/broken.hpp"
#include "tropgw/scattering.hpp"

namespace tropgw {

// Static SVG rendering of a diagram. The only place floating point appears.
class SvgPlot {
public:
    SvgPlot(double view_radius, int pixels = 800) : r_(view_radius), px_(pixels) {}

    void add_diagram(const ScatteringDiagram& d) {
        // cuts
        for (auto& s : d.base.sings) {
            for (bool plus : {true, false}) {
                IntVec2 dir = plus ? s.cut_plus : s.cut_minus;
                double n = std::sqrt((double)(dir.x * dir.x + dir.y * dir.y));
                double len = 2.5 * r_ / n;
                line(f(s.position.x), f(s.position.y), f(s.position.x) + dir.x * len,
                     f(s.position.y) + dir.y * len, "#999999", 1.0, "6,4");
            }
            mark(f(s.position.x), f(s.position.y));
        }
        // rays, styled by the grade of their lowest term
        for (const Ray& r : d.rays) {
            int g = d.order + 1;
            for (auto& [e, c] : r.wall.f.terms())
                if (!e.is_unit()) {
                    g = e.a;
                    break;
                }
            std::string color = g <= 1 ? "#000000" : palette(g);
            for (auto& s : r.support.segments)
                line(f(s.a.x), f(s.a.y), f(s.b.x), f(s.b.y), color, g <= 1 ? 1.6 : 1.1);
        }
    }

    void add_broken_line(const BrokenLine& bl) {
        for (size_t i = 0; i + 1 < bl.trail.size(); ++i)
            line(f(bl.trail[i].x), f(bl.trail[i].y), f(bl.trail[i + 1].x), f(bl.trail[i + 1].y),
                 "#cc2222", 1.4, "2,2");
        if (!bl.trail.empty()) dot(f(bl.trail.front().x), f(bl.trail.front().y), "#cc2222");
    }

    std::string str() const {
        std::ostringstream out;
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px_ << "\" height=\"" << px_
            << "\" viewBox=\"0 0 " << px_ << " " << px_ << "\">\n"
            << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        for (auto& e : body_) out << e << "\n";
        out << "</svg>\n";
        return out.str();
    }

private:
    double r_;
    int px_;
    std::vector<std::string> body_;

    static double f(const Rat& x) {
        return (double)numerator(x).convert_to<double>() /
               (double)denominator(x).convert_to<double>();
    }
    double sx(double x) const { return (x + r_) / (2 * r_) * px_; }
    double sy(double y) const { return (r_ - y) / (2 * r_) * px_; }

    static std::string palette(int g) {
        static const char* cols[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
        return cols[g % 8];
    }

    void line(double x1, double y1, double x2, double y2, const std::string& color, double w,
              const std::string& dash = "") {
        std::ostringstream e;
        e << "<line x1=\"" << sx(x1) << "\" y1=\"" << sy(y1) << "\" x2=\"" << sx(x2) << "\" y2=\""
          << sy(y2) << "\" stroke=\"" << color << "\" stroke-width=\"" << w << "\"";
        if (!dash.empty()) e << " stroke-dasharray=\"" << dash << "\"";
        e << "/>";
        body_.push_back(e.str());
    }
    void mark(double x, double y) {
        std::ostringstream e;
        e << "<g stroke=\"#cc0000\" stroke-width=\"1.5\">"
          << "<line x1=\"" << sx(x) - 4 << "\" y1=\"" << sy(y) - 4 << "\" x2=\"" << sx(x) + 4
          << "\" y2=\"" << sy(y) + 4 << "\"/>"
          << "<line x1=\"" << sx(x) - 4 << "\" y1=\"" << sy(y) + 4 << "\" x2=\"" << sx(x) + 4
          << "\" y2=\"" << sy(y) - 4 << "\"/></g>";
        body_.push_back(e.str());
    }
    void dot(double x, double y, const std::string& color) {
        std::ostringstream e;
        e << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3\" fill=\"" << color
          << "\"/>";
        body_.push_back(e.str());
    }
};

} // namespace tropgw
