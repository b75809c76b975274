#include "ofbm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ofbm/errors.hpp"

namespace ofbm {

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<SvgSeries>& series) {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    if (x0 > x1) {
        x0 = 0;
        x1 = 1;
        y0 = 0;
        y1 = 1;
    }
    if (x1 - x0 < 1e-12) x1 = x0 + 1;
    if (y1 - y0 < 1e-12) y1 = y0 + 1;

    const double w = 560, h = 400, ml = 64, mr = 16, mt = 36, mb = 44;
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - (y - y0) / (y1 - y0) * (h - mt - mb); };

    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << w / 2 << "' y='20' text-anchor='middle' font-size='14'>" << title
        << "</text>\n";

    // axes + tick labels
    out << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr << "' y2='" << h - mb
        << "' stroke='black'/>\n";
    out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << h - mb
        << "' stroke='black'/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
        out << "<text x='" << px(xv) << "' y='" << h - mb + 16
            << "' text-anchor='middle' font-size='10'>" << xv << "</text>\n";
        out << "<text x='" << ml - 6 << "' y='" << py(yv) + 3
            << "' text-anchor='end' font-size='10'>" << yv << "</text>\n";
    }

    double legend_y = mt + 6;
    for (const auto& s : series) {
        if (s.line) {
            out << "<polyline fill='none' stroke='" << s.color << "'";
            if (s.dashed) out << " stroke-dasharray='6,4'";
            out << " points='";
            for (const auto& [x, y] : s.points)
                if (std::isfinite(x) && std::isfinite(y)) out << px(x) << "," << py(y) << " ";
            out << "'/>\n";
        } else {
            for (const auto& [x, y] : s.points)
                if (std::isfinite(x) && std::isfinite(y))
                    out << "<circle cx='" << px(x) << "' cy='" << py(y) << "' r='2.2' fill='"
                        << s.color << "'/>\n";
        }
        if (!s.label.empty()) {
            out << "<text x='" << w - mr - 4 << "' y='" << legend_y << "' text-anchor='end' "
                << "font-size='11' fill='" << s.color << "'>" << s.label << "</text>\n";
            legend_y += 14;
        }
    }
    out << "</svg>\n";
}

} // namespace ofbm
