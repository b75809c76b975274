#ifndef OFBM_SVG_HPP
#define OFBM_SVG_HPP

#include <string>
#include <utility>
#include <vector>

namespace ofbm {

// Minimal static figure panel: line series and scatter series on auto-scaled
// axes.  Good enough for the simulation-study diagnostics.
struct SvgSeries {
    std::string label;
    std::string color = "#000000";
    bool line = true;   // false: scatter
    bool dashed = false;
    std::vector<std::pair<double, double>> points;
};

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<SvgSeries>& series);

} // namespace ofbm

#endif
