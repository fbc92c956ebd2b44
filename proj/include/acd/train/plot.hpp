#pragma once

#include <string>
#include <vector>

namespace acd {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;  // NaN entries are skipped
};

/// Renders a line plot (axes, ticks, legend) to a PNG file. Output bytes
/// are a pure function of the inputs.
void render_line_plot(const std::vector<PlotSeries>& series, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::string& out_path, int width = 960, int height = 640);

}  // namespace acd
