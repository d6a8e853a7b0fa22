#pragma once

#include <string>

#include "tfiq/io.hpp"

namespace tfiq {

struct PlotSpec {
    std::string x_col;
    std::string y_col;
    std::string series_col; // empty = single series
    std::string title;
};

/// Self-contained deterministic SVG line plot: axes, tick labels, one polyline
/// per series, legend. Throws plot-error on schema mismatch or empty data.
std::string render_svg_plot(const CsvTable& table, const PlotSpec& spec);

} // namespace tfiq
