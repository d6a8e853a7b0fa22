#include "tfiq/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <vector>

namespace tfiq {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kLeft = 80, kRight = 24, kTop = 36, kBottom = 56;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v, const char* spec = "%.6g") {
    char buf[40];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

double parse_cell(const std::string& cell) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(cell, &pos);
        if (pos != cell.size()) throw Error(ErrorCode::plot_error, "non-numeric cell '" + cell + "'");
        return v;
    } catch (const Error&) {
        throw;
    } catch (...) {
        throw Error(ErrorCode::plot_error, "non-numeric cell '" + cell + "'");
    }
}

} // namespace

std::string render_svg_plot(const CsvTable& table, const PlotSpec& spec) {
    const int xi = table.column(spec.x_col);
    const int yi = table.column(spec.y_col);
    if (xi < 0) throw Error(ErrorCode::plot_error, "missing column '" + spec.x_col + "'");
    if (yi < 0) throw Error(ErrorCode::plot_error, "missing column '" + spec.y_col + "'");
    int si = -1;
    if (!spec.series_col.empty()) {
        si = table.column(spec.series_col);
        if (si < 0) throw Error(ErrorCode::plot_error, "missing column '" + spec.series_col + "'");
    }
    if (table.rows.empty()) throw Error(ErrorCode::plot_error, "no data rows");

    // group rows into series in first-appearance order
    std::vector<std::string> labels;
    std::vector<std::vector<std::pair<double, double>>> series;
    for (const auto& row : table.rows) {
        if (static_cast<int>(row.size()) <= std::max({xi, yi, si}))
            throw Error(ErrorCode::plot_error, "short row in CSV");
        const std::string label = (si >= 0) ? row[static_cast<std::size_t>(si)] : std::string();
        auto it = std::find(labels.begin(), labels.end(), label);
        std::size_t idx;
        if (it == labels.end()) {
            labels.push_back(label);
            series.emplace_back();
            idx = labels.size() - 1;
        } else {
            idx = static_cast<std::size_t>(it - labels.begin());
        }
        const double x = parse_cell(row[static_cast<std::size_t>(xi)]);
        const double y = parse_cell(row[static_cast<std::size_t>(yi)]);
        if (std::isfinite(x) && std::isfinite(y)) series[idx].push_back({x, y});
    }

    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : series)
        for (const auto& [x, y] : s) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (!std::isfinite(xmin) || !std::isfinite(ymin))
        throw Error(ErrorCode::plot_error, "no finite data points");
    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax == ymin) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto sy = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    if (!spec.title.empty())
        svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"15\">" << spec.title << "</text>\n";

    // frame
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << fmt(plot_w)
        << "\" height=\"" << fmt(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";

    // ticks
    const int n_ticks = 5;
    for (int t = 0; t <= n_ticks; ++t) {
        const double fx = xmin + (xmax - xmin) * t / n_ticks;
        const double px = sx(fx);
        svg << "<line x1=\"" << fmt(px, "%.2f") << "\" y1=\"" << kTop + plot_h << "\" x2=\""
            << fmt(px, "%.2f") << "\" y2=\"" << fmt(kTop + plot_h + 5.0, "%.2f")
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt(px, "%.2f") << "\" y=\"" << fmt(kTop + plot_h + 20.0, "%.2f")
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(fx)
            << "</text>\n";
        const double fy = ymin + (ymax - ymin) * t / n_ticks;
        const double py = sy(fy);
        svg << "<line x1=\"" << fmt(kLeft - 5.0, "%.2f") << "\" y1=\"" << fmt(py, "%.2f")
            << "\" x2=\"" << kLeft << "\" y2=\"" << fmt(py, "%.2f") << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt(kLeft - 8.0, "%.2f") << "\" y=\"" << fmt(py + 4.0, "%.2f")
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(fy)
            << "</text>\n";
    }

    // axis labels
    svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << spec.x_col
        << "</text>\n";
    svg << "<text x=\"18\" y=\"" << kTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << kTop + plot_h / 2 << ")\">" << spec.y_col
        << "</text>\n";

    // polylines
    for (std::size_t s = 0; s < series.size(); ++s) {
        if (series[s].empty()) continue;
        const char* color = kPalette[s % (sizeof kPalette / sizeof kPalette[0])];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < series[s].size(); ++i) {
            const auto& [x, y] = series[s][i];
            svg << (i ? " " : "") << fmt(sx(x), "%.2f") << "," << fmt(sy(y), "%.2f");
        }
        svg << "\"/>\n";
    }

    // legend
    if (si >= 0) {
        for (std::size_t s = 0; s < labels.size(); ++s) {
            const double ly = kTop + 14.0 + 16.0 * static_cast<double>(s);
            const char* color = kPalette[s % (sizeof kPalette / sizeof kPalette[0])];
            svg << "<line x1=\"" << fmt(kLeft + plot_w - 110.0, "%.2f") << "\" y1=\""
                << fmt(ly - 4.0, "%.2f") << "\" x2=\"" << fmt(kLeft + plot_w - 90.0, "%.2f")
                << "\" y2=\"" << fmt(ly - 4.0, "%.2f") << "\" stroke=\"" << color
                << "\" stroke-width=\"2\"/>\n";
            svg << "<text x=\"" << fmt(kLeft + plot_w - 84.0, "%.2f") << "\" y=\""
                << fmt(ly, "%.2f") << "\" font-family=\"sans-serif\" font-size=\"11\">"
                << spec.series_col << "=" << labels[s] << "</text>\n";
        }
    }

    svg << "</svg>\n";
    return svg.str();
}

} // namespace tfiq
