#pragma once

#include <optional>
#include <string>
#include <utility>

#include "roofline/model.hpp"

namespace roofline {

struct PlotOptions {
    int width_px = 800;
    int height_px = 600;
    // Both axes are log10. When a range is absent it is fit to the data
    // (point coordinates, ridge, peak) padded by half a decade each side.
    std::optional<std::pair<double, double>> x_range;
    std::optional<std::pair<double, double>> y_range;
    std::optional<std::string> x_label;  // default from intensity mode
    std::optional<std::string> y_label;  // default "GIPS"
    std::string title;
};

// Fixed margins around the plot area, in pixels. The legend lives in the
// right margin.
struct PlotMargins {
    static constexpr double left = 80.0;
    static constexpr double right = 200.0;
    static constexpr double top = 50.0;
    static constexpr double bottom = 60.0;
};

// The data-to-pixel transform:
//   px = left + (log10 v - log10 x_lo) / (log10 x_hi - log10 x_lo) * plot_width
//   py = top + plot_height - (log10 v - log10 y_lo) / (log10 y_hi - log10 y_lo) * plot_height
struct PlotFrame {
    double x_lo = 1, x_hi = 10, y_lo = 1, y_hi = 10;
    double plot_left = 0, plot_top = 0, plot_width = 0, plot_height = 0;

    double map_x(double v) const;
    double map_y(double v) const;
};

PlotFrame plot_frame(const RooflineModel& model, const PlotOptions& opts);

// Standalone SVG 1.1 document. Output depends only on the inputs.
// Throws NonPositiveValue for any non-positive value destined for a log axis.
std::string render_svg(const RooflineModel& model, const PlotOptions& opts = {});

enum class TableFormat { Markdown, Csv, Plain };

std::optional<TableFormat> parse_table_format(std::string_view text);

// Reals at three decimals; counters with thousands separators except in Csv.
std::string render_table(const ComparisonTable& table, TableFormat format);

}  // namespace roofline
