#include "roofline/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "csv.hpp"
#include "detail.hpp"
#include "roofline/errors.hpp"

namespace roofline {

namespace {

constexpr double kHalfDecade = 3.1622776601683795;  // sqrt(10)

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string px(double v) {
    return fmt("%.2f", v);
}

std::string xml_escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

void require_positive(double v, const std::string& what) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw Error(ErrorCode::NonPositiveValue, what + " must be positive on a log axis (got " + detail::format_double(v) + ")");
}

void check_range(const std::optional<std::pair<double, double>>& r, const char* axis) {
    if (!r) return;
    if (!(r->first > 0.0) || !(r->first < r->second) || !std::isfinite(r->second))
        throw Error(ErrorCode::InvalidOptions, std::string(axis) + " range must satisfy 0 < min < max");
}

struct Vec2 {
    double x, y;
};

// Liang-Barsky in log10 space; returns false when nothing survives.
bool clip(Vec2& a, Vec2& b, const PlotFrame& f) {
    const double x0 = std::log10(f.x_lo), x1 = std::log10(f.x_hi);
    const double y0 = std::log10(f.y_lo), y1 = std::log10(f.y_hi);
    const double dx = b.x - a.x, dy = b.y - a.y;
    double t0 = 0.0, t1 = 1.0;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {a.x - x0, x1 - a.x, a.y - y0, y1 - a.y};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return false;
            continue;
        }
        const double t = q[i] / p[i];
        if (p[i] < 0.0) t0 = std::max(t0, t);
        else t1 = std::min(t1, t);
    }
    if (t0 > t1) return false;
    const Vec2 start{a.x + t0 * dx, a.y + t0 * dy};
    const Vec2 end{a.x + t1 * dx, a.y + t1 * dy};
    a = start;
    b = end;
    return true;
}

// Roof for one bandwidth as one or more polylines (log10 coordinates).
std::vector<std::vector<Vec2>> roof_polylines(double peak, double bandwidth, const PlotFrame& f) {
    const double ridge = peak / bandwidth;
    const double lx_lo = std::log10(f.x_lo), lx_hi = std::log10(f.x_hi);
    const double lridge = std::log10(ridge), lpeak = std::log10(peak), lbw = std::log10(bandwidth);

    std::vector<std::pair<Vec2, Vec2>> segments;
    if (lridge > lx_lo) {
        const double end = std::min(lridge, lx_hi);
        segments.push_back({{lx_lo, lbw + lx_lo}, {end, lbw + end}});
    }
    if (lridge < lx_hi) {
        const double start = std::max(lridge, lx_lo);
        segments.push_back({{start, lpeak}, {lx_hi, lpeak}});
    }

    std::vector<std::vector<Vec2>> lines;
    for (auto [a, b] : segments) {
        if (!clip(a, b, f)) continue;
        if (!lines.empty()) {
            const auto& last = lines.back().back();
            if (std::abs(last.x - a.x) < 1e-12 && std::abs(last.y - a.y) < 1e-12) {
                lines.back().push_back(b);
                continue;
            }
        }
        lines.push_back({a, b});
    }
    return lines;
}

std::string decade_label(int k) {
    if (k >= -3 && k <= 4) return fmt("%g", std::pow(10.0, k));
    return "1e" + std::to_string(k);
}

}  // namespace

double PlotFrame::map_x(double v) const {
    return plot_left + (std::log10(v) - std::log10(x_lo)) / (std::log10(x_hi) - std::log10(x_lo)) * plot_width;
}

double PlotFrame::map_y(double v) const {
    return plot_top + plot_height -
           (std::log10(v) - std::log10(y_lo)) / (std::log10(y_hi) - std::log10(y_lo)) * plot_height;
}

PlotFrame plot_frame(const RooflineModel& model, const PlotOptions& opts) {
    check_range(opts.x_range, "x");
    check_range(opts.y_range, "y");
    PlotFrame f;
    f.plot_left = PlotMargins::left;
    f.plot_top = PlotMargins::top;
    f.plot_width = opts.width_px - PlotMargins::left - PlotMargins::right;
    f.plot_height = opts.height_px - PlotMargins::top - PlotMargins::bottom;
    if (!(f.plot_width > 0.0) || !(f.plot_height > 0.0))
        throw Error(ErrorCode::InvalidOptions, "plot size leaves no room for the plot area");

    require_positive(model.ceilings.peak_gips, "peak GIPS");
    require_positive(model.ridge_intensity, "ridge intensity");

    double x_min = model.ridge_intensity, x_max = model.ridge_intensity;
    double y_min = model.ceilings.peak_gips, y_max = model.ceilings.peak_gips;
    for (const auto level : {MemoryLevel::L1, MemoryLevel::L2}) {
        if (auto r = level_ridge(model, level)) {
            require_positive(*r, std::string(to_string(level)) + " ridge");
            x_min = std::min(x_min, *r);
            x_max = std::max(x_max, *r);
        }
    }
    for (const auto& p : model.points) {
        const std::string who = p.kernel_name + "@" + std::string(to_string(p.memory_level));
        require_positive(p.intensity, who + " intensity");
        require_positive(p.gips, who + " GIPS");
        x_min = std::min(x_min, p.intensity);
        x_max = std::max(x_max, p.intensity);
        y_min = std::min(y_min, p.gips);
        y_max = std::max(y_max, p.gips);
    }

    if (opts.x_range) {
        f.x_lo = opts.x_range->first;
        f.x_hi = opts.x_range->second;
    } else {
        f.x_lo = x_min / kHalfDecade;
        f.x_hi = x_max * kHalfDecade;
    }
    if (opts.y_range) {
        f.y_lo = opts.y_range->first;
        f.y_hi = opts.y_range->second;
    } else {
        f.y_lo = y_min / kHalfDecade;
        f.y_hi = y_max * kHalfDecade;
    }
    return f;
}

std::string render_svg(const RooflineModel& model, const PlotOptions& opts) {
    const PlotFrame f = plot_frame(model, opts);
    const bool per_txn = model.intensity_mode == IntensityMode::PerTransaction;
    const std::string x_label = opts.x_label.value_or(per_txn ? "Instructions per Transaction" : "Instructions per Byte");
    const std::string y_label = opts.y_label.value_or("GIPS");
    const std::string bw_unit = per_txn ? "GTXN/s" : "GB/s";

    const double right = f.plot_left + f.plot_width;
    const double bottom = f.plot_top + f.plot_height;
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(opts.width_px) +
         "\" height=\"" + std::to_string(opts.height_px) + "\" viewBox=\"0 0 " + std::to_string(opts.width_px) + " " +
         std::to_string(opts.height_px) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(opts.width_px) + "\" height=\"" +
         std::to_string(opts.height_px) + "\" fill=\"white\"/>\n";
    if (!opts.title.empty())
        s += "<text x=\"" + px(f.plot_left + f.plot_width / 2) + "\" y=\"" + px(f.plot_top / 2 + 6) +
             "\" text-anchor=\"middle\" font-size=\"16\">" + xml_escape(opts.title) + "</text>\n";

    // decade grid
    s += "<g id=\"grid\" stroke=\"#dddddd\" stroke-width=\"1\">\n";
    std::string labels;
    for (int k = static_cast<int>(std::ceil(std::log10(f.x_lo) - 1e-9));
         k <= static_cast<int>(std::floor(std::log10(f.x_hi) + 1e-9)); ++k) {
        const double x = f.map_x(std::pow(10.0, k));
        s += "<line x1=\"" + px(x) + "\" y1=\"" + px(f.plot_top) + "\" x2=\"" + px(x) + "\" y2=\"" + px(bottom) + "\"/>\n";
        labels += "<text x=\"" + px(x) + "\" y=\"" + px(bottom + 16) + "\" text-anchor=\"middle\">" +
                  decade_label(k) + "</text>\n";
    }
    for (int k = static_cast<int>(std::ceil(std::log10(f.y_lo) - 1e-9));
         k <= static_cast<int>(std::floor(std::log10(f.y_hi) + 1e-9)); ++k) {
        const double y = f.map_y(std::pow(10.0, k));
        s += "<line x1=\"" + px(f.plot_left) + "\" y1=\"" + px(y) + "\" x2=\"" + px(right) + "\" y2=\"" + px(y) + "\"/>\n";
        labels += "<text x=\"" + px(f.plot_left - 6) + "\" y=\"" + px(y + 4) + "\" text-anchor=\"end\">" +
                  decade_label(k) + "</text>\n";
    }
    s += "</g>\n";
    s += "<g id=\"tick-labels\" fill=\"#333333\">\n" + labels + "</g>\n";

    s += "<rect x=\"" + px(f.plot_left) + "\" y=\"" + px(f.plot_top) + "\" width=\"" + px(f.plot_width) +
         "\" height=\"" + px(f.plot_height) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    s += "<text x=\"" + px(f.plot_left + f.plot_width / 2) + "\" y=\"" + px(opts.height_px - 14.0) +
         "\" text-anchor=\"middle\">" + xml_escape(x_label) + "</text>\n";
    s += "<text x=\"18\" y=\"" + px(f.plot_top + f.plot_height / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         px(f.plot_top + f.plot_height / 2) + ")\">" + xml_escape(y_label) + "</text>\n";

    // roofs
    s += "<g id=\"roofline\" fill=\"none\">\n";
    auto draw_roof = [&](double bandwidth, const char* style, const std::string& id) {
        for (const auto& line : roof_polylines(model.ceilings.peak_gips, bandwidth, f)) {
            s += "<polyline id=\"" + id + "\" points=\"";
            for (std::size_t i = 0; i < line.size(); ++i) {
                if (i) s += " ";
                s += px(f.map_x(std::pow(10.0, line[i].x))) + "," + px(f.map_y(std::pow(10.0, line[i].y)));
            }
            s += "\" " + std::string(style) + "/>\n";
        }
    };
    const double hbm_bw = model.ceilings.peak_gips / model.ridge_intensity;
    draw_roof(hbm_bw, "stroke=\"black\" stroke-width=\"2\"", "roof-hbm");
    for (const auto level : {MemoryLevel::L1, MemoryLevel::L2}) {
        if (model.intensity_mode != IntensityMode::PerTransaction) break;
        if (auto bw = level_bandwidth(model, level)) {
            require_positive(*bw, std::string(to_string(level)) + " bandwidth");
            draw_roof(*bw, "stroke=\"#777777\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"",
                      "roof-" + to_lower(to_string(level)));
        }
    }
    s += "</g>\n";
    s += "<g id=\"ceiling-labels\" fill=\"#000000\" font-size=\"11\">\n";
    if (model.ceilings.peak_gips >= f.y_lo && model.ceilings.peak_gips <= f.y_hi)
        s += "<text x=\"" + px(right - 4) + "\" y=\"" + px(f.map_y(model.ceilings.peak_gips) - 6) +
             "\" text-anchor=\"end\">Peak " + fmt("%.2f", model.ceilings.peak_gips) + " GIPS</text>\n";
    s += "<text x=\"" + px(f.plot_left + 6) + "\" y=\"" + px(f.plot_top + 16) + "\">HBM " +
         fmt("%.3f", hbm_bw) + " " + bw_unit + " (" +
         std::string(to_string(model.ceilings.bandwidth_source)) + ")</text>\n";
    s += "</g>\n";

    // achieved points and legend
    s += "<g id=\"points\">\n";
    std::string legend;
    for (std::size_t i = 0; i < model.points.size(); ++i) {
        const auto& p = model.points[i];
        const char* color = kPalette[i % std::size(kPalette)];
        const std::string label = p.kernel_name + "@" + std::string(to_string(p.memory_level));
        s += "<circle cx=\"" + px(f.map_x(p.intensity)) + "\" cy=\"" + px(f.map_y(p.gips)) +
             "\" r=\"5\" fill=\"" + color + "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
        const double ly = f.plot_top + 10 + 18.0 * static_cast<double>(i);
        legend += "<circle cx=\"" + px(right + 16) + "\" cy=\"" + px(ly) + "\" r=\"5\" fill=\"" + color + "\"/>\n";
        legend += "<text x=\"" + px(right + 26) + "\" y=\"" + px(ly + 4) + "\">" + xml_escape(label) + "</text>\n";
    }
    s += "</g>\n";
    s += "<g id=\"legend\">\n" + legend + "</g>\n";
    s += "</svg>\n";
    return s;
}

// ---------------------------------------------------------------------------

std::optional<TableFormat> parse_table_format(std::string_view text) {
    const auto t = to_lower(text);
    if (t == "markdown" || t == "md") return TableFormat::Markdown;
    if (t == "csv") return TableFormat::Csv;
    if (t == "plain" || t == "text" || t == "txt") return TableFormat::Plain;
    return std::nullopt;
}

namespace {

std::string with_separators(std::uint64_t v) {
    std::string digits = std::to_string(v);
    std::string out;
    const auto n = digits.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (i && (n - i) % 3 == 0) out.push_back(',');
        out.push_back(digits[i]);
    }
    return out;
}

std::string cell_text(const TableCell& cell, RowKind kind, TableFormat format) {
    if (std::holds_alternative<std::monostate>(cell)) return "n/a";
    const bool raw = format == TableFormat::Csv;
    if (const auto* n = std::get_if<std::uint64_t>(&cell)) {
        if (kind == RowKind::Real) return fmt("%.3f", static_cast<double>(*n));
        return raw ? std::to_string(*n) : with_separators(*n);
    }
    const double v = std::get<double>(cell);
    if (kind == RowKind::Counter) {
        if (raw) return detail::format_double(v);
        if (v >= 0.0 && v < 1.8e19) return with_separators(static_cast<std::uint64_t>(std::llround(v)));
        return fmt("%.0f", v);
    }
    return fmt("%.3f", v);
}

}  // namespace

std::string render_table(const ComparisonTable& table, TableFormat format) {
    if (table.columns.empty() || table.rows.empty())
        throw Error(ErrorCode::InvalidOptions, "cannot render an empty table");

    std::vector<std::vector<std::string>> grid;
    grid.push_back({"Metric"});
    for (const auto& c : table.columns) grid.front().push_back(c);
    for (const auto& row : table.rows) {
        std::vector<std::string> line{row.label};
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            const TableCell cell = c < row.cells.size() ? row.cells[c] : TableCell{};
            line.push_back(cell_text(cell, row.kind, format));
        }
        grid.push_back(std::move(line));
    }

    std::string out;
    switch (format) {
        case TableFormat::Csv:
            for (const auto& line : grid) {
                for (std::size_t i = 0; i < line.size(); ++i) {
                    if (i) out += ",";
                    out += detail::csv_escape(line[i]);
                }
                out += "\n";
            }
            break;
        case TableFormat::Markdown:
            for (std::size_t r = 0; r < grid.size(); ++r) {
                out += "|";
                for (const auto& cell : grid[r]) out += " " + cell + " |";
                out += "\n";
                if (r == 0) {
                    out += "|---|";
                    for (std::size_t i = 1; i < grid[r].size(); ++i) out += "---:|";
                    out += "\n";
                }
            }
            break;
        case TableFormat::Plain: {
            std::vector<std::size_t> widths(grid.front().size(), 0);
            for (const auto& line : grid)
                for (std::size_t i = 0; i < line.size(); ++i) widths[i] = std::max(widths[i], line[i].size());
            for (const auto& line : grid) {
                std::string text;
                for (std::size_t i = 0; i < line.size(); ++i) {
                    const auto pad = std::string(widths[i] - line[i].size(), ' ');
                    text += i == 0 ? line[i] + pad : "  " + pad + line[i];
                }
                out += text + "\n";
            }
            break;
        }
    }
    return out;
}

}  // namespace roofline
