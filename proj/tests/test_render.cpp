#include <cmath>
#include <regex>

#include <gtest/gtest.h>

#include "roofline/errors.hpp"
#include "roofline/render.hpp"
#include "test_util.hpp"
#include "../src/detail.hpp"

using namespace roofline;
using roofline::testing::code_of;
using roofline::testing::fixture;

namespace {

RooflineModel mi60_model() {
    const auto spec = lookup_spec("mi60");
    const auto ps = parse_profile_json(detail::read_text_file(fixture("table1_mi60.json")));
    const BandwidthMeasurement copy{StreamFunction::Copy, 808.975476, "", 0};
    return build_model(spec, ceilings(spec, copy, false), ps, IntensityMode::IntensityPerformance);
}

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

std::string points_group(const std::string& svg) {
    const auto start = svg.find("<g id=\"points\">");
    const auto end = svg.find("</g>", start);
    return svg.substr(start, end - start);
}

}  // namespace

TEST(RenderSvg, Mi60PointLandsOnTheDocumentedTransform) {
    const auto m = mi60_model();
    const auto svg = render_svg(m);

    std::smatch match;
    const auto pts = points_group(svg);
    ASSERT_TRUE(std::regex_search(pts, match, std::regex(R"re(<circle cx="([0-9.]+)" cy="([0-9.]+)")re")));
    const double cx = std::stod(match[1]);
    const double cy = std::stod(match[2]);

    // Independent recomputation: auto range = data extent padded by 10^0.5,
    // 800x600 canvas, margins 80/200/50/60.
    const double ridge = 115.2 / 808.975476;
    const double x = m.points[0].intensity, y = m.points[0].gips;
    const double lx_lo = std::log10(std::min(x, ridge)) - 0.5, lx_hi = std::log10(std::max(x, ridge)) + 0.5;
    const double ly_lo = std::log10(std::min(y, 115.2)) - 0.5, ly_hi = std::log10(std::max(y, 115.2)) + 0.5;
    const double want_x = 80 + (std::log10(x) - lx_lo) / (lx_hi - lx_lo) * (800 - 80 - 200);
    const double want_y = 50 + (600 - 50 - 60) - (std::log10(y) - ly_lo) / (ly_hi - ly_lo) * (600 - 50 - 60);
    EXPECT_NEAR(cx, want_x, 0.5);
    EXPECT_NEAR(cy, want_y, 0.5);
}

TEST(RenderSvg, StructureAndDeterminism) {
    const auto m = mi60_model();
    const auto svg = render_svg(m);
    EXPECT_TRUE(svg.starts_with("<?xml"));
    EXPECT_TRUE(svg.ends_with("</svg>\n"));
    EXPECT_EQ(count(svg, "<polyline"), 1u);
    EXPECT_EQ(count(points_group(svg), "<circle"), 1u);
    EXPECT_NE(svg.find("ComputeCurrent@HBM"), std::string::npos);
    EXPECT_EQ(svg.find("<script"), std::string::npos);
    EXPECT_EQ(svg.find("href"), std::string::npos);
    EXPECT_EQ(count(svg, "<g"), count(svg, "</g>"));
    EXPECT_EQ(render_svg(m), svg);

    // roof polyline has three vertices meeting at (ridge, peak)
    std::smatch match;
    ASSERT_TRUE(std::regex_search(svg, match, std::regex(R"re(<polyline id="roof-hbm" points="([^"]+)")re")));
    const std::string points = match[1];
    EXPECT_EQ(count(points, ","), 3u);
    const auto f = plot_frame(m, {});
    char vertex[64];
    std::snprintf(vertex, sizeof vertex, "%.2f,%.2f", f.map_x(m.ridge_intensity), f.map_y(m.ceilings.peak_gips));
    EXPECT_NE(points.find(vertex), std::string::npos) << points << " lacks " << vertex;
}

TEST(RenderSvg, CeilingsOnly) {
    const auto spec = lookup_spec("mi100");
    const auto m = build_model(spec, ceilings(spec, std::nullopt, false), {}, IntensityMode::ClassicPerByte);
    const auto svg = render_svg(m);
    EXPECT_EQ(count(svg, "<polyline"), 1u);
    EXPECT_EQ(count(points_group(svg), "<circle"), 0u);
    EXPECT_NE(svg.find("Instructions per Byte"), std::string::npos);
}

TEST(RenderSvg, NonPositiveValues) {
    auto m = mi60_model();
    m.points[0].intensity = 0.0;
    EXPECT_EQ(code_of([&] { render_svg(m); }), ErrorCode::NonPositiveValue);
    m = mi60_model();
    m.points[0].gips = 0.0;
    EXPECT_EQ(code_of([&] { render_svg(m); }), ErrorCode::NonPositiveValue);
}

TEST(RenderSvg, Options) {
    const auto m = mi60_model();
    PlotOptions o;
    o.x_range = {{1.0, 0.5}};
    EXPECT_EQ(code_of([&] { render_svg(m, o); }), ErrorCode::InvalidOptions);
    o.x_range = {{0.0, 1.0}};
    EXPECT_EQ(code_of([&] { render_svg(m, o); }), ErrorCode::InvalidOptions);
    o = {};
    o.width_px = 100;
    EXPECT_EQ(code_of([&] { render_svg(m, o); }), ErrorCode::InvalidOptions);

    o = {};
    o.x_range = {{1e-3, 1e3}};
    o.y_range = {{1e-2, 1e3}};
    o.title = "A <b> & \"c\"";
    const auto svg = render_svg(m, o);
    EXPECT_NE(svg.find("A &lt;b&gt; &amp; &quot;c&quot;"), std::string::npos);
    // six x decades + one: 1e-3 .. 1e3
    EXPECT_NE(svg.find(">0.001<"), std::string::npos);
    EXPECT_NE(svg.find(">1000<"), std::string::npos);
}

TEST(RenderSvg, RoofClippedToUserRange) {
    const auto m = mi60_model();
    PlotOptions o;
    o.x_range = {{1.0, 100.0}};  // entirely right of the ridge: flat roof only
    o.y_range = {{1e-2, 1e3}};
    const auto svg = render_svg(m, o);
    std::smatch match;
    ASSERT_TRUE(std::regex_search(svg, match, std::regex(R"re(<polyline id="roof-hbm" points="([^"]+)")re")));
    EXPECT_EQ(count(match[1].str(), ","), 2u);
}

TEST(RenderSvg, PerTransactionDrawsCacheRoofs) {
    const auto spec = lookup_spec("v100");
    KernelProfile p;
    p.kernel_name = "K<3>";
    p.vendor = Vendor::NVIDIA;
    p.runtime_s = 0.004;
    p.executed_instructions = 279498240;
    p.transactions = 49069213;
    p.l1_transactions = 200000000;
    p.l2_transactions = 90000000;
    auto c = ceilings(spec, std::nullopt, true);
    c.l1_gtxns = 437.5;
    c.l2_gtxns = 93.6;
    const std::vector<KernelProfile> ps{p};
    const auto svg = render_svg(build_model(spec, c, ps, IntensityMode::PerTransaction));
    EXPECT_NE(svg.find("roof-l1"), std::string::npos);
    EXPECT_NE(svg.find("roof-l2"), std::string::npos);
    EXPECT_NE(svg.find("Instructions per Transaction"), std::string::npos);
    EXPECT_NE(svg.find("K&lt;3&gt;@L2"), std::string::npos);
    EXPECT_EQ(count(points_group(svg), "<circle"), 3u);
}

TEST(PlotFrame, StrictlyMonotone) {
    const auto f = plot_frame(mi60_model(), {});
    double prev_x = -1e300, prev_y = 1e300;
    for (double v = 1e-4; v < 1e4; v *= 1.07) {
        const double x = f.map_x(v), y = f.map_y(v);
        EXPECT_GT(x, prev_x);
        EXPECT_LT(y, prev_y);  // pixel y grows downward
        prev_x = x;
        prev_y = y;
    }
}

// --- tables -------------------------------------------------------------------

namespace {

ComparisonTable three_column_table() {
    std::vector<RooflineModel> models;
    std::map<std::string, KernelProfile> by_gpu;
    for (const char* gpu : {"v100", "mi60", "mi100"}) {
        const auto spec = lookup_spec(gpu);
        const auto ps = parse_profile_json(detail::read_text_file(fixture(std::string("table1_") + gpu + ".json")));
        models.push_back(build_model(spec, ceilings(spec, std::nullopt, false), ps, IntensityMode::IntensityPerformance));
        by_gpu.emplace(spec.name, ps.front());
    }
    return compare(models, by_gpu);
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto eol = text.find('\n', pos);
        out.push_back(text.substr(pos, eol - pos));
        pos = eol + 1;
    }
    return out;
}

}  // namespace

TEST(RenderTable, MarkdownTable1) {
    const auto md = render_table(three_column_table(), TableFormat::Markdown);
    const auto ls = lines(md);
    ASSERT_EQ(ls.size(), 13u);  // header, rule, eleven rows
    EXPECT_EQ(ls[0], "| Metric | V100 | MI60 | MI100 |");
    EXPECT_EQ(ls[1], "|---|---:|---:|---:|");
    EXPECT_EQ(ls[2].rfind("| Execution Time (s) | 0.004 | 0.013 | 0.003 |", 0), 0u) << ls[2];
    EXPECT_EQ(ls[7], "| Peak GIPS | 489.600 | 115.200 | 180.240 |");
    EXPECT_EQ(ls[9], "| Instructions | 279,498,240 | 502,440,960 | 449,796,480 |");
    EXPECT_EQ(ls[10], "| Bytes Read | 267,280,000,000 | 1,125,436,000 | 1,124,711,000 |");
    EXPECT_EQ(ls[12].rfind("| Instruction Intensity (inst/byte) |", 0), 0u);
    for (const auto& l : ls) EXPECT_EQ(std::count(l.begin(), l.end(), '|'), 5) << l;
}

TEST(RenderTable, CsvQuotesLabelsAndKeepsRawCounters) {
    auto t = three_column_table();
    t.rows[0].label = "Execution Time, seconds";
    const auto csv = render_table(t, TableFormat::Csv);
    const auto ls = lines(csv);
    EXPECT_EQ(ls[0], "Metric,V100,MI60,MI100");
    EXPECT_EQ(ls[1].rfind("\"Execution Time, seconds\",", 0), 0u);
    EXPECT_EQ(ls[8], "Instructions,279498240,502440960,449796480");
}

TEST(RenderTable, PlainAligned) {
    const auto plain = render_table(three_column_table(), TableFormat::Plain);
    const auto ls = lines(plain);
    ASSERT_EQ(ls.size(), 12u);
    for (const auto& l : ls) EXPECT_EQ(l.size(), ls[0].size());
    EXPECT_NE(plain.find("279,498,240"), std::string::npos);
}

TEST(RenderTable, OneRowAndNa) {
    ComparisonTable t;
    t.columns = {"X"};
    t.rows = {{"Peak GIPS", RowKind::Real, {TableCell{}}}};
    EXPECT_EQ(render_table(t, TableFormat::Markdown), "| Metric | X |\n|---|---:|\n| Peak GIPS | n/a |\n");
    EXPECT_EQ(render_table(t, TableFormat::Csv), "Metric,X\nPeak GIPS,n/a\n");
    EXPECT_EQ(code_of([] { render_table({}, TableFormat::Plain); }), ErrorCode::InvalidOptions);
}
