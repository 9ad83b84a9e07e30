#include <gtest/gtest.h>

#include "roofline/errors.hpp"
#include "roofline/model.hpp"
#include "test_util.hpp"
#include "../src/detail.hpp"

using namespace roofline;
using roofline::testing::code_of;
using roofline::testing::fixture;
using roofline::testing::rel_err;

namespace {

KernelProfile load_one(const std::string& name) {
    return parse_profile_json(detail::read_text_file(fixture(name))).front();
}

BandwidthMeasurement mi60_copy() {
    return {StreamFunction::Copy, 808.975476, "Copy 808975.476", 11};
}

RooflineModel mi60_model() {
    const auto spec = lookup_spec("mi60");
    const std::vector<KernelProfile> ps{load_one("table1_mi60.json")};
    return build_model(spec, ceilings(spec, mi60_copy(), false), ps, IntensityMode::IntensityPerformance);
}

RooflineModel v100_txn_model() {
    const auto spec = lookup_spec("v100");
    KernelProfile p;
    p.kernel_name = "ComputeCurrent";
    p.vendor = Vendor::NVIDIA;
    p.runtime_s = 0.004;
    p.executed_instructions = 279498240;
    p.transactions = 49069213;
    p.l1_transactions = 200000000;
    const std::vector<KernelProfile> ps{p};
    return build_model(spec, ceilings(spec, BandwidthMeasurement{StreamFunction::Copy, 900.0, "", 0}, true), ps,
                       IntensityMode::PerTransaction);
}

}  // namespace

TEST(BuildModel, Mi60Lwfa) {
    const auto m = mi60_model();
    ASSERT_EQ(m.points.size(), 1u);
    EXPECT_LT(rel_err(m.points[0].gips, 0.620), 0.03);
    EXPECT_LT(rel_err(m.points[0].intensity, 0.398), 0.03);
    EXPECT_EQ(m.points[0].memory_level, MemoryLevel::HBM);
    EXPECT_EQ(m.ridge_intensity, m.ceilings.peak_gips / 808.975476);
    EXPECT_EQ(m.intensity_mode, IntensityMode::IntensityPerformance);
}

TEST(BuildModel, EmptyProfilesGiveCeilingsOnly) {
    const auto spec = lookup_spec("mi100");
    const auto m = build_model(spec, ceilings(spec, std::nullopt, false), {}, IntensityMode::ClassicPerByte);
    EXPECT_TRUE(m.points.empty());
    EXPECT_EQ(m.ridge_intensity, peak_gips(spec) / spec.theoretical_bandwidth_gbps);
}

TEST(BuildModel, InconsistentMode) {
    const auto mi60 = lookup_spec("mi60");
    EXPECT_EQ(code_of([&] { build_model(mi60, ceilings(mi60, std::nullopt, true), {}, IntensityMode::PerTransaction); }),
              ErrorCode::InconsistentMode);
    const auto v100 = lookup_spec("v100");
    EXPECT_EQ(code_of([&] { build_model(v100, ceilings(v100, std::nullopt, false), {}, IntensityMode::PerTransaction); }),
              ErrorCode::InconsistentMode);
    EXPECT_EQ(code_of([&] { build_model(v100, ceilings(v100, std::nullopt, true), {}, IntensityMode::ClassicPerByte); }),
              ErrorCode::InconsistentMode);
}

TEST(BuildModel, PropagatesMetricErrors) {
    const auto spec = lookup_spec("mi60");
    auto p = load_one("table1_mi60.json");
    p.bytes_read = 0.0;
    p.bytes_written = 0.0;
    const std::vector<KernelProfile> ps{p};
    EXPECT_EQ(code_of([&] { build_model(spec, ceilings(spec, std::nullopt, false), ps, IntensityMode::ClassicPerByte); }),
              ErrorCode::ZeroTraffic);
}

TEST(BuildModel, PointsSortedByIntensity) {
    const auto spec = lookup_spec("mi60");
    auto a = load_one("table1_mi60.json");
    auto b = a;
    b.kernel_name = "Dense";
    b.bytes_read = 1000.0;
    b.bytes_written = 0.0;
    const std::vector<KernelProfile> ps{b, a};
    const auto m = build_model(spec, ceilings(spec, std::nullopt, false), ps, IntensityMode::ClassicPerByte);
    ASSERT_EQ(m.points.size(), 2u);
    EXPECT_EQ(m.points[0].kernel_name, "ComputeCurrent");
    EXPECT_LT(m.points[0].intensity, m.points[1].intensity);
}

TEST(Attainable, RidgeAndLinearRegion) {
    const auto m = mi60_model();
    EXPECT_EQ(attainable_gips(m, m.ridge_intensity), m.ceilings.peak_gips);
    EXPECT_DOUBLE_EQ(attainable_gips(m, m.ridge_intensity / 2), m.ceilings.peak_gips / 2);
    EXPECT_EQ(code_of([&] { attainable_gips(m, 0.0); }), ErrorCode::NonPositiveValue);
}

TEST(Attainable, Mi60MeasuredRoof) {
    const auto m = mi60_model();
    // 0.398 * 808.975476 from the exact-rational oracle
    EXPECT_NEAR(memory_roof_gips(m, 0.398), 321.972239448, 1e-9);
    // 0.398 lies past the ridge (0.1424), so the compute roof caps it
    EXPECT_EQ(attainable_gips(m, 0.398), m.ceilings.peak_gips);
    EXPECT_NEAR(attainable_gips(m, 0.398), 115.20, 1e-9);
    EXPECT_GT(attainable_gips(m, 0.398), m.points[0].gips);
}

TEST(Classify, V100HbmPointIsMemoryBound) {
    const auto m = v100_txn_model();
    EXPECT_NEAR(m.ridge_intensity, 17.408, 1e-9);
    const auto& hbm = *std::find_if(m.points.begin(), m.points.end(),
                                    [](const AchievedPoint& p) { return p.memory_level == MemoryLevel::HBM; });
    EXPECT_NEAR(hbm.intensity, 0.178, 0.001);
    EXPECT_EQ(classify(hbm, m), Boundedness::MemoryBound);
}

TEST(Classify, TieAndFarRight) {
    const auto m = mi60_model();
    AchievedPoint p{"k", 1.0, m.ridge_intensity, m.intensity_mode, MemoryLevel::HBM};
    EXPECT_EQ(classify(p, m), Boundedness::ComputeBound);
    p.intensity = 10 * m.ridge_intensity;
    EXPECT_EQ(classify(p, m), Boundedness::ComputeBound);
    p.intensity = std::nextafter(m.ridge_intensity, 0.0);
    EXPECT_EQ(classify(p, m), Boundedness::MemoryBound);
}

TEST(Classify, CacheLevelsNeedTheirOwnCeiling) {
    auto m = v100_txn_model();
    const auto l1 = *std::find_if(m.points.begin(), m.points.end(),
                                  [](const AchievedPoint& p) { return p.memory_level == MemoryLevel::L1; });
    EXPECT_EQ(classify(l1, m), Boundedness::Unclassified);
    m.ceilings.l1_gtxns = 437.5;  // ridge 489.6 / 437.5 = 1.119
    EXPECT_EQ(classify(l1, m), Boundedness::MemoryBound);
    EXPECT_NEAR(*level_ridge(m, MemoryLevel::L1), 489.6 / 437.5, 1e-12);
}

TEST(ModelJson, RoundTripAndFieldNames) {
    const auto m = mi60_model();
    const auto text = model_to_json(m);
    for (const char* key : {"\"gpu\"", "\"ceilings\"", "\"ridge_intensity\"", "\"points\"", "\"peak_gips\"",
                            "\"bandwidth_gbps\"", "\"bandwidth_source\"", "\"intensity_mode\"", "\"bound\""})
        EXPECT_NE(text.find(key), std::string::npos) << key;
    EXPECT_EQ(model_from_json(text), m);
    EXPECT_EQ(model_to_json(model_from_json(text)), text);

    const auto t = v100_txn_model();
    EXPECT_EQ(model_from_json(model_to_json(t)), t);
}

TEST(Compare, Table1Reproduction) {
    std::vector<RooflineModel> models;
    std::map<std::string, KernelProfile> by_gpu;
    for (const char* gpu : {"v100", "mi60", "mi100"}) {
        const auto spec = lookup_spec(gpu);
        const auto p = load_one(std::string("table1_") + gpu + ".json");
        const std::vector<KernelProfile> ps{p};
        models.push_back(build_model(spec, ceilings(spec, std::nullopt, false), ps, IntensityMode::IntensityPerformance));
        by_gpu.emplace(spec.name, p);
    }
    const auto t = compare(models, by_gpu);
    ASSERT_EQ(t.columns, (std::vector<std::string>{"V100", "MI60", "MI100"}));
    ASSERT_EQ(t.rows.size(), 11u);

    auto real = [&](std::size_t row, std::size_t col) { return std::get<double>(t.rows[row].cells[col]); };
    auto count = [&](std::size_t row, std::size_t col) { return std::get<std::uint64_t>(t.rows[row].cells[col]); };

    const double gips[] = {2.178, 0.620, 2.856};
    const double ii[] = {0.006, 0.398, 1.863};
    const std::uint64_t instr[] = {279498240, 502440960, 449796480};
    const double peak[] = {489.60, 115.20, 180.24};
    const std::uint64_t cu[] = {80, 64, 120};
    const std::uint64_t sched[] = {4, 1, 1};
    for (std::size_t c = 0; c < 3; ++c) {
        EXPECT_EQ(count(1, c), cu[c]);
        EXPECT_EQ(count(2, c), 1u);
        EXPECT_EQ(count(4, c), sched[c]);
        EXPECT_NEAR(real(5, c), peak[c], 0.005);
        EXPECT_LT(rel_err(real(6, c), gips[c]), 0.03);
        EXPECT_EQ(count(7, c), instr[c]);
        EXPECT_LT(rel_err(real(10, c), ii[c]), 0.03);
        // derived rows are the metrics functions' own results
        const auto& p = by_gpu.at(t.columns[c]);
        EXPECT_EQ(real(6, c), achieved_gips(instr[c], models[c].gpu.execution_group_size, p.runtime_s));
        EXPECT_EQ(real(10, c), models[c].points[0].intensity);
    }
    EXPECT_EQ(t.rows[10].label, "Instruction Intensity (inst/byte)");
}

TEST(Compare, SingleColumnAndMissingData) {
    const auto spec = lookup_spec("mi60");
    const auto m = build_model(spec, ceilings(spec, std::nullopt, false), {}, IntensityMode::IntensityPerformance);
    const std::vector<RooflineModel> models{m};

    auto t = compare(models, {});
    ASSERT_EQ(t.columns.size(), 1u);
    for (const auto& row : t.rows) ASSERT_EQ(row.cells.size(), 1u);
    EXPECT_TRUE(std::holds_alternative<std::monostate>(t.rows[0].cells[0]));
    EXPECT_TRUE(std::holds_alternative<std::monostate>(t.rows[6].cells[0]));
    EXPECT_NEAR(std::get<double>(t.rows[5].cells[0]), 115.2, 1e-9);

    auto p = load_one("table1_mi60.json");
    p.bytes_read.reset();
    p.bytes_written.reset();
    t = compare(models, {{"MI60", p}});
    EXPECT_TRUE(std::holds_alternative<std::monostate>(t.rows[8].cells[0]));
    EXPECT_TRUE(std::holds_alternative<std::monostate>(t.rows[9].cells[0]));
    EXPECT_TRUE(std::holds_alternative<std::monostate>(t.rows[10].cells[0]));
    EXPECT_FALSE(std::holds_alternative<std::monostate>(t.rows[6].cells[0]));

    EXPECT_EQ(code_of([] { compare({}, {}); }), ErrorCode::InvalidOptions);
}
