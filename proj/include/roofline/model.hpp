#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "roofline/hardware.hpp"
#include "roofline/ingest.hpp"
#include "roofline/metrics.hpp"

namespace roofline {

struct RooflineModel {
    GpuSpec gpu;
    CeilingSet ceilings;
    std::vector<AchievedPoint> points;  // ascending intensity
    IntensityMode intensity_mode = IntensityMode::IntensityPerformance;
    double ridge_intensity = 0.0;       // peak / bandwidth in the mode's unit

    bool operator==(const RooflineModel&) const;
};

enum class Boundedness { MemoryBound, ComputeBound, Unclassified };

std::string_view to_string(Boundedness b);

// gtxns must be present exactly when mode is PerTransaction, and AMD GPUs
// cannot use PerTransaction; both raise InconsistentMode.
RooflineModel build_model(const GpuSpec& spec, const CeilingSet& ceilings,
                          std::span<const KernelProfile> profiles, IntensityMode mode);

// Memory roof slope for a level in the model's unit (GB/s for per-byte
// modes, GTXN/s for PerTransaction). nullopt when no ceiling is known.
std::optional<double> level_bandwidth(const RooflineModel& model, MemoryLevel level);

// peak / level bandwidth; nullopt when the level has no ceiling.
std::optional<double> level_ridge(const RooflineModel& model, MemoryLevel level);

// bandwidth * intensity, the sloped roof alone.
double memory_roof_gips(const RooflineModel& model, double intensity, MemoryLevel level = MemoryLevel::HBM);

// min(peak, bandwidth * intensity). Throws NonPositiveValue for intensity <= 0.
double attainable_gips(const RooflineModel& model, double intensity, MemoryLevel level = MemoryLevel::HBM);

// MemoryBound iff intensity < ridge of the point's level; a tie is
// ComputeBound. Cache-level points without a matching ceiling are Unclassified.
Boundedness classify(const AchievedPoint& point, const RooflineModel& model);

// Model serialization. Field names are stable; see README.
std::string model_to_json(const RooflineModel& model);
RooflineModel model_from_json(std::string_view text);

// ---------------------------------------------------------------------------
// Cross-GPU comparison table.

enum class RowKind { Real, Counter };

// Counter cells hold exact integers; byte totals, which may be fractional
// after the KB conversion, are stored as reals and shown rounded.
using TableCell = std::variant<std::monostate, std::uint64_t, double>;

struct TableRow {
    std::string label;
    RowKind kind = RowKind::Real;
    std::vector<TableCell> cells;  // one per column; monostate renders n/a
};

struct ComparisonTable {
    std::vector<std::string> columns;  // GPU names
    std::vector<TableRow> rows;
};

// Eleven rows per GPU: execution time, CUs/SMs, IPC, frequency, schedulers,
// peak GIPS, achieved GIPS, instructions, bytes read, bytes written,
// instruction intensity. Derived rows go through the metrics functions.
// A GPU without a profile (or lacking an input) gets n/a cells.
ComparisonTable compare(std::span<const RooflineModel> models,
                        const std::map<std::string, KernelProfile>& profiles_by_gpu);

}  // namespace roofline
