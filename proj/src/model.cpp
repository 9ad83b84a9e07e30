#include "roofline/model.hpp"

#include <algorithm>

#include <json.hpp>

#include "detail.hpp"
#include "roofline/errors.hpp"

namespace roofline {

bool RooflineModel::operator==(const RooflineModel& o) const {
    auto same_ceilings = [](const CeilingSet& a, const CeilingSet& b) {
        return a.peak_gips == b.peak_gips && a.bandwidth_gbps == b.bandwidth_gbps &&
               a.bandwidth_gtxns == b.bandwidth_gtxns && a.bandwidth_source == b.bandwidth_source &&
               a.l1_gtxns == b.l1_gtxns && a.l2_gtxns == b.l2_gtxns;
    };
    return gpu == o.gpu && same_ceilings(ceilings, o.ceilings) && points == o.points &&
           intensity_mode == o.intensity_mode && ridge_intensity == o.ridge_intensity;
}

std::string_view to_string(Boundedness b) {
    switch (b) {
        case Boundedness::MemoryBound: return "MemoryBound";
        case Boundedness::ComputeBound: return "ComputeBound";
        case Boundedness::Unclassified: return "Unclassified";
    }
    return "Unclassified";
}

RooflineModel build_model(const GpuSpec& spec, const CeilingSet& ceilings,
                          std::span<const KernelProfile> profiles, IntensityMode mode) {
    validate(spec);
    const bool per_txn = mode == IntensityMode::PerTransaction;
    if (per_txn && spec.vendor == Vendor::AMD)
        throw Error(ErrorCode::InconsistentMode,
                    "GPU '" + spec.name + "' is AMD; per-transaction rooflines need transaction counters");
    if (per_txn != ceilings.bandwidth_gtxns.has_value())
        throw Error(ErrorCode::InconsistentMode,
                    per_txn ? "per-transaction mode needs a GTXN/s bandwidth ceiling"
                            : "GTXN/s ceiling given for a per-byte intensity mode");

    RooflineModel model;
    model.gpu = spec;
    model.ceilings = ceilings;
    model.intensity_mode = mode;

    const double bandwidth = per_txn ? *ceilings.bandwidth_gtxns : ceilings.bandwidth_gbps;
    if (!(bandwidth > 0.0) || !(ceilings.peak_gips > 0.0))
        throw Error(ErrorCode::NonPositiveValue, "ceilings must be positive");
    model.ridge_intensity = ceilings.peak_gips / bandwidth;

    for (const auto& p : profiles) {
        auto pts = points_for_profile(p, spec, mode);
        model.points.insert(model.points.end(), pts.begin(), pts.end());
    }
    std::stable_sort(model.points.begin(), model.points.end(),
                     [](const AchievedPoint& a, const AchievedPoint& b) { return a.intensity < b.intensity; });
    return model;
}

std::optional<double> level_bandwidth(const RooflineModel& model, MemoryLevel level) {
    const auto& c = model.ceilings;
    if (model.intensity_mode == IntensityMode::PerTransaction) {
        switch (level) {
            case MemoryLevel::HBM: return c.bandwidth_gtxns;
            case MemoryLevel::L1: return c.l1_gtxns;
            case MemoryLevel::L2: return c.l2_gtxns;
        }
    }
    if (level == MemoryLevel::HBM) return c.bandwidth_gbps;
    return std::nullopt;
}

std::optional<double> level_ridge(const RooflineModel& model, MemoryLevel level) {
    if (level == MemoryLevel::HBM) return model.ridge_intensity;
    const auto bw = level_bandwidth(model, level);
    if (!bw || !(*bw > 0.0)) return std::nullopt;
    return model.ceilings.peak_gips / *bw;
}

double memory_roof_gips(const RooflineModel& model, double intensity, MemoryLevel level) {
    const auto bw = level_bandwidth(model, level);
    if (!bw)
        throw Error(ErrorCode::MissingMetric, "no " + std::string(to_string(level)) + " bandwidth ceiling");
    return *bw * intensity;
}

double attainable_gips(const RooflineModel& model, double intensity, MemoryLevel level) {
    if (!(intensity > 0.0)) throw Error(ErrorCode::NonPositiveValue, "intensity must be positive");
    const double roof = memory_roof_gips(model, intensity, level);
    // At and past the ridge the compute roof holds exactly.
    if (intensity >= *level_ridge(model, level)) return model.ceilings.peak_gips;
    return std::min(model.ceilings.peak_gips, roof);
}

Boundedness classify(const AchievedPoint& point, const RooflineModel& model) {
    const auto ridge = level_ridge(model, point.memory_level);
    if (!ridge) return Boundedness::Unclassified;
    return point.intensity < *ridge ? Boundedness::MemoryBound : Boundedness::ComputeBound;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::optional<double> read_optional(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

}  // namespace

std::string model_to_json(const RooflineModel& model) {
    nlohmann::ordered_json doc;
    doc["gpu"] = detail::spec_json(model.gpu);
    doc["intensity_mode"] = std::string(to_string(model.intensity_mode));
    doc["intensity_unit"] = model.intensity_mode == IntensityMode::PerTransaction ? "inst/txn" : "inst/byte";

    nlohmann::ordered_json c;
    c["peak_gips"] = model.ceilings.peak_gips;
    c["bandwidth_gbps"] = model.ceilings.bandwidth_gbps;
    c["bandwidth_gtxns"] = optional_number(model.ceilings.bandwidth_gtxns);
    c["bandwidth_source"] = std::string(to_string(model.ceilings.bandwidth_source));
    c["l1_gtxns"] = optional_number(model.ceilings.l1_gtxns);
    c["l2_gtxns"] = optional_number(model.ceilings.l2_gtxns);
    doc["ceilings"] = std::move(c);
    doc["ridge_intensity"] = model.ridge_intensity;

    auto points = nlohmann::ordered_json::array();
    for (const auto& p : model.points) {
        nlohmann::ordered_json j;
        j["kernel_name"] = p.kernel_name;
        j["memory_level"] = std::string(to_string(p.memory_level));
        j["gips"] = p.gips;
        j["intensity"] = p.intensity;
        j["bound"] = std::string(to_string(classify(p, model)));
        points.push_back(std::move(j));
    }
    doc["points"] = std::move(points);
    return doc.dump(2) + "\n";
}

RooflineModel model_from_json(std::string_view text) {
    try {
        const auto doc = nlohmann::json::parse(text);
        RooflineModel model;
        model.gpu = detail::spec_from_json(doc.at("gpu"));
        auto mode = parse_intensity_mode(doc.at("intensity_mode").get<std::string>());
        if (!mode) throw Error(ErrorCode::Config, "unknown intensity_mode");
        model.intensity_mode = *mode;

        const auto& c = doc.at("ceilings");
        model.ceilings.peak_gips = c.at("peak_gips").get<double>();
        model.ceilings.bandwidth_gbps = c.at("bandwidth_gbps").get<double>();
        model.ceilings.bandwidth_gtxns = read_optional(c, "bandwidth_gtxns");
        model.ceilings.bandwidth_source = c.at("bandwidth_source").get<std::string>() == "Measured"
                                              ? BandwidthSource::Measured
                                              : BandwidthSource::Theoretical;
        model.ceilings.l1_gtxns = read_optional(c, "l1_gtxns");
        model.ceilings.l2_gtxns = read_optional(c, "l2_gtxns");
        model.ridge_intensity = doc.at("ridge_intensity").get<double>();

        for (const auto& j : doc.at("points")) {
            AchievedPoint p;
            p.kernel_name = j.at("kernel_name").get<std::string>();
            auto level = parse_memory_level(j.at("memory_level").get<std::string>());
            if (!level) throw Error(ErrorCode::Config, "unknown memory_level");
            p.memory_level = *level;
            p.gips = j.at("gips").get<double>();
            p.intensity = j.at("intensity").get<double>();
            p.intensity_mode = model.intensity_mode;
            model.points.push_back(std::move(p));
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Config, std::string("malformed model JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

namespace {

template <typename F>
TableCell try_cell(F&& f) {
    try {
        return f();
    } catch (const Error&) {
        return std::monostate{};
    }
}

const KernelProfile* find_profile(const std::map<std::string, KernelProfile>& by_gpu, const std::string& name) {
    for (const auto& [key, profile] : by_gpu)
        if (to_lower(key) == to_lower(name)) return &profile;
    return nullptr;
}

std::string intensity_label(std::span<const RooflineModel> models) {
    const auto mode = models.front().intensity_mode;
    for (const auto& m : models)
        if (m.intensity_mode != mode) return "Instruction Intensity (mixed units)";
    return mode == IntensityMode::PerTransaction ? "Instruction Intensity (inst/txn)"
                                                 : "Instruction Intensity (inst/byte)";
}

}  // namespace

ComparisonTable compare(std::span<const RooflineModel> models,
                        const std::map<std::string, KernelProfile>& profiles_by_gpu) {
    if (models.empty()) throw Error(ErrorCode::InvalidOptions, "compare needs at least one model");

    ComparisonTable table;
    table.rows = {
        {"Execution Time (s)", RowKind::Real, {}},
        {"Compute Units / SMs", RowKind::Counter, {}},
        {"Instructions/Cycle", RowKind::Counter, {}},
        {"Frequency (GHz)", RowKind::Real, {}},
        {"Wavefront / Warp Schedulers", RowKind::Counter, {}},
        {"Peak GIPS", RowKind::Real, {}},
        {"Achieved GIPS", RowKind::Real, {}},
        {"Instructions", RowKind::Counter, {}},
        {"Bytes Read", RowKind::Counter, {}},
        {"Bytes Written", RowKind::Counter, {}},
        {intensity_label(models), RowKind::Real, {}},
    };

    for (const auto& m : models) {
        table.columns.push_back(m.gpu.name);
        const auto* p = find_profile(profiles_by_gpu, m.gpu.name);
        const int group = m.gpu.execution_group_size;
        auto need = [&]() -> const KernelProfile& {
            if (!p) throw Error(ErrorCode::MissingMetric, "no profile");
            return *p;
        };
        auto opt = [](const std::optional<double>& v) -> TableCell {
            if (v) return *v;
            return std::monostate{};
        };

        std::vector<TableCell> col;
        col.push_back(try_cell([&]() -> TableCell { return need().runtime_s; }));
        col.push_back(static_cast<std::uint64_t>(m.gpu.compute_units));
        col.push_back(static_cast<std::uint64_t>(m.gpu.ipc));
        col.push_back(m.gpu.frequency_ghz);
        col.push_back(static_cast<std::uint64_t>(m.gpu.schedulers_per_unit));
        col.push_back(m.ceilings.peak_gips);
        col.push_back(try_cell([&]() -> TableCell {
            const auto& q = need();
            return achieved_gips(profile_instructions(q), group, q.runtime_s);
        }));
        col.push_back(try_cell([&]() -> TableCell { return profile_instructions(need()); }));
        col.push_back(p ? opt(p->bytes_read) : TableCell{});
        col.push_back(p ? opt(p->bytes_written) : TableCell{});
        col.push_back(try_cell([&]() -> TableCell {
            const auto& q = need();
            return point_for_profile(q, m.gpu, m.intensity_mode).intensity;
        }));

        for (std::size_t r = 0; r < table.rows.size(); ++r) table.rows[r].cells.push_back(col[r]);
    }
    return table;
}

}  // namespace roofline
