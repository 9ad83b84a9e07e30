#include "roofline/hardware.hpp"

#include <algorithm>

#include "detail.hpp"
#include "roofline/errors.hpp"

namespace roofline {

namespace {

constexpr double kTransactionBytes = 32.0;

// Parameters as published for the three evaluation GPUs. V100 bandwidth is
// NVIDIA's datasheet 900 GB/s; the AMD figures are the vendor datasheet
// 1024 GB/s, which is not a measured value. Override through a spec file.
std::vector<GpuSpec> builtin_specs() {
    return {
        {"V100", Vendor::NVIDIA, 80, 4, 1, 1.530, 32, 900.0},
        {"MI60", Vendor::AMD, 64, 1, 1, 1.800, 64, 1024.0},
        {"MI100", Vendor::AMD, 120, 1, 1, 1.502, 64, 1024.0},
    };
}

bool same_name(std::string_view a, std::string_view b) {
    return to_lower(a) == to_lower(b);
}

}  // namespace

void validate(const GpuSpec& spec) {
    auto fail = [&](const std::string& what) {
        throw Error(ErrorCode::InvalidSpec, "spec '" + spec.name + "': " + what);
    };
    if (spec.name.empty()) fail("name must not be empty");
    if (spec.compute_units <= 0) fail("compute_units must be positive");
    if (spec.schedulers_per_unit <= 0) fail("schedulers_per_unit must be positive");
    if (spec.ipc <= 0) fail("ipc must be positive");
    if (!(spec.frequency_ghz > 0.0)) fail("frequency_ghz must be positive");
    if (spec.execution_group_size <= 0) fail("execution_group_size must be positive");
    if (!(spec.theoretical_bandwidth_gbps > 0.0)) fail("theoretical_bandwidth_gbps must be positive");
}

double peak_gips(const GpuSpec& spec) {
    validate(spec);
    return static_cast<double>(spec.compute_units) * spec.schedulers_per_unit * spec.ipc *
           spec.frequency_ghz;
}

CeilingSet ceilings(const GpuSpec& spec,
                    const std::optional<BandwidthMeasurement>& measured,
                    bool emit_gtxns) {
    CeilingSet out;
    out.peak_gips = peak_gips(spec);
    if (measured) {
        if (!(measured->value_gbps > 0.0))
            throw Error(ErrorCode::NonPositiveValue, "measured bandwidth must be positive");
        out.bandwidth_gbps = measured->value_gbps;
        out.bandwidth_source = BandwidthSource::Measured;
    } else {
        out.bandwidth_gbps = spec.theoretical_bandwidth_gbps;
        out.bandwidth_source = BandwidthSource::Theoretical;
    }
    if (emit_gtxns) out.bandwidth_gtxns = out.bandwidth_gbps / kTransactionBytes;
    return out;
}

const SpecRegistry& SpecRegistry::builtin() {
    static const SpecRegistry registry(builtin_specs());
    return registry;
}

SpecRegistry::SpecRegistry(std::vector<GpuSpec> specs) : specs_(std::move(specs)) {
    for (const auto& s : specs_) validate(s);
}

SpecRegistry SpecRegistry::with_user_specs(std::span<const GpuSpec> user) const {
    std::vector<GpuSpec> merged = specs_;
    for (const auto& u : user) {
        validate(u);
        auto it = std::find_if(merged.begin(), merged.end(),
                               [&](const GpuSpec& s) { return same_name(s.name, u.name); });
        if (it != merged.end())
            *it = u;
        else
            merged.push_back(u);
    }
    return SpecRegistry(std::move(merged));
}

const GpuSpec* SpecRegistry::find(std::string_view name) const {
    auto it = std::find_if(specs_.begin(), specs_.end(),
                           [&](const GpuSpec& s) { return same_name(s.name, name); });
    return it == specs_.end() ? nullptr : &*it;
}

const GpuSpec& SpecRegistry::lookup(std::string_view name) const {
    if (const auto* s = find(name)) return *s;
    std::string known;
    for (const auto& s : specs_) {
        if (!known.empty()) known += ", ";
        known += to_lower(s.name);
    }
    throw Error(ErrorCode::UnknownGpu,
                "unknown GPU '" + std::string(name) + "' (known: " + known + ")");
}

GpuSpec lookup_spec(std::string_view name) {
    return SpecRegistry::builtin().lookup(name);
}

std::vector<GpuSpec> parse_spec_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidSpec, std::string("malformed spec JSON: ") + e.what());
    }
    std::vector<GpuSpec> out;
    if (doc.is_array()) {
        for (const auto& entry : doc) out.push_back(detail::spec_from_json(entry));
    } else {
        out.push_back(detail::spec_from_json(doc));
    }
    return out;
}

std::vector<GpuSpec> load_spec_file(const std::string& path) {
    const auto text = detail::read_text_file(path);
    if (detail::trim(text).empty()) return {};
    return parse_spec_json(text);
}

std::string spec_to_json(const GpuSpec& spec) {
    return detail::spec_json(spec).dump(2);
}

}  // namespace roofline
