#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roofline/types.hpp"

namespace roofline {

// Static description of one GPU model, enough to derive its theoretical
// instruction ceiling.
struct GpuSpec {
    std::string name;
    Vendor vendor = Vendor::AMD;
    int compute_units = 0;            // AMD CUs or NVIDIA SMs
    int schedulers_per_unit = 0;      // wavefront / warp schedulers per CU/SM
    int ipc = 0;                      // instructions per cycle per scheduler
    double frequency_ghz = 0.0;
    int execution_group_size = 0;     // threads per wavefront (64) or warp (32)
    double theoretical_bandwidth_gbps = 0.0;

    bool operator==(const GpuSpec&) const = default;
};

// Throws Error(InvalidSpec) unless every numeric field is strictly positive
// and the name is non-empty.
void validate(const GpuSpec& spec);

struct CeilingSet {
    double peak_gips = 0.0;
    double bandwidth_gbps = 0.0;
    std::optional<double> bandwidth_gtxns;  // GTXN/s, bandwidth_gbps / 32
    BandwidthSource bandwidth_source = BandwidthSource::Theoretical;
    // Optional cache-level transaction ceilings (NVIDIA only). When absent,
    // L1/L2 points are plotted but left unclassified.
    std::optional<double> l1_gtxns;
    std::optional<double> l2_gtxns;
};

// compute_units * schedulers_per_unit * ipc * frequency_ghz
double peak_gips(const GpuSpec& spec);

// Measured bandwidth wins over the spec's theoretical figure when given.
// gtxns is filled only when emit_gtxns is set.
CeilingSet ceilings(const GpuSpec& spec,
                    const std::optional<BandwidthMeasurement>& measured,
                    bool emit_gtxns);

// Built-in table plus user specs. User specs replace built-ins of the same
// (case-insensitive) name. Immutable once constructed.
class SpecRegistry {
public:
    static const SpecRegistry& builtin();

    SpecRegistry() = default;
    explicit SpecRegistry(std::vector<GpuSpec> specs);

    SpecRegistry with_user_specs(std::span<const GpuSpec> user) const;

    // Throws Error(UnknownGpu) naming the known entries.
    const GpuSpec& lookup(std::string_view name) const;
    const GpuSpec* find(std::string_view name) const;

    std::span<const GpuSpec> specs() const { return specs_; }

private:
    std::vector<GpuSpec> specs_;
};

// Lookup against the built-in table only.
GpuSpec lookup_spec(std::string_view name);

// User spec files hold a single JSON object or an array of them, each with
// exactly the GpuSpec field names. Unknown or missing fields are rejected.
std::vector<GpuSpec> parse_spec_json(std::string_view text);
std::vector<GpuSpec> load_spec_file(const std::string& path);
std::string spec_to_json(const GpuSpec& spec);

}  // namespace roofline
