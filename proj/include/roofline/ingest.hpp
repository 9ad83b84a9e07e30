#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roofline/types.hpp"

namespace roofline {

enum class SourceFormat { RocprofCsv, NvprofCsv };

// One kernel invocation as read from a profiler export, values untouched.
struct RawKernelRecord {
    std::string kernel_name;
    std::map<std::string, std::string> metric_values;
    SourceFormat source_format = SourceFormat::RocprofCsv;
    int line = 0;  // where the record came from, for diagnostics

    bool operator==(const RawKernelRecord& o) const {
        return kernel_name == o.kernel_name && metric_values == o.metric_values &&
               source_format == o.source_format;
    }
};

// Normalized measurement of one kernel. AMD profiles carry VALU/SALU
// counts, NVIDIA profiles carry inst_executed; never both.
struct KernelProfile {
    std::string kernel_name;
    Vendor vendor = Vendor::AMD;
    double runtime_s = 0.0;
    std::optional<double> bytes_read;
    std::optional<double> bytes_written;
    std::optional<std::uint64_t> valu_instructions;
    std::optional<std::uint64_t> salu_instructions;
    std::optional<std::uint64_t> executed_instructions;
    std::optional<std::uint64_t> transactions;     // HBM (dram) read + write
    std::optional<std::uint64_t> l1_transactions;  // global load + store
    std::optional<std::uint64_t> l2_transactions;  // L2 read + write

    bool operator==(const KernelProfile&) const = default;
};

struct NormalizeOptions {
    double kb_factor = 1024.0;       // bytes per profiler "KB"
    int transaction_bytes = 32;
};

enum class Aggregate { Off, Sum, Mean };

std::optional<Aggregate> parse_aggregate(std::string_view text);

// rocProf CSV: header row with KernelName and DurationNs or BeginNs/EndNs.
// Every other column lands in metric_values; empty cells are left out.
std::vector<RawKernelRecord> parse_rocprof_csv(std::string_view text);

// nvprof --metrics --csv output. "==" preamble lines are skipped and the
// kernel x metric rows are pivoted into one record per kernel, taking the
// Avg column (falling back to Max, then Min).
std::vector<RawKernelRecord> parse_nvprof_csv(std::string_view text);

// Writes records back as rocProf-style CSV: KernelName followed by the
// sorted union of metric keys.
std::string serialize_rocprof_csv(std::span<const RawKernelRecord> records);

// BabelStream text output (the "Function MBytes/sec ..." table) or its
// --csv form. Values are converted to GB/s by decimal shift, so MB/s
// figures convert without rounding beyond the final double.
std::vector<BandwidthMeasurement> parse_babelstream_log(std::string_view text);

// First measurement for fn; throws Error(FunctionNotFound).
BandwidthMeasurement select_bandwidth(std::span<const BandwidthMeasurement> measurements,
                                      StreamFunction fn);

// rocProf: bytes = FETCH_SIZE/WRITE_SIZE * kb_factor, runtime from DurationNs
// or EndNs - BeginNs. nvprof: inst_executed, dram transactions (bytes are
// transactions * transaction_bytes) and a "duration" metric in seconds, or
// with an ns/us/ms/s suffix.
KernelProfile normalize(const RawKernelRecord& record, const NormalizeOptions& opts = {});

// Throws Error(InvalidProfile / NonPositiveRuntime) if the vendor invariants
// do not hold.
void validate(const KernelProfile& profile);

// Merges invocations of the same kernel (same name and vendor), keeping
// first-appearance order. Sum adds runtimes and counters; Mean divides the
// sums by the invocation count, rounding counters to nearest.
std::vector<KernelProfile> aggregate(std::span<const KernelProfile> profiles, Aggregate mode);

// Canonical profile JSON: an array of objects using exactly the
// KernelProfile field names. Optional fields may be omitted or null.
std::vector<KernelProfile> parse_profile_json(std::string_view text);
std::string profiles_to_json(std::span<const KernelProfile> profiles);

}  // namespace roofline
