#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roofline/hardware.hpp"
#include "roofline/ingest.hpp"
#include "roofline/types.hpp"

namespace roofline {

struct UnitConventions {
    int transaction_bytes = 32;
    static constexpr double giga = 1e9;
};

struct AchievedPoint {
    std::string kernel_name;
    double gips = 0.0;
    double intensity = 0.0;
    IntensityMode intensity_mode = IntensityMode::IntensityPerformance;
    MemoryLevel memory_level = MemoryLevel::HBM;

    bool operator==(const AchievedPoint&) const = default;
};

// Issued instructions on GCN/CDNA: VALU is counted per SIMD and there are
// four SIMDs per CU, SALU once per CU. Throws Error(Overflow) instead of
// wrapping.
std::uint64_t total_instructions_amd(std::uint64_t valu, std::uint64_t salu);

// Instructions per wavefront (64) or warp (32). The same instruction count
// therefore yields half the GIPS on a 64-wide wavefront as on a warp.
double scaled_instructions(std::uint64_t instructions, int group_size);

// scaled instructions / (1e9 * runtime_s)
double achieved_gips(std::uint64_t instructions, int group_size, double runtime_s);

// scaled instructions / ((bytes_read + bytes_written) * runtime_s).
// Labelled inst/byte in the AMD tables although the runtime factor leaves
// a 1/s in the unit; ClassicPerByte is the runtime-free variant.
double intensity_performance(std::uint64_t instructions, int group_size,
                             double bytes_read, double bytes_written, double runtime_s);

// scaled instructions / bytes_total
double classic_intensity(std::uint64_t instructions, int group_size, double bytes_total);

// scaled instructions / transactions
double transaction_intensity(std::uint64_t instructions, int group_size, std::uint64_t transactions);

double gbps_to_gtxns(double gbps, const UnitConventions& conv = {});

// VALU x 4 + SALU for AMD, inst_executed for NVIDIA.
std::uint64_t profile_instructions(const KernelProfile& profile);

// HBM point for the profile under `mode`. Throws ModeUnsupported for AMD
// profiles in PerTransaction mode, MissingMetric when the mode's inputs are
// absent, plus whatever the component formulas throw.
AchievedPoint point_for_profile(const KernelProfile& profile, const GpuSpec& spec, IntensityMode mode);

// point_for_profile plus, in PerTransaction mode, one point per cache level
// whose transaction count the profile carries (L1 then L2).
std::vector<AchievedPoint> points_for_profile(const KernelProfile& profile, const GpuSpec& spec,
                                              IntensityMode mode);

}  // namespace roofline
