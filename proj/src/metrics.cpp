#include "roofline/metrics.hpp"

#include "roofline/errors.hpp"

namespace roofline {

namespace {

void require_group(int group_size) {
    if (group_size <= 0)
        throw Error(ErrorCode::InvalidSpec, "execution group size must be positive");
}

void require_runtime(double runtime_s) {
    if (!(runtime_s > 0.0))
        throw Error(ErrorCode::NonPositiveRuntime, "runtime must be positive");
}

double sum_bytes(const KernelProfile& p) {
    if (!p.bytes_read && !p.bytes_written)
        throw Error(ErrorCode::MissingMetric, "profile '" + p.kernel_name + "' has no byte counts");
    return p.bytes_read.value_or(0.0) + p.bytes_written.value_or(0.0);
}

AchievedPoint transaction_point(const KernelProfile& p, const GpuSpec& spec, std::uint64_t instructions,
                                std::uint64_t transactions, MemoryLevel level) {
    AchievedPoint pt;
    pt.kernel_name = p.kernel_name;
    pt.intensity_mode = IntensityMode::PerTransaction;
    pt.memory_level = level;
    pt.gips = achieved_gips(instructions, spec.execution_group_size, p.runtime_s);
    pt.intensity = transaction_intensity(instructions, spec.execution_group_size, transactions);
    return pt;
}

}  // namespace

std::uint64_t total_instructions_amd(std::uint64_t valu, std::uint64_t salu) {
    std::uint64_t vector_part = 0;
    std::uint64_t total = 0;
    if (__builtin_mul_overflow(valu, std::uint64_t{4}, &vector_part) ||
        __builtin_add_overflow(vector_part, salu, &total))
        throw Error(ErrorCode::Overflow, "VALU*4 + SALU exceeds 64 bits");
    return total;
}

double scaled_instructions(std::uint64_t instructions, int group_size) {
    require_group(group_size);
    return static_cast<double>(instructions) / static_cast<double>(group_size);
}

double achieved_gips(std::uint64_t instructions, int group_size, double runtime_s) {
    require_runtime(runtime_s);
    return scaled_instructions(instructions, group_size) / (UnitConventions::giga * runtime_s);
}

double intensity_performance(std::uint64_t instructions, int group_size,
                             double bytes_read, double bytes_written, double runtime_s) {
    const double traffic = bytes_read + bytes_written;
    if (!(traffic > 0.0)) throw Error(ErrorCode::ZeroTraffic, "bytes read + written must be positive");
    require_runtime(runtime_s);
    return scaled_instructions(instructions, group_size) / (traffic * runtime_s);
}

double classic_intensity(std::uint64_t instructions, int group_size, double bytes_total) {
    if (!(bytes_total > 0.0)) throw Error(ErrorCode::ZeroTraffic, "byte total must be positive");
    return scaled_instructions(instructions, group_size) / bytes_total;
}

double transaction_intensity(std::uint64_t instructions, int group_size, std::uint64_t transactions) {
    if (transactions == 0) throw Error(ErrorCode::ZeroTransactions, "transaction count must be positive");
    return scaled_instructions(instructions, group_size) / static_cast<double>(transactions);
}

double gbps_to_gtxns(double gbps, const UnitConventions& conv) {
    if (conv.transaction_bytes <= 0)
        throw Error(ErrorCode::InvalidOptions, "transaction_bytes must be positive");
    return gbps / static_cast<double>(conv.transaction_bytes);
}

std::uint64_t profile_instructions(const KernelProfile& p) {
    if (p.vendor == Vendor::AMD) {
        if (!p.valu_instructions && !p.salu_instructions)
            throw Error(ErrorCode::NoInstructionMetric, "profile '" + p.kernel_name + "' has no VALU/SALU counts");
        return total_instructions_amd(p.valu_instructions.value_or(0), p.salu_instructions.value_or(0));
    }
    if (!p.executed_instructions)
        throw Error(ErrorCode::NoInstructionMetric, "profile '" + p.kernel_name + "' has no executed_instructions");
    return *p.executed_instructions;
}

AchievedPoint point_for_profile(const KernelProfile& p, const GpuSpec& spec, IntensityMode mode) {
    if (mode == IntensityMode::PerTransaction && p.vendor == Vendor::AMD)
        throw Error(ErrorCode::ModeUnsupported,
                    "per-transaction intensity needs transaction counts, which AMD profiles do not provide");

    const auto instructions = profile_instructions(p);
    const int group = spec.execution_group_size;

    if (mode == IntensityMode::PerTransaction) {
        if (!p.transactions)
            throw Error(ErrorCode::MissingMetric, "profile '" + p.kernel_name + "' has no HBM transaction count");
        return transaction_point(p, spec, instructions, *p.transactions, MemoryLevel::HBM);
    }

    AchievedPoint pt;
    pt.kernel_name = p.kernel_name;
    pt.intensity_mode = mode;
    pt.memory_level = MemoryLevel::HBM;
    pt.gips = achieved_gips(instructions, group, p.runtime_s);
    if (mode == IntensityMode::IntensityPerformance) {
        sum_bytes(p);
        pt.intensity = intensity_performance(instructions, group, p.bytes_read.value_or(0.0),
                                             p.bytes_written.value_or(0.0), p.runtime_s);
    } else {
        pt.intensity = classic_intensity(instructions, group, sum_bytes(p));
    }
    return pt;
}

std::vector<AchievedPoint> points_for_profile(const KernelProfile& p, const GpuSpec& spec, IntensityMode mode) {
    std::vector<AchievedPoint> out{point_for_profile(p, spec, mode)};
    if (mode != IntensityMode::PerTransaction) return out;
    const auto instructions = profile_instructions(p);
    if (p.l1_transactions)
        out.push_back(transaction_point(p, spec, instructions, *p.l1_transactions, MemoryLevel::L1));
    if (p.l2_transactions)
        out.push_back(transaction_point(p, spec, instructions, *p.l2_transactions, MemoryLevel::L2));
    return out;
}

}  // namespace roofline
