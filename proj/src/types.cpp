#include "roofline/types.hpp"

#include <algorithm>
#include <cctype>

namespace roofline {

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view to_string(Vendor v) {
    return v == Vendor::AMD ? "AMD" : "NVIDIA";
}

std::string_view to_string(MemoryLevel level) {
    switch (level) {
        case MemoryLevel::HBM: return "HBM";
        case MemoryLevel::L1: return "L1";
        case MemoryLevel::L2: return "L2";
    }
    return "HBM";
}

std::string_view to_string(IntensityMode mode) {
    switch (mode) {
        case IntensityMode::IntensityPerformance: return "IntensityPerformance";
        case IntensityMode::ClassicPerByte: return "ClassicPerByte";
        case IntensityMode::PerTransaction: return "PerTransaction";
    }
    return "IntensityPerformance";
}

std::string_view to_string(BandwidthSource source) {
    return source == BandwidthSource::Measured ? "Measured" : "Theoretical";
}

std::string_view to_string(StreamFunction fn) {
    switch (fn) {
        case StreamFunction::Copy: return "Copy";
        case StreamFunction::Mul: return "Mul";
        case StreamFunction::Add: return "Add";
        case StreamFunction::Triad: return "Triad";
        case StreamFunction::Dot: return "Dot";
    }
    return "Copy";
}

std::optional<Vendor> parse_vendor(std::string_view text) {
    const auto t = to_lower(text);
    if (t == "amd") return Vendor::AMD;
    if (t == "nvidia") return Vendor::NVIDIA;
    return std::nullopt;
}

std::optional<MemoryLevel> parse_memory_level(std::string_view text) {
    const auto t = to_lower(text);
    if (t == "hbm" || t == "dram") return MemoryLevel::HBM;
    if (t == "l1") return MemoryLevel::L1;
    if (t == "l2") return MemoryLevel::L2;
    return std::nullopt;
}

std::optional<StreamFunction> parse_stream_function(std::string_view text) {
    const auto t = to_lower(text);
    if (t == "copy") return StreamFunction::Copy;
    if (t == "mul") return StreamFunction::Mul;
    if (t == "add") return StreamFunction::Add;
    if (t == "triad") return StreamFunction::Triad;
    if (t == "dot") return StreamFunction::Dot;
    return std::nullopt;
}

std::optional<IntensityMode> parse_intensity_mode(std::string_view text) {
    const auto t = to_lower(text);
    if (t == "eq2" || t == "intensityperformance") return IntensityMode::IntensityPerformance;
    if (t == "perbyte" || t == "classicperbyte") return IntensityMode::ClassicPerByte;
    if (t == "pertxn" || t == "pertransaction") return IntensityMode::PerTransaction;
    return std::nullopt;
}

}  // namespace roofline
