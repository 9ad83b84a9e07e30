#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace roofline {

enum class Vendor { AMD, NVIDIA };

// Memory hierarchy level an achieved point was measured against. AMD
// profiles only ever produce HBM points.
enum class MemoryLevel { HBM, L1, L2 };

// x-axis convention of a roofline.
//   IntensityPerformance: scaled instructions / ((bytes read + written) * runtime),
//                         reported as "inst/byte" the way the AMD tables label it
//                         even though the runtime factor makes it inst/(byte*s).
//   ClassicPerByte:       scaled instructions / bytes.
//   PerTransaction:       scaled instructions / 32-byte transactions (NVIDIA only).
enum class IntensityMode { IntensityPerformance, ClassicPerByte, PerTransaction };

enum class BandwidthSource { Theoretical, Measured };

enum class StreamFunction { Copy, Mul, Add, Triad, Dot };

struct BandwidthMeasurement {
    StreamFunction function = StreamFunction::Copy;
    double value_gbps = 0.0;
    std::string source_line;
    int line_number = 0;
};

std::string_view to_string(Vendor v);
std::string_view to_string(MemoryLevel level);
std::string_view to_string(IntensityMode mode);
std::string_view to_string(BandwidthSource source);
std::string_view to_string(StreamFunction fn);

// Case-insensitive; nullopt when the text names nothing known.
std::optional<Vendor> parse_vendor(std::string_view text);
std::optional<MemoryLevel> parse_memory_level(std::string_view text);
std::optional<StreamFunction> parse_stream_function(std::string_view text);
// Accepts the enum spelling as well as the CLI short forms eq2, perbyte, pertxn.
std::optional<IntensityMode> parse_intensity_mode(std::string_view text);

std::string to_lower(std::string_view text);

}  // namespace roofline
