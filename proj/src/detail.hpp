#pragma once

// Helpers shared between translation units; not part of the public API.

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "roofline/hardware.hpp"

namespace roofline::detail {

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

std::string_view trim(std::string_view text);

// Strips surrounding whitespace and thousands separators, then parses with
// from_chars. decimal_shift moves the decimal point before conversion, so
// "808975.476" with shift -3 yields the double nearest to 808.975476.
// Throws Error(InvalidNumber) mentioning `what`.
double parse_decimal(std::string_view text, std::string_view what, int decimal_shift = 0);

// Non-negative integer counter. Accepts a trailing ".0..." fraction; any
// other fraction is rejected.
std::uint64_t parse_counter(std::string_view text, std::string_view what);

// Shortest round-trip representation, locale independent.
std::string format_double(double value);

nlohmann::ordered_json spec_json(const GpuSpec& spec);
GpuSpec spec_from_json(const nlohmann::json& j);

}  // namespace roofline::detail
