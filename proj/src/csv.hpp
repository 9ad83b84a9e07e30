#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace roofline::detail {

struct CsvRow {
    int line = 0;  // 1-based line the row starts on
    std::vector<std::string> fields;
};

// RFC 4180 style: comma separated, double-quoted fields may contain commas,
// doubled quotes and newlines. Blank lines are dropped. Lines for which
// skip_line returns true (checked on the raw text at a row start) are skipped.
// An unterminated quote throws Error(MalformedRow).
std::vector<CsvRow> read_csv(std::string_view text, bool (*skip_line)(std::string_view) = nullptr);

std::string csv_escape(std::string_view field);

}  // namespace roofline::detail
