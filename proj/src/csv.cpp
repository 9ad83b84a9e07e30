#include "csv.hpp"

#include "detail.hpp"
#include "roofline/errors.hpp"

namespace roofline::detail {

std::vector<CsvRow> read_csv(std::string_view text, bool (*skip_line)(std::string_view)) {
    std::vector<CsvRow> rows;
    std::size_t pos = 0;
    int line = 1;

    // UTF-8 byte order mark
    if (text.substr(0, 3) == "\xEF\xBB\xBF") pos = 3;

    while (pos < text.size()) {
        const auto eol = text.find('\n', pos);
        const auto raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        if (trim(raw).empty() || (skip_line && skip_line(raw))) {
            pos = eol == std::string_view::npos ? text.size() : eol + 1;
            ++line;
            continue;
        }

        CsvRow row;
        row.line = line;
        std::string field;
        bool in_quotes = false;
        bool done = false;
        while (!done) {
            if (pos >= text.size()) {
                if (in_quotes)
                    throw Error(ErrorCode::MalformedRow,
                                "line " + std::to_string(row.line) + ": unterminated quoted field");
                done = true;
                break;
            }
            const char c = text[pos++];
            if (in_quotes) {
                if (c == '"') {
                    if (pos < text.size() && text[pos] == '"') {
                        field.push_back('"');
                        ++pos;
                    } else {
                        in_quotes = false;
                    }
                } else {
                    if (c == '\n') ++line;
                    field.push_back(c);
                }
            } else if (c == '"') {
                in_quotes = true;
            } else if (c == ',') {
                row.fields.push_back(std::move(field));
                field.clear();
            } else if (c == '\n') {
                ++line;
                done = true;
            } else if (c != '\r') {
                field.push_back(c);
            }
        }
        row.fields.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos &&
        trim(field).size() == field.size())
        return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace roofline::detail
