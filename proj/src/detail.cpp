#include "detail.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "roofline/errors.hpp"

namespace roofline::detail {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorCode::Io, "short write to '" + path + "'");
}

std::string_view trim(std::string_view text) {
    constexpr std::string_view ws = " \t\r\n\f\v";
    const auto first = text.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(ws);
    return text.substr(first, last - first + 1);
}

namespace {

std::string clean_numeric(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : trim(text)) {
        if (c != ',') out.push_back(c);
    }
    if (!out.empty() && out.front() == '+') out.erase(out.begin());
    return out;
}

[[noreturn]] void bad_number(std::string_view text, std::string_view what) {
    throw Error(ErrorCode::InvalidNumber,
                "'" + std::string(text) + "' is not a valid number for " + std::string(what));
}

}  // namespace

double parse_decimal(std::string_view text, std::string_view what, int decimal_shift) {
    std::string s = clean_numeric(text);
    if (s.empty()) bad_number(text, what);
    if (decimal_shift != 0) {
        int exponent = 0;
        const auto e = s.find_first_of("eE");
        if (e != std::string::npos) {
            const auto exp_text = std::string_view(s).substr(e + 1);
            auto [p, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
            if (ec != std::errc{} || p != exp_text.data() + exp_text.size()) bad_number(text, what);
            s.resize(e);
        }
        s += "e" + std::to_string(exponent + decimal_shift);
    }
    double value = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(value)) bad_number(text, what);
    return value;
}

std::uint64_t parse_counter(std::string_view text, std::string_view what) {
    std::string s = clean_numeric(text);
    if (const auto dot = s.find('.'); dot != std::string::npos) {
        if (s.find_first_not_of('0', dot + 1) != std::string::npos) bad_number(text, what);
        s.resize(dot);
    }
    if (s.empty()) bad_number(text, what);
    std::uint64_t value = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc::result_out_of_range)
        throw Error(ErrorCode::Overflow, std::string(what) + " '" + std::string(text) + "' exceeds 64 bits");
    if (ec != std::errc{} || p != s.data() + s.size()) bad_number(text, what);
    return value;
}

std::string format_double(double value) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, p);
}

nlohmann::ordered_json spec_json(const GpuSpec& spec) {
    nlohmann::ordered_json j;
    j["name"] = spec.name;
    j["vendor"] = std::string(to_string(spec.vendor));
    j["compute_units"] = spec.compute_units;
    j["schedulers_per_unit"] = spec.schedulers_per_unit;
    j["ipc"] = spec.ipc;
    j["frequency_ghz"] = spec.frequency_ghz;
    j["execution_group_size"] = spec.execution_group_size;
    j["theoretical_bandwidth_gbps"] = spec.theoretical_bandwidth_gbps;
    return j;
}

GpuSpec spec_from_json(const nlohmann::json& j) {
    static constexpr std::string_view fields[] = {
        "name", "vendor", "compute_units", "schedulers_per_unit", "ipc",
        "frequency_ghz", "execution_group_size", "theoretical_bandwidth_gbps"};
    if (!j.is_object()) throw Error(ErrorCode::InvalidSpec, "spec entry must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (auto f : fields) known = known || key == f;
        if (!known) throw Error(ErrorCode::InvalidSpec, "unknown field '" + key + "'");
    }
    for (auto f : fields) {
        if (!j.contains(f)) throw Error(ErrorCode::InvalidSpec, "missing field '" + std::string(f) + "'");
    }

    auto integer = [&](const char* key) {
        const auto& v = j.at(key);
        if (!v.is_number_integer()) throw Error(ErrorCode::InvalidSpec, std::string(key) + " must be an integer");
        const auto n = v.get<std::int64_t>();
        if (n <= 0 || n > INT32_MAX) throw Error(ErrorCode::InvalidSpec, std::string(key) + " must be positive");
        return static_cast<int>(n);
    };
    auto real = [&](const char* key) {
        const auto& v = j.at(key);
        if (!v.is_number()) throw Error(ErrorCode::InvalidSpec, std::string(key) + " must be a number");
        return v.get<double>();
    };

    GpuSpec spec;
    if (!j.at("name").is_string()) throw Error(ErrorCode::InvalidSpec, "name must be a string");
    spec.name = j.at("name").get<std::string>();
    const auto& vendor = j.at("vendor");
    auto parsed = vendor.is_string() ? parse_vendor(vendor.get<std::string>()) : std::nullopt;
    if (!parsed) throw Error(ErrorCode::InvalidSpec, "vendor must be \"AMD\" or \"NVIDIA\"");
    spec.vendor = *parsed;
    spec.compute_units = integer("compute_units");
    spec.schedulers_per_unit = integer("schedulers_per_unit");
    spec.ipc = integer("ipc");
    spec.frequency_ghz = real("frequency_ghz");
    spec.execution_group_size = integer("execution_group_size");
    spec.theoretical_bandwidth_gbps = real("theoretical_bandwidth_gbps");
    validate(spec);
    return spec;
}

}  // namespace roofline::detail
