#include "roofline/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>

#include <json.hpp>

#include "csv.hpp"
#include "detail.hpp"
#include "roofline/errors.hpp"

namespace roofline {

namespace {

using detail::trim;

std::string at_line(int line) {
    return "line " + std::to_string(line);
}

std::vector<std::string> trimmed_header(const detail::CsvRow& row) {
    std::vector<std::string> header;
    std::set<std::string> seen;
    for (const auto& f : row.fields) {
        std::string name(trim(f));
        if (!seen.insert(name).second)
            throw Error(ErrorCode::MalformedRow, at_line(row.line) + ": duplicate column '" + name + "'");
        header.push_back(std::move(name));
    }
    return header;
}

std::optional<std::size_t> column(const std::vector<std::string>& header, std::string_view name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
}

void check_width(const detail::CsvRow& row, std::size_t expected) {
    if (row.fields.size() != expected)
        throw Error(ErrorCode::MalformedRow, at_line(row.line) + ": expected " + std::to_string(expected) +
                                                 " fields, found " + std::to_string(row.fields.size()));
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, std::string_view what) {
    std::uint64_t out = 0;
    if (__builtin_add_overflow(a, b, &out))
        throw Error(ErrorCode::Overflow, std::string(what) + " overflows 64 bits");
    return out;
}

const std::string* lookup(const RawKernelRecord& r, const char* key) {
    auto it = r.metric_values.find(key);
    return it == r.metric_values.end() ? nullptr : &it->second;
}

std::optional<std::uint64_t> counter(const RawKernelRecord& r, const char* key) {
    if (const auto* v = lookup(r, key)) return detail::parse_counter(*v, key);
    return std::nullopt;
}

// Sum of whichever of the two counters are present; nullopt if neither.
std::optional<std::uint64_t> counter_pair(const RawKernelRecord& r, const char* a, const char* b) {
    auto x = counter(r, a);
    auto y = counter(r, b);
    if (!x && !y) return std::nullopt;
    return checked_add(x.value_or(0), y.value_or(0), a);
}

// "12.7ms" -> 0.0127. A bare number is seconds.
double parse_duration_seconds(std::string_view text) {
    auto t = trim(text);
    std::size_t end = t.size();
    while (end > 0 && std::isalpha(static_cast<unsigned char>(t[end - 1]))) --end;
    const auto unit = to_lower(t.substr(end));
    int shift = 0;
    if (unit == "ns") shift = -9;
    else if (unit == "us") shift = -6;
    else if (unit == "ms") shift = -3;
    else if (unit.empty() || unit == "s") shift = 0;
    else throw Error(ErrorCode::InvalidNumber, "unknown duration unit '" + unit + "'");
    return detail::parse_decimal(t.substr(0, end), "duration", shift);
}

void normalize_rocprof(const RawKernelRecord& r, const NormalizeOptions& opts, KernelProfile& p) {
    p.vendor = Vendor::AMD;
    if (const auto* d = lookup(r, "DurationNs")) {
        p.runtime_s = detail::parse_decimal(*d, "DurationNs", -9);
    } else if (lookup(r, "BeginNs") && lookup(r, "EndNs")) {
        const auto begin = *counter(r, "BeginNs");
        const auto end = *counter(r, "EndNs");
        if (end <= begin)
            throw Error(ErrorCode::NonPositiveRuntime,
                        "kernel '" + r.kernel_name + "' at " + at_line(r.line) + ": EndNs <= BeginNs");
        p.runtime_s = detail::parse_decimal(std::to_string(end - begin), "duration", -9);
    } else {
        throw Error(ErrorCode::MissingDuration,
                    "kernel '" + r.kernel_name + "' at " + at_line(r.line) + " has no DurationNs or BeginNs/EndNs");
    }

    p.valu_instructions = counter(r, "SQ_INSTS_VALU");
    p.salu_instructions = counter(r, "SQ_INSTS_SALU");
    if (!p.valu_instructions && !p.salu_instructions)
        throw Error(ErrorCode::NoInstructionMetric,
                    "kernel '" + r.kernel_name + "' at " + at_line(r.line) + " has neither SQ_INSTS_VALU nor SQ_INSTS_SALU");

    if (const auto* v = lookup(r, "FETCH_SIZE")) p.bytes_read = detail::parse_decimal(*v, "FETCH_SIZE") * opts.kb_factor;
    if (const auto* v = lookup(r, "WRITE_SIZE")) p.bytes_written = detail::parse_decimal(*v, "WRITE_SIZE") * opts.kb_factor;
}

void normalize_nvprof(const RawKernelRecord& r, const NormalizeOptions& opts, KernelProfile& p) {
    p.vendor = Vendor::NVIDIA;
    const auto* d = lookup(r, "duration");
    if (!d)
        throw Error(ErrorCode::MissingDuration,
                    "kernel '" + r.kernel_name + "' at " + at_line(r.line) + " has no duration metric");
    p.runtime_s = parse_duration_seconds(*d);

    p.executed_instructions = counter(r, "inst_executed");
    if (!p.executed_instructions)
        throw Error(ErrorCode::NoInstructionMetric,
                    "kernel '" + r.kernel_name + "' at " + at_line(r.line) + " has no inst_executed metric");

    const auto txn_bytes = static_cast<double>(opts.transaction_bytes);
    const auto reads = counter(r, "dram_read_transactions");
    const auto writes = counter(r, "dram_write_transactions");
    if (reads) p.bytes_read = static_cast<double>(*reads) * txn_bytes;
    if (writes) p.bytes_written = static_cast<double>(*writes) * txn_bytes;
    p.transactions = counter_pair(r, "dram_read_transactions", "dram_write_transactions");
    p.l1_transactions = counter_pair(r, "gld_transactions", "gst_transactions");
    p.l2_transactions = counter_pair(r, "l2_read_transactions", "l2_write_transactions");
}

bool is_nvprof_preamble(std::string_view line) {
    return trim(line).starts_with("==");
}

}  // namespace

std::optional<Aggregate> parse_aggregate(std::string_view text) {
    const auto t = to_lower(text);
    if (t == "off" || t == "none") return Aggregate::Off;
    if (t == "sum") return Aggregate::Sum;
    if (t == "mean") return Aggregate::Mean;
    return std::nullopt;
}

std::vector<RawKernelRecord> parse_rocprof_csv(std::string_view text) {
    const auto rows = detail::read_csv(text);
    if (rows.empty()) throw Error(ErrorCode::EmptyInput, "rocprof CSV is empty");

    const auto header = trimmed_header(rows.front());
    const auto name_col = column(header, "KernelName");
    if (!name_col) throw Error(ErrorCode::MissingColumn, "KernelName");
    if (!column(header, "DurationNs") && !(column(header, "BeginNs") && column(header, "EndNs")))
        throw Error(ErrorCode::MissingColumn, "DurationNs");

    std::vector<RawKernelRecord> out;
    out.reserve(rows.size() - 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        check_width(row, header.size());
        RawKernelRecord rec;
        rec.source_format = SourceFormat::RocprofCsv;
        rec.line = row.line;
        rec.kernel_name = row.fields[*name_col];
        if (trim(rec.kernel_name).empty())
            throw Error(ErrorCode::MalformedRow, at_line(row.line) + ": empty KernelName");
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c == *name_col || trim(row.fields[c]).empty()) continue;
            rec.metric_values.emplace(header[c], row.fields[c]);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<RawKernelRecord> parse_nvprof_csv(std::string_view text) {
    const auto rows = detail::read_csv(text, &is_nvprof_preamble);
    if (rows.empty()) throw Error(ErrorCode::EmptyInput, "nvprof CSV is empty");

    const auto header = trimmed_header(rows.front());
    const auto kernel_col = column(header, "Kernel");
    if (!kernel_col) throw Error(ErrorCode::MissingColumn, "Kernel");
    const auto metric_col = column(header, "Metric Name");
    if (!metric_col) throw Error(ErrorCode::MissingColumn, "Metric Name");
    auto value_col = column(header, "Avg");
    if (!value_col) value_col = column(header, "Max");
    if (!value_col) value_col = column(header, "Min");
    if (!value_col) throw Error(ErrorCode::MissingColumn, "Avg");

    std::vector<RawKernelRecord> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        check_width(row, header.size());
        const auto& kernel = row.fields[*kernel_col];
        const std::string metric(trim(row.fields[*metric_col]));
        if (trim(kernel).empty() || metric.empty())
            throw Error(ErrorCode::MalformedRow, at_line(row.line) + ": empty Kernel or Metric Name");

        auto it = std::find_if(out.begin(), out.end(),
                               [&](const RawKernelRecord& r) { return r.kernel_name == kernel; });
        if (it == out.end()) {
            RawKernelRecord rec;
            rec.kernel_name = kernel;
            rec.source_format = SourceFormat::NvprofCsv;
            rec.line = row.line;
            out.push_back(std::move(rec));
            it = std::prev(out.end());
        }
        const auto& value = row.fields[*value_col];
        if (trim(value).empty()) continue;
        if (!it->metric_values.emplace(metric, value).second)
            throw Error(ErrorCode::MalformedRow,
                        at_line(row.line) + ": duplicate metric '" + metric + "' for kernel '" + kernel + "'");
    }
    return out;
}

std::string serialize_rocprof_csv(std::span<const RawKernelRecord> records) {
    std::set<std::string> keys;
    for (const auto& r : records)
        for (const auto& [k, _] : r.metric_values) keys.insert(k);

    std::string out = "KernelName";
    for (const auto& k : keys) out += "," + detail::csv_escape(k);
    out += "\n";
    for (const auto& r : records) {
        out += detail::csv_escape(r.kernel_name);
        for (const auto& k : keys) {
            out += ",";
            if (auto it = r.metric_values.find(k); it != r.metric_values.end())
                out += detail::csv_escape(it->second);
        }
        out += "\n";
    }
    return out;
}

std::vector<BandwidthMeasurement> parse_babelstream_log(std::string_view text) {
    enum class Unit { MB, GB, MiB, GiB };
    auto unit_of = [](std::string_view token) -> std::optional<Unit> {
        const auto t = to_lower(token);
        if (t.starts_with("mbytes") || t.starts_with("max_mbytes")) return Unit::MB;
        if (t.starts_with("gbytes") || t.starts_with("max_gbytes")) return Unit::GB;
        if (t.starts_with("mibytes") || t.starts_with("max_mibytes")) return Unit::MiB;
        if (t.starts_with("gibytes") || t.starts_with("max_gibytes")) return Unit::GiB;
        return std::nullopt;
    };
    auto to_gbps = [](std::string_view value, Unit unit) {
        switch (unit) {
            case Unit::MB: return detail::parse_decimal(value, "bandwidth", -3);
            case Unit::GB: return detail::parse_decimal(value, "bandwidth");
            case Unit::MiB: return detail::parse_decimal(value, "bandwidth") * 1048576.0 / 1e9;
            case Unit::GiB: return detail::parse_decimal(value, "bandwidth") * 1073741824.0 / 1e9;
        }
        return 0.0;
    };

    std::vector<BandwidthMeasurement> out;
    Unit unit = Unit::MB;
    std::optional<std::size_t> csv_value_col;  // set once a --csv header is seen
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        const auto raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        const auto line = trim(raw);
        if (line.empty()) continue;

        std::vector<std::string_view> tokens;
        const bool csv = line.find(',') != std::string_view::npos;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t stop = csv ? line.find(',', start) : line.find_first_of(" \t", start);
            if (stop == std::string_view::npos) stop = line.size();
            auto tok = trim(line.substr(start, stop - start));
            if (csv || !tok.empty()) tokens.push_back(tok);
            start = stop + 1;
        }
        if (tokens.size() < 2) continue;

        if (to_lower(tokens[0]) == "function") {
            csv_value_col.reset();
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                if (auto u = unit_of(tokens[i])) {
                    unit = *u;
                    if (csv) csv_value_col = i;
                    break;
                }
            }
            continue;
        }

        const auto fn = parse_stream_function(tokens[0]);
        if (!fn) continue;
        const std::size_t value_col = csv ? csv_value_col.value_or(1) : 1;
        if (value_col >= tokens.size()) continue;
        double gbps = 0.0;
        try {
            gbps = to_gbps(tokens[value_col], unit);
        } catch (const Error&) {
            continue;  // prose line that merely starts with a function name
        }
        if (!(gbps > 0.0))
            throw Error(ErrorCode::InvalidNumber, at_line(line_no) + ": non-positive bandwidth");
        out.push_back({*fn, gbps, std::string(line), line_no});
    }
    if (out.empty()) throw Error(ErrorCode::NoFunctionsFound, "no Copy/Mul/Add/Triad/Dot rows in bandwidth log");
    return out;
}

BandwidthMeasurement select_bandwidth(std::span<const BandwidthMeasurement> measurements, StreamFunction fn) {
    for (const auto& m : measurements)
        if (m.function == fn) return m;
    throw Error(ErrorCode::FunctionNotFound,
                "bandwidth log has no " + std::string(to_string(fn)) + " row");
}

KernelProfile normalize(const RawKernelRecord& record, const NormalizeOptions& opts) {
    if (!(opts.kb_factor > 0.0) || opts.transaction_bytes <= 0)
        throw Error(ErrorCode::InvalidOptions, "kb_factor and transaction_bytes must be positive");
    KernelProfile p;
    p.kernel_name = record.kernel_name;
    if (record.source_format == SourceFormat::RocprofCsv)
        normalize_rocprof(record, opts, p);
    else
        normalize_nvprof(record, opts, p);
    if (!(p.runtime_s > 0.0))
        throw Error(ErrorCode::NonPositiveRuntime,
                    "kernel '" + record.kernel_name + "' at " + at_line(record.line) + " has non-positive runtime");
    return p;
}

void validate(const KernelProfile& p) {
    auto fail = [&](const std::string& what) {
        throw Error(ErrorCode::InvalidProfile, "profile '" + p.kernel_name + "': " + what);
    };
    if (p.kernel_name.empty()) fail("kernel_name must not be empty");
    if (!(p.runtime_s > 0.0))
        throw Error(ErrorCode::NonPositiveRuntime, "profile '" + p.kernel_name + "': runtime_s must be positive");
    for (const auto& b : {p.bytes_read, p.bytes_written})
        if (b && !(*b >= 0.0 && *b < std::numeric_limits<double>::infinity())) fail("byte counts must be finite and non-negative");
    if (p.vendor == Vendor::AMD) {
        if (p.executed_instructions) fail("AMD profiles carry VALU/SALU counts, not executed_instructions");
        if (!p.valu_instructions && !p.salu_instructions) fail("AMD profiles need valu_instructions or salu_instructions");
        if (p.transactions || p.l1_transactions || p.l2_transactions) fail("AMD profiles cannot carry transaction counts");
    } else {
        if (p.valu_instructions || p.salu_instructions) fail("NVIDIA profiles carry executed_instructions, not VALU/SALU");
        if (!p.executed_instructions) fail("NVIDIA profiles need executed_instructions");
    }
}

std::vector<KernelProfile> aggregate(std::span<const KernelProfile> profiles, Aggregate mode) {
    if (mode == Aggregate::Off) return {profiles.begin(), profiles.end()};

    struct Group {
        KernelProfile sum;
        std::uint64_t count = 0;
    };
    std::vector<Group> groups;
    auto add_opt = [](auto& into, const auto& from, const char* what) {
        if (!from) return;
        using T = std::decay_t<decltype(*from)>;
        if constexpr (std::is_same_v<T, double>)
            into = into.value_or(0.0) + *from;
        else
            into = checked_add(into.value_or(0), *from, what);
    };

    for (const auto& p : profiles) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
            return g.sum.kernel_name == p.kernel_name && g.sum.vendor == p.vendor;
        });
        if (it == groups.end()) {
            groups.push_back({p, 1});
            continue;
        }
        auto& s = it->sum;
        s.runtime_s += p.runtime_s;
        add_opt(s.bytes_read, p.bytes_read, "bytes_read");
        add_opt(s.bytes_written, p.bytes_written, "bytes_written");
        add_opt(s.valu_instructions, p.valu_instructions, "valu_instructions");
        add_opt(s.salu_instructions, p.salu_instructions, "salu_instructions");
        add_opt(s.executed_instructions, p.executed_instructions, "executed_instructions");
        add_opt(s.transactions, p.transactions, "transactions");
        add_opt(s.l1_transactions, p.l1_transactions, "l1_transactions");
        add_opt(s.l2_transactions, p.l2_transactions, "l2_transactions");
        ++it->count;
    }

    std::vector<KernelProfile> out;
    out.reserve(groups.size());
    for (auto& g : groups) {
        if (mode == Aggregate::Mean && g.count > 1) {
            const auto n = static_cast<double>(g.count);
            auto& s = g.sum;
            auto mean_counter = [&](std::optional<std::uint64_t>& c) {
                if (c) *c = (*c / g.count) + ((*c % g.count) * 2 >= g.count ? 1 : 0);
            };
            s.runtime_s /= n;
            if (s.bytes_read) *s.bytes_read /= n;
            if (s.bytes_written) *s.bytes_written /= n;
            mean_counter(s.valu_instructions);
            mean_counter(s.salu_instructions);
            mean_counter(s.executed_instructions);
            mean_counter(s.transactions);
            mean_counter(s.l1_transactions);
            mean_counter(s.l2_transactions);
        }
        out.push_back(std::move(g.sum));
    }
    return out;
}

namespace {

constexpr std::string_view kProfileFields[] = {
    "kernel_name", "vendor", "runtime_s", "bytes_read", "bytes_written",
    "valu_instructions", "salu_instructions", "executed_instructions",
    "transactions", "l1_transactions", "l2_transactions"};

KernelProfile profile_from_json(const nlohmann::json& j, std::size_t index) {
    const std::string where = "profile #" + std::to_string(index);
    auto fail = [&](const std::string& what) { throw Error(ErrorCode::InvalidProfile, where + ": " + what); };
    if (!j.is_object()) fail("must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (std::find(std::begin(kProfileFields), std::end(kProfileFields), key) == std::end(kProfileFields))
            fail("unknown field '" + key + "'");
    }
    auto present = [&](const char* key) { return j.contains(key) && !j.at(key).is_null(); };
    auto real = [&](const char* key) -> std::optional<double> {
        if (!present(key)) return std::nullopt;
        if (!j.at(key).is_number()) fail(std::string(key) + " must be a number");
        return j.at(key).get<double>();
    };
    auto count = [&](const char* key) -> std::optional<std::uint64_t> {
        if (!present(key)) return std::nullopt;
        const auto& v = j.at(key);
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer()) fail(std::string(key) + " must be non-negative");
        fail(std::string(key) + " must be an integer");
        return std::nullopt;
    };

    KernelProfile p;
    if (!present("kernel_name") || !j.at("kernel_name").is_string()) fail("kernel_name must be a string");
    p.kernel_name = j.at("kernel_name").get<std::string>();
    auto vendor = present("vendor") && j.at("vendor").is_string()
                      ? parse_vendor(j.at("vendor").get<std::string>())
                      : std::nullopt;
    if (!vendor) fail("vendor must be \"AMD\" or \"NVIDIA\"");
    p.vendor = *vendor;
    auto runtime = real("runtime_s");
    if (!runtime) fail("runtime_s is required");
    p.runtime_s = *runtime;
    p.bytes_read = real("bytes_read");
    p.bytes_written = real("bytes_written");
    p.valu_instructions = count("valu_instructions");
    p.salu_instructions = count("salu_instructions");
    p.executed_instructions = count("executed_instructions");
    p.transactions = count("transactions");
    p.l1_transactions = count("l1_transactions");
    p.l2_transactions = count("l2_transactions");
    validate(p);
    return p;
}

}  // namespace

std::vector<KernelProfile> parse_profile_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidProfile, std::string("malformed profile JSON: ") + e.what());
    }
    if (!doc.is_array()) throw Error(ErrorCode::InvalidProfile, "profile JSON must be an array");
    std::vector<KernelProfile> out;
    out.reserve(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) out.push_back(profile_from_json(doc[i], i));
    return out;
}

std::string profiles_to_json(std::span<const KernelProfile> profiles) {
    auto doc = nlohmann::ordered_json::array();
    for (const auto& p : profiles) {
        nlohmann::ordered_json j;
        j["kernel_name"] = p.kernel_name;
        j["vendor"] = std::string(to_string(p.vendor));
        j["runtime_s"] = p.runtime_s;
        auto put = [&](const char* key, const auto& v) {
            if (v) j[key] = *v;
        };
        put("bytes_read", p.bytes_read);
        put("bytes_written", p.bytes_written);
        put("valu_instructions", p.valu_instructions);
        put("salu_instructions", p.salu_instructions);
        put("executed_instructions", p.executed_instructions);
        put("transactions", p.transactions);
        put("l1_transactions", p.l1_transactions);
        put("l2_transactions", p.l2_transactions);
        doc.push_back(std::move(j));
    }
    return doc.dump(2);
}

}  // namespace roofline
