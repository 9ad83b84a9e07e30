#include "roofline/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "detail.hpp"
#include "roofline/errors.hpp"

namespace roofline {

namespace fs = std::filesystem;

InputFile parse_input_arg(const std::string& arg) {
    const auto colon = arg.find(':');
    if (colon == std::string::npos)
        throw Error(ErrorCode::Config, "input '" + arg + "' must be <format>:<path>");
    const auto fmt = to_lower(arg.substr(0, colon));
    InputFile in;
    in.path = arg.substr(colon + 1);
    if (fmt == "rocprof") in.format = InputFormat::Rocprof;
    else if (fmt == "nvprof") in.format = InputFormat::Nvprof;
    else if (fmt == "profile-json" || fmt == "json") in.format = InputFormat::ProfileJson;
    else throw Error(ErrorCode::Config, "unknown input format '" + fmt + "' (rocprof, nvprof, profile-json)");
    if (in.path.empty()) throw Error(ErrorCode::Config, "input '" + arg + "' has an empty path");
    return in;
}

namespace {

std::string resolve(const std::string& base_dir, const std::string& path) {
    if (base_dir.empty() || fs::path(path).is_absolute()) return path;
    return (fs::path(base_dir) / path).lexically_normal().string();
}

double parse_kb(long long kb) {
    if (kb != 1024 && kb != 1000) throw Error(ErrorCode::Config, "kb factor must be 1024 or 1000");
    return static_cast<double>(kb);
}

// "md", "csv:out.csv", "table.md" -> (format, optional path)
std::pair<TableFormat, std::optional<std::string>> parse_table_target(const std::string& arg, TableFormat fallback) {
    if (auto f = parse_table_format(arg)) return {*f, std::nullopt};
    if (const auto colon = arg.find(':'); colon != std::string::npos) {
        if (auto f = parse_table_format(arg.substr(0, colon))) return {*f, arg.substr(colon + 1)};
    }
    const auto ext = to_lower(fs::path(arg).extension().string());
    if (ext == ".csv") return {TableFormat::Csv, arg};
    if (ext == ".md") return {TableFormat::Markdown, arg};
    if (ext == ".txt") return {TableFormat::Plain, arg};
    return {fallback, arg};
}

void write_output(const std::optional<std::string>& path, const std::string& text, std::ostream& out) {
    if (path && *path != "-")
        detail::write_text_file(*path, text);
    else
        out << text;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir) {
    static const std::set<std::string> known = {
        "gpu", "inputs", "bandwidth_log", "bandwidth_function", "intensity_mode", "kb_factor",
        "aggregate", "kernel", "l1_gtxns", "l2_gtxns", "out_svg", "out_table", "table_format",
        "out_model", "title"};
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::Config, std::string("malformed config JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::Config, "config must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw Error(ErrorCode::Config, "unknown config field '" + key + "'");

    auto str = [&](const char* key) -> std::optional<std::string> {
        if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
        if (!j.at(key).is_string()) throw Error(ErrorCode::Config, std::string(key) + " must be a string");
        return j.at(key).get<std::string>();
    };
    auto num = [&](const char* key) -> std::optional<double> {
        if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
        if (!j.at(key).is_number()) throw Error(ErrorCode::Config, std::string(key) + " must be a number");
        return j.at(key).get<double>();
    };

    RunConfig c;
    c.gpu = str("gpu").value_or("");
    if (j.contains("inputs")) {
        if (!j.at("inputs").is_array()) throw Error(ErrorCode::Config, "inputs must be an array");
        for (const auto& item : j.at("inputs")) {
            InputFile in;
            if (item.is_string()) {
                in = parse_input_arg(item.get<std::string>());
            } else if (item.is_object() && item.contains("format") && item.contains("path")) {
                in = parse_input_arg(item.at("format").get<std::string>() + ":" + item.at("path").get<std::string>());
            } else {
                throw Error(ErrorCode::Config, "inputs entries are \"fmt:path\" or {\"format\", \"path\"}");
            }
            in.path = resolve(base_dir, in.path);
            c.inputs.push_back(std::move(in));
        }
    }
    if (auto v = str("bandwidth_log")) c.bandwidth_log = resolve(base_dir, *v);
    if (auto v = str("bandwidth_function")) {
        auto fn = parse_stream_function(*v);
        if (!fn) throw Error(ErrorCode::Config, "unknown bandwidth_function '" + *v + "'");
        c.bandwidth_function = *fn;
    }
    if (auto v = str("intensity_mode")) {
        auto m = parse_intensity_mode(*v);
        if (!m) throw Error(ErrorCode::Config, "unknown intensity_mode '" + *v + "'");
        c.intensity_mode = *m;
    }
    if (auto v = num("kb_factor")) c.kb_factor = parse_kb(static_cast<long long>(*v));
    if (auto v = str("aggregate")) {
        auto a = parse_aggregate(*v);
        if (!a) throw Error(ErrorCode::Config, "aggregate must be off, sum or mean");
        c.aggregate = *a;
    }
    c.kernel = str("kernel");
    c.l1_gtxns = num("l1_gtxns");
    c.l2_gtxns = num("l2_gtxns");
    if (auto v = str("out_svg")) c.out_svg = resolve(base_dir, *v);
    if (auto v = str("out_model")) c.out_model = resolve(base_dir, *v);
    if (auto v = str("table_format")) {
        auto f = parse_table_format(*v);
        if (!f) throw Error(ErrorCode::Config, "unknown table_format '" + *v + "'");
        c.table_format = *f;
    }
    if (auto v = str("out_table")) {
        auto [fmt, path] = parse_table_target(*v, c.table_format);
        c.table_format = fmt;
        if (path) c.out_table = resolve(base_dir, *path);
    }
    c.title = str("title").value_or("");
    return c;
}

RunConfig load_run_config(const std::string& path) {
    const auto text = detail::read_text_file(path);
    try {
        return parse_run_config(text, fs::path(path).parent_path().string());
    } catch (const Error& e) {
        throw e.with_context(path);
    }
}

SpecRegistry load_registry(const std::optional<std::string>& spec_file) {
    std::optional<std::string> path = spec_file;
    if (!path) {
        if (const char* env = std::getenv("ROOFLINE_SPECS"); env && *env) path = env;
    }
    if (!path) return SpecRegistry::builtin();
    try {
        const auto user = load_spec_file(*path);
        return SpecRegistry::builtin().with_user_specs(user);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Io) throw;
        throw e.with_context(*path);
    }
}

std::vector<KernelProfile> load_profiles(const RunConfig& config) {
    if (config.inputs.empty()) throw Error(ErrorCode::Config, "at least one --input is required");
    NormalizeOptions opts;
    opts.kb_factor = config.kb_factor;

    std::vector<KernelProfile> all;
    for (const auto& in : config.inputs) {
        const auto text = detail::read_text_file(in.path);
        try {
            if (in.format == InputFormat::ProfileJson) {
                auto ps = parse_profile_json(text);
                all.insert(all.end(), ps.begin(), ps.end());
            } else {
                const auto records = in.format == InputFormat::Rocprof ? parse_rocprof_csv(text) : parse_nvprof_csv(text);
                for (const auto& r : records) all.push_back(normalize(r, opts));
            }
        } catch (const Error& e) {
            throw e.with_context(in.path);
        }
    }
    if (config.kernel) {
        std::erase_if(all, [&](const KernelProfile& p) { return p.kernel_name != *config.kernel; });
        if (all.empty()) throw Error(ErrorCode::MissingMetric, "no profile for kernel '" + *config.kernel + "'");
    }
    return aggregate(all, config.aggregate);
}

RooflineModel build_from_config(const RunConfig& config, const SpecRegistry& registry,
                                std::vector<KernelProfile>* profiles_out) {
    if (config.gpu.empty()) throw Error(ErrorCode::Config, "--gpu is required");
    const auto& spec = registry.lookup(config.gpu);
    auto profiles = load_profiles(config);

    std::optional<BandwidthMeasurement> measured;
    if (config.bandwidth_log) {
        const auto text = detail::read_text_file(*config.bandwidth_log);
        try {
            const auto all = parse_babelstream_log(text);
            measured = select_bandwidth(all, config.bandwidth_function);
        } catch (const Error& e) {
            throw e.with_context(*config.bandwidth_log);
        }
    }
    auto c = ceilings(spec, measured, config.intensity_mode == IntensityMode::PerTransaction);
    c.l1_gtxns = config.l1_gtxns;
    c.l2_gtxns = config.l2_gtxns;
    auto model = build_model(spec, c, profiles, config.intensity_mode);
    if (profiles_out) *profiles_out = std::move(profiles);
    return model;
}

std::string render_specs(const SpecRegistry& registry) {
    std::ostringstream s;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-12s %-7s %6s %6s %4s %8s %6s %10s %10s\n", "name", "vendor", "CU/SM",
                  "sched", "IPC", "GHz", "group", "peak GIPS", "BW GB/s");
    s << buf;
    for (const auto& g : registry.specs()) {
        std::snprintf(buf, sizeof buf, "%-12s %-7s %6d %6d %4d %8.3f %6d %10.2f %10.1f\n", g.name.c_str(),
                      std::string(to_string(g.vendor)).c_str(), g.compute_units, g.schedulers_per_unit, g.ipc,
                      g.frequency_ghz, g.execution_group_size, peak_gips(g), g.theoretical_bandwidth_gbps);
        s << buf;
    }
    return s.str();
}

// ---------------------------------------------------------------------------

namespace {

struct Flags {
    std::vector<std::string> configs;
    std::string gpu;
    std::vector<std::string> inputs;
    std::string bandwidth_log;
    std::string bandwidth_fn;
    std::string mode;
    long long kb = 0;
    std::string aggregate;
    std::string kernel;
    std::string out_svg;
    std::string out_table;
    std::string table_format;
    std::string out_model;
    std::string specs;
    std::string title;
    std::string model_json;
    std::vector<std::string> columns;
    int width = 800;
    int height = 600;
};

void add_pipeline_flags(CLI::App* cmd, Flags& f, bool multi_config) {
    if (multi_config)
        cmd->add_option("--config", f.configs, "Run config JSON (one per GPU column, repeatable)");
    else
        cmd->add_option("--config", f.configs, "Run config JSON")->expected(0, 1);
    cmd->add_option("--gpu", f.gpu, "GPU name (v100, mi60, mi100 or a user spec)");
    cmd->add_option("--input", f.inputs, "<rocprof|nvprof|profile-json>:<path>, repeatable");
    cmd->add_option("--bandwidth-log", f.bandwidth_log, "BabelStream output used for the memory ceiling");
    cmd->add_option("--bandwidth-fn", f.bandwidth_fn, "BabelStream function (Copy, Mul, Add, Triad, Dot)");
    cmd->add_option("--mode", f.mode, "Intensity: eq2 | perbyte | pertxn");
    cmd->add_option("--kb", f.kb, "Bytes per profiler KB: 1024 or 1000");
    cmd->add_option("--aggregate", f.aggregate, "Merge repeated kernels: off | sum | mean");
    cmd->add_option("--kernel", f.kernel, "Only use this kernel");
    cmd->add_option("--out-svg", f.out_svg, "Write the roofline plot here");
    cmd->add_option("--out-table", f.out_table, "Table target: <fmt>, <fmt>:<path> or <path>");
    cmd->add_option("--table-format", f.table_format, "markdown | csv | plain");
    cmd->add_option("--out-model", f.out_model, "Write the model JSON here");
    cmd->add_option("--specs", f.specs, "User GPU spec file (overrides ROOFLINE_SPECS)");
    cmd->add_option("--title", f.title, "Plot title");
}

// Flags win over config file values.
RunConfig apply_flags(RunConfig c, const Flags& f, const CLI::App* cmd) {
    auto given = [&](const char* name) { return cmd->count(name) > 0; };
    if (given("--gpu")) c.gpu = f.gpu;
    if (given("--input")) {
        c.inputs.clear();
        for (const auto& a : f.inputs) c.inputs.push_back(parse_input_arg(a));
    }
    if (given("--bandwidth-log")) c.bandwidth_log = f.bandwidth_log;
    if (given("--bandwidth-fn")) {
        auto fn = parse_stream_function(f.bandwidth_fn);
        if (!fn) throw Error(ErrorCode::Config, "unknown bandwidth function '" + f.bandwidth_fn + "'");
        c.bandwidth_function = *fn;
    }
    if (given("--mode")) {
        auto m = parse_intensity_mode(f.mode);
        if (!m) throw Error(ErrorCode::Config, "unknown mode '" + f.mode + "' (eq2, perbyte, pertxn)");
        c.intensity_mode = *m;
    }
    if (given("--kb")) c.kb_factor = parse_kb(f.kb);
    if (given("--aggregate")) {
        auto a = parse_aggregate(f.aggregate);
        if (!a) throw Error(ErrorCode::Config, "aggregate must be off, sum or mean");
        c.aggregate = *a;
    }
    if (given("--kernel")) c.kernel = f.kernel;
    if (given("--out-svg")) c.out_svg = f.out_svg;
    if (given("--out-model")) c.out_model = f.out_model;
    if (given("--table-format")) {
        auto fmt = parse_table_format(f.table_format);
        if (!fmt) throw Error(ErrorCode::Config, "unknown table format '" + f.table_format + "'");
        c.table_format = *fmt;
    }
    if (given("--out-table")) {
        auto [fmt, path] = parse_table_target(f.out_table, c.table_format);
        c.table_format = fmt;
        c.out_table = path;
        if (!path) c.out_table = "-";
    }
    if (given("--title")) c.title = f.title;
    return c;
}

RunConfig base_config(const Flags& f, const CLI::App* cmd) {
    RunConfig c = f.configs.empty() ? RunConfig{} : load_run_config(f.configs.front());
    return apply_flags(std::move(c), f, cmd);
}

std::optional<std::string> specs_path(const Flags& f) {
    if (f.specs.empty()) return std::nullopt;
    return f.specs;
}

PlotOptions plot_options(const RunConfig& c, const Flags& f) {
    PlotOptions o;
    o.width_px = f.width;
    o.height_px = f.height;
    o.title = c.title;
    return o;
}

std::map<std::string, KernelProfile> first_profile(const RooflineModel& m, const std::vector<KernelProfile>& ps) {
    std::map<std::string, KernelProfile> by_gpu;
    if (!ps.empty()) by_gpu.emplace(m.gpu.name, ps.front());
    return by_gpu;
}

int cmd_model_or_plot(const Flags& f, const CLI::App* cmd, bool plot, std::ostream& out) {
    const RunConfig c = base_config(f, cmd);
    RooflineModel model;
    std::vector<KernelProfile> profiles;
    if (plot && !f.model_json.empty()) {
        model = model_from_json(detail::read_text_file(f.model_json));
    } else {
        model = build_from_config(c, load_registry(specs_path(f)), &profiles);
    }

    // Render everything before writing anything so a failure leaves no partial outputs.
    const std::string model_text = model_to_json(model);
    std::optional<std::string> svg_text;
    if (plot || c.out_svg) svg_text = render_svg(model, plot_options(c, f));
    std::optional<std::string> table_text;
    if (c.out_table) {
        std::vector<RooflineModel> models{model};
        table_text = render_table(compare(models, first_profile(model, profiles)), c.table_format);
    }

    if (plot) {
        write_output(c.out_svg, *svg_text, out);
        if (c.out_model) write_output(c.out_model, model_text, out);
    } else {
        write_output(c.out_model, model_text, out);
        if (svg_text) write_output(c.out_svg, *svg_text, out);
    }
    if (table_text) write_output(c.out_table, *table_text, out);
    return 0;
}

// Placeholder column for a GPU whose inputs failed: spec rows only.
RooflineModel ceilings_only(const GpuSpec& spec, IntensityMode mode) {
    if (mode == IntensityMode::PerTransaction && spec.vendor == Vendor::AMD) mode = IntensityMode::IntensityPerformance;
    return build_model(spec, ceilings(spec, std::nullopt, mode == IntensityMode::PerTransaction), {}, mode);
}

int cmd_compare(const Flags& f, const CLI::App* cmd, std::ostream& out, std::ostream& err) {
    std::vector<RunConfig> columns;
    for (const auto& path : f.configs) columns.push_back(apply_flags(load_run_config(path), f, cmd));
    for (const auto& col : f.columns) {
        // gpu=fmt:path[,fmt:path...]
        const auto eq = col.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::Config, "--column expects <gpu>=<fmt>:<path>");
        RunConfig c = apply_flags(RunConfig{}, f, cmd);
        c.gpu = col.substr(0, eq);
        c.inputs.clear();
        std::stringstream rest(col.substr(eq + 1));
        for (std::string item; std::getline(rest, item, ',');) c.inputs.push_back(parse_input_arg(item));
        columns.push_back(std::move(c));
    }
    if (columns.empty() && !f.gpu.empty()) columns.push_back(base_config(f, cmd));
    if (columns.empty()) throw Error(ErrorCode::Config, "compare needs --config or --column entries");

    const auto registry = load_registry(specs_path(f));
    std::vector<RooflineModel> models;
    std::map<std::string, KernelProfile> profiles_by_gpu;
    int failures = 0;
    for (const auto& c : columns) {
        const GpuSpec* spec = registry.find(c.gpu);
        if (!spec) {
            ++failures;
            err << "warning: " << Error(ErrorCode::UnknownGpu, "unknown GPU '" + c.gpu + "'").what()
                << "; column skipped\n";
            continue;
        }
        try {
            std::vector<KernelProfile> ps;
            models.push_back(build_from_config(c, registry, &ps));
            if (!ps.empty()) profiles_by_gpu.emplace(spec->name, ps.front());
        } catch (const Error& e) {
            ++failures;
            err << "warning: " << spec->name << ": " << e.what() << "; column shows n/a\n";
            models.push_back(ceilings_only(*spec, c.intensity_mode));
        }
    }
    if (models.empty()) throw Error(ErrorCode::Config, "no GPU column could be built");

    const RunConfig shared = apply_flags(RunConfig{}, f, cmd);
    const TableFormat fmt = cmd->count("--out-table") || cmd->count("--table-format") ? shared.table_format
                                                                                       : columns.front().table_format;
    const auto target = cmd->count("--out-table") ? shared.out_table : columns.front().out_table;
    write_output(target, render_table(compare(models, profiles_by_gpu), fmt), out);
    if (failures) err << "warning: " << failures << " GPU column(s) incomplete\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Instruction roofline models from GPU profiler exports"};
    app.name("roofline");
    app.require_subcommand(1);
    Flags f;

    auto* specs = app.add_subcommand("specs", "List GPU hardware specs");
    specs->add_option("--specs", f.specs, "User GPU spec file (overrides ROOFLINE_SPECS)");

    auto* model = app.add_subcommand("model", "Build a roofline model and write it as JSON");
    add_pipeline_flags(model, f, false);

    auto* plot = app.add_subcommand("plot", "Render a roofline model as SVG");
    add_pipeline_flags(plot, f, false);
    plot->add_option("--model", f.model_json, "Plot an existing model JSON instead of building one");
    plot->add_option("--width", f.width, "Width in pixels");
    plot->add_option("--height", f.height, "Height in pixels");

    auto* cmp = app.add_subcommand("compare", "Tabulate several GPUs side by side");
    add_pipeline_flags(cmp, f, true);
    cmp->add_option("--column", f.columns, "<gpu>=<fmt>:<path>[,<fmt>:<path>], repeatable");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (specs->parsed()) {
            out << render_specs(load_registry(specs_path(f)));
            return 0;
        }
        if (model->parsed()) return cmd_model_or_plot(f, model, false, out);
        if (plot->parsed()) return cmd_model_or_plot(f, plot, true, out);
        if (cmp->parsed()) return cmd_compare(f, cmp, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace roofline
