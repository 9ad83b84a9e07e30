#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "roofline/hardware.hpp"
#include "roofline/ingest.hpp"
#include "roofline/model.hpp"
#include "roofline/render.hpp"

namespace roofline {

enum class InputFormat { Rocprof, Nvprof, ProfileJson };

struct InputFile {
    InputFormat format = InputFormat::Rocprof;
    std::string path;
};

// "rocprof:path", "nvprof:path" or "profile-json:path".
InputFile parse_input_arg(const std::string& arg);

struct RunConfig {
    std::string gpu;
    std::vector<InputFile> inputs;
    std::optional<std::string> bandwidth_log;
    StreamFunction bandwidth_function = StreamFunction::Copy;
    IntensityMode intensity_mode = IntensityMode::IntensityPerformance;
    double kb_factor = 1024.0;
    Aggregate aggregate = Aggregate::Off;
    std::optional<std::string> kernel;  // keep only this kernel when set
    std::optional<double> l1_gtxns;
    std::optional<double> l2_gtxns;
    std::optional<std::string> out_svg;
    std::optional<std::string> out_table;
    TableFormat table_format = TableFormat::Markdown;
    std::optional<std::string> out_model;
    std::string title;
};

// JSON object whose keys mirror the RunConfig field names. Relative paths
// resolve against the config file's directory.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir = "");

// Registry with the user spec file named by ROOFLINE_SPECS (or the explicit
// path) layered over the built-ins.
SpecRegistry load_registry(const std::optional<std::string>& spec_file);

// Every input parsed, normalized, aggregated and kernel-filtered, in input order.
std::vector<KernelProfile> load_profiles(const RunConfig& config);

RooflineModel build_from_config(const RunConfig& config, const SpecRegistry& registry,
                                std::vector<KernelProfile>* profiles_out = nullptr);

std::string render_specs(const SpecRegistry& registry);

// Entry point used by the executable. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace roofline
