#include "mppsoc/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "mppsoc/config.hpp"
#include "mppsoc/rules.hpp"
#include "mppsoc/simulator.hpp"
#include "mppsoc/vhdl_rewriter.hpp"

namespace mppsoc::cli {

namespace fs = std::filesystem;

namespace {

// Failure carrying its exit code; `where` is a file:line prefix or empty.
struct Failure {
    int code;
    std::string message;
};

constexpr std::string_view kStateDir = ".mppsoc";

struct Options {
    std::string config_path;
    fs::path out_dir = "out";
    std::optional<fs::path> templates;
    std::string app = "reduce";
    std::optional<std::string> values;
    std::optional<fs::path> cost_model;
    std::string report_format = "text";
    std::optional<fs::path> manifest;
    std::optional<fs::path> edges;
    bool force_report_only = false;
};

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Failure{kExitIo, "cannot read " + path.string()};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const fs::path& path, const std::string& text)
{
    std::error_code ec;
    if (path.has_parent_path())
        fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    if (!out)
        throw Failure{kExitIo, "cannot write " + path.string()};
}

// Messages of line-oriented errors start with "line N: "; re-anchor them to the file.
std::string at_file(const std::string& path, const std::string& message)
{
    if (message.starts_with("line ")) {
        const auto colon = message.find(": ");
        if (colon != std::string::npos)
            return path + ":" + message.substr(5, colon - 5) + ": " + message.substr(colon + 2);
    }
    return path + ": " + message;
}

MppSoCConfig load_config(const std::string& path)
{
    const std::string text = read_text(path);
    try {
        return parse_config(text);
    } catch (const ConfigError& e) {
        throw Failure{kExitInvalidConfig, at_file(path, e.what())};
    }
}

// `a..b` (inclusive), a comma list, or `@FILE` of whitespace separated integers.
std::vector<std::int32_t> parse_values(const std::string& arg)
{
    std::string text = arg;
    if (arg.starts_with("@"))
        text = read_text(arg.substr(1));

    const auto parse_one = [&](std::string_view tok) {
        std::int64_t v = 0;
        try {
            std::size_t used = 0;
            v = std::stoll(std::string(tok), &used, 0);
            if (used != tok.size())
                throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw Failure{kExitIo, "bad value '" + std::string(tok) + "' in --values"};
        }
        if (v < INT32_MIN || v > INT32_MAX)
            throw Failure{kExitIo, "value " + std::to_string(v) + " does not fit in 32 bits"};
        return static_cast<std::int32_t>(v);
    };

    std::vector<std::int32_t> values;
    if (const auto dots = text.find(".."); !arg.starts_with("@") && dots != std::string::npos) {
        const std::int32_t lo = parse_one(text.substr(0, dots));
        const std::int32_t hi = parse_one(text.substr(dots + 2));
        if (hi < lo || std::int64_t{hi} - lo >= (1 << 20))
            throw Failure{kExitIo, "bad range '" + arg + "'"};
        for (std::int64_t v = lo; v <= hi; ++v)
            values.push_back(static_cast<std::int32_t>(v));
        return values;
    }
    for (char& c : text)
        if (c == ',')
            c = ' ';
    std::istringstream in(text);
    std::string tok;
    while (in >> tok)
        values.push_back(parse_one(tok));
    return values;
}

std::string format_gen_text(const vhdl::GenReport& r)
{
    std::ostringstream out;
    out << "generated: files=" << r.files_written << " lines=" << r.lines_generated
        << " rewritten=" << r.lines_rewritten << '\n';
    for (const auto& f : r.files)
        out << "  " << f.generic_string() << '\n';
    out << "reference point: files=38 lines=2566 time=3s\n";
    return out.str();
}

std::string format_gen_kv(const vhdl::GenReport& r)
{
    std::ostringstream out;
    out << "kind=generate\n"
        << "files=" << r.files_written << '\n'
        << "lines=" << r.lines_generated << '\n'
        << "rewritten=" << r.lines_rewritten << '\n';
    for (std::size_t i = 0; i < r.files.size(); ++i)
        out << "file." << i << '=' << r.files[i].generic_string() << '\n';
    return out.str();
}

void save_state(const Options& o, std::string_view stem, const std::string& text, const std::string& kv)
{
    const fs::path dir = o.out_dir / kStateDir;
    write_text(dir / (std::string(stem) + ".txt"), text);
    write_text(dir / (std::string(stem) + ".kv"), kv);
}

int cmd_validate(const Options& o, std::ostream& out)
{
    const MppSoCConfig config = load_config(o.config_path);
    const ValidationReport report = validate(config);
    out << format_report(report);
    return report.is_valid ? kExitOk : kExitInvalidConfig;
}

int cmd_generate(const Options& o, std::ostream& out, std::ostream& err)
{
    const MppSoCConfig config = load_config(o.config_path);
    const ValidationReport validation = validate(config);

    if (o.force_report_only) {
        out << format_report(validation);
        if (validation.is_valid) {
            for (const auto& p : vhdl::plan_actions(config)) {
                out << "  plan " << p.file << ": " << p.action.anchor;
                if (p.action.target_name)
                    out << ' ' << *p.action.target_name;
                out << ' ' << vhdl::to_string(p.action.delimiter) << ' ' << p.action.new_value << '\n';
            }
        }
        return validation.is_valid ? kExitOk : kExitInvalidConfig;
    }
    if (!validation.is_valid) {
        out << format_report(validation);
        err << "error: " << o.config_path << ": configuration is invalid, nothing generated\n";
        return kExitInvalidConfig;
    }

    const vhdl::TemplateSet templates =
        o.templates ? vhdl::load_templates(*o.templates) : vhdl::bundled_templates();
    vhdl::GenerateOptions options;
    options.base_dir = fs::path(o.config_path).parent_path();
    if (options.base_dir.empty())
        options.base_dir = ".";
    const vhdl::GenReport report = vhdl::generate(config, templates, o.out_dir, options);

    const std::string text = format_gen_text(report);
    const std::string kv = format_gen_kv(report);
    out << (o.report_format == "kv" ? kv : text);
    err << "generation took "
        << std::chrono::duration_cast<std::chrono::microseconds>(report.elapsed).count() << " us\n";
    save_state(o, "last_gen", text, kv);

    if (o.manifest) {
        std::string list;
        for (const auto& f : report.files)
            list += f.generic_string() + '\n';
        if (config.mem_init) {
            fs::path image = *config.mem_init;
            if (image.is_relative())
                image = options.base_dir / image;
            list += image.generic_string() + '\n';
        }
        write_text(*o.manifest, list);
    }
    return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out)
{
    const MppSoCConfig config = load_config(o.config_path);
    if (const auto v = validate(config); !v.is_valid) {
        out << format_report(v);
        return kExitInvalidConfig;
    }
    const sim::CostModel cost = o.cost_model ? sim::parse_cost_model(read_text(*o.cost_model)) : sim::CostModel{};

    std::optional<std::vector<std::int32_t>> values;
    if (o.values)
        values = parse_values(*o.values);

    std::string text;
    std::string kv;
    if (o.app == "reduce") {
        if (!values) {
            values.emplace(config.pe_count());
            for (std::uint32_t i = 0; i < config.pe_count(); ++i)
                (*values)[i] = static_cast<std::int32_t>(i);
        }
        const auto report = sim::reduce_sum(config, *values, cost);
        text = format_text(report);
        kv = format_kv(report);
    } else if (o.app.starts_with("asm:")) {
        const std::string path = o.app.substr(4);
        sim::SimProgram program;
        try {
            program = sim::load_program(read_text(path));
        } catch (const sim::SimError& e) {
            throw Failure{kExitSimulation, at_file(path, e.what())};
        }
        sim::SimMachine machine(config, cost);
        if (values) {
            std::vector<std::uint32_t> lanes(values->begin(), values->end());
            machine.set_register(0, lanes);
        }
        try {
            const auto report = sim::run(machine, program, true);
            text = format_text(report);
            kv = format_kv(report);
        } catch (const sim::SimError& e) {
            throw Failure{kExitSimulation, at_file(path, e.what())};
        }
    } else {
        throw Failure{kExitIo, "unknown --app '" + o.app + "' (expected reduce or asm:FILE)"};
    }

    out << (o.report_format == "kv" ? kv : text);
    save_state(o, "last_sim", text, kv);

    if (o.edges) {
        if (!config.neighborhood)
            throw Failure{kExitIo, "--edges needs a neighbourhood network"};
        write_text(*o.edges, build_topology(*config.neighborhood, config.rows, config.cols).edge_list());
    }
    return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out)
{
    const fs::path dir = o.out_dir / kStateDir;
    const std::string ext = o.report_format == "kv" ? ".kv" : ".txt";
    bool any = false;
    for (const std::string_view stem : {"last_gen", "last_sim"}) {
        const fs::path path = dir / (std::string(stem) + ext);
        if (fs::is_regular_file(path)) {
            out << read_text(path);
            any = true;
        }
    }
    if (!any)
        throw Failure{kExitIo, "no reports found in " + o.out_dir.string()};
    return kExitOk;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"mppSoC configuration checker, VHDL generator and SIMD array simulator", "mppsocgen"};
    app.require_subcommand(1, 1);

    Options o;
    const auto add_common = [&](CLI::App* cmd, bool config_required) {
        auto* cfg = cmd->add_option("config", o.config_path, "configuration file");
        if (config_required)
            cfg->required();
        cmd->add_option("-o,--out", o.out_dir, "output / run directory");
        cmd->add_option("--report", o.report_format, "report format")->check(CLI::IsMember({"text", "kv"}));
    };

    auto* validate_cmd = app.add_subcommand("validate", "check a configuration against the rules");
    add_common(validate_cmd, true);

    auto* generate_cmd = app.add_subcommand("generate", "validate and write the VHDL file set");
    add_common(generate_cmd, true);
    generate_cmd->add_option("--templates", o.templates, "template directory (default: bundled)");
    generate_cmd->add_option("--manifest", o.manifest, "write the generated file list here");
    generate_cmd->add_flag("--force-report-only", o.force_report_only,
                           "print the validation report and plan without writing files");

    auto* simulate_cmd = app.add_subcommand("simulate", "run an application on the configured array");
    add_common(simulate_cmd, true);
    simulate_cmd->add_option("--app", o.app, "reduce or asm:FILE");
    simulate_cmd->add_option("--values", o.values, "RANGE (a..b), comma list or @FILE");
    simulate_cmd->add_option("--cost-model", o.cost_model, "cost model file");
    simulate_cmd->add_option("--edges", o.edges, "write the neighbourhood edge list here");

    auto* report_cmd = app.add_subcommand("report", "re-print the last reports of a run directory");
    add_common(report_cmd, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*validate_cmd)
            return cmd_validate(o, out);
        if (*generate_cmd)
            return cmd_generate(o, out, err);
        if (*simulate_cmd)
            return cmd_simulate(o, out);
        return cmd_report(o, out);
    } catch (const Failure& f) {
        err << "error: " << f.message << '\n';
        return f.code;
    } catch (const vhdl::RewriteError& e) {
        err << "error: " << e.what() << '\n';
        return e.kind() == vhdl::RewriteError::Kind::InvalidConfig ? kExitInvalidConfig : kExitIo;
    } catch (const sim::SimError& e) {
        err << "error: " << e.what() << '\n';
        return e.kind() == sim::SimError::Kind::BadCostModel ? kExitIo : kExitSimulation;
    } catch (const TopologyError& e) {
        err << "error: " << e.what() << '\n';
        return kExitSimulation;
    } catch (const noc::RouterError& e) {
        err << "error: " << e.what() << '\n';
        return kExitSimulation;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidConfig;
    }
}

} // namespace mppsoc::cli
