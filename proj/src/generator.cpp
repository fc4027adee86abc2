#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "mppsoc/rules.hpp"
#include "mppsoc/vhdl_rewriter.hpp"

namespace mppsoc::vhdl {

namespace fs = std::filesystem;

std::string_view vhdl_name(Neighborhood n)
{
    switch (n) {
    case Neighborhood::Linear: return "LINEAR";
    case Neighborhood::Ring: return "RING";
    case Neighborhood::Mesh2D: return "MESH";
    case Neighborhood::Torus2D: return "TORUS";
    case Neighborhood::Xnet: return "XNET";
    }
    return "NONE";
}

std::string_view vhdl_name(MpNocKind k)
{
    switch (k) {
    case MpNocKind::SharedBus: return "SHARED_BUS";
    case MpNocKind::Crossbar: return "CROSSBAR";
    case MpNocKind::DeltaOmega: return "OMEGA";
    case MpNocKind::DeltaBaseline: return "BASELINE";
    case MpNocKind::DeltaButterfly: return "BUTTERFLY";
    }
    return "NONE";
}

namespace {

RewriteAction constant(std::string name, std::string value)
{
    return {"constant", std::move(name), Delimiter::Assign, std::move(value)};
}

void plan_memory(std::vector<PlannedAction>& plan, std::string_view file, const MemoryGeometry& g)
{
    const std::string f(file);
    plan.push_back({f, {"address", std::nullopt, Delimiter::VectorType, std::to_string(g.addr_width)}});
    plan.push_back({f, {"numwords_a", std::nullopt, Delimiter::Arrow, std::to_string(g.words)}});
    plan.push_back({f, {"widthad_a", std::nullopt, Delimiter::Arrow, std::to_string(g.addr_width)}});
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw RewriteError(RewriteError::Kind::IoError, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

std::vector<PlannedAction> plan_actions(const MppSoCConfig& config)
{
    const MemoryGeometry acu = acu_geometry(config);
    const MemoryGeometry pe = pe_geometry(config);
    const std::string pack(kPackMppsoc);

    std::vector<PlannedAction> plan;
    plan.push_back({pack, constant("sl_nb_rows", std::to_string(config.rows))});
    plan.push_back({pack, constant("sl_nb_column", std::to_string(config.cols))});
    plan.push_back({pack, constant("MS_add_width", std::to_string(acu.addr_width))});
    plan.push_back({pack, constant("SL_add_width", std::to_string(pe.addr_width))});
    if (config.neighborhood)
        plan.push_back({pack, constant("topology", std::string(vhdl_name(*config.neighborhood)))});
    if (config.mpnoc)
        plan.push_back({pack, constant("mpnoc_network", std::string(vhdl_name(*config.mpnoc)))});

    plan_memory(plan, kMemAcu, acu);
    if (config.mem_init) {
        plan.push_back({std::string(kMemAcu),
                        {"init_file", std::nullopt, Delimiter::Arrow, '"' + *config.mem_init + '"'}});
    }
    plan_memory(plan, kMemPe, pe);
    return plan;
}

const TemplateFile& TemplateSet::get(std::string_view name) const
{
    const auto it = std::find_if(files.begin(), files.end(),
                                 [&](const TemplateFile& f) { return f.name == name; });
    if (it == files.end())
        throw RewriteError(RewriteError::Kind::TemplateMissing, "template missing: " + std::string(name));
    return *it;
}

TemplateSet bundled_templates()
{
    TemplateSet set;
    for (const auto& t : bundled_template_data())
        set.files.push_back(TemplateFile::from_text(t.name, t.text));
    return set;
}

TemplateSet load_templates(const fs::path& dir)
{
    TemplateSet set;
    for (const auto name : kTemplateNames) {
        const fs::path path = dir / name;
        if (!fs::is_regular_file(path))
            throw RewriteError(RewriteError::Kind::TemplateMissing, "template missing: " + path.string());
        set.files.push_back(TemplateFile::from_text(std::string(name), read_file(path)));
    }
    return set;
}

std::vector<std::uint32_t> read_memory_image(const fs::path& path)
{
    if (!fs::is_regular_file(path))
        throw RewriteError(RewriteError::Kind::IoError, "memory image not found: " + path.string());
    const std::string text = read_file(path);

    std::vector<std::uint32_t> words;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const auto tokens = tokenize_line(line);
        if (tokens.empty())
            continue;
        std::string_view tok = tokens.front();
        if (tok.starts_with("0x") || tok.starts_with("0X"))
            tok.remove_prefix(2);
        std::uint32_t value = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value, 16);
        if (tokens.size() != 1 || tok.empty() || tok.size() > 8 || ec != std::errc{} ||
            ptr != tok.data() + tok.size()) {
            throw RewriteError(RewriteError::Kind::MemoryImage,
                               path.string() + ":" + std::to_string(line_no) +
                                   ": expected one hexadecimal 32-bit word");
        }
        words.push_back(value);
    }
    return words;
}

GenReport generate(const MppSoCConfig& config, const TemplateSet& templates, const fs::path& out_dir,
                   const GenerateOptions& options)
{
    const auto start = std::chrono::steady_clock::now();

    if (const auto report = validate(config); !report.is_valid) {
        throw RewriteError(RewriteError::Kind::InvalidConfig,
                           "configuration is invalid:\n" + format_report(report));
    }

    if (config.mem_init) {
        fs::path image = *config.mem_init;
        if (image.is_relative())
            image = options.base_dir / image;
        const auto words = read_memory_image(image);
        const auto capacity = acu_geometry(config).words;
        if (words.size() > capacity) {
            throw RewriteError(RewriteError::Kind::MemoryImage,
                               image.string() + ": " + std::to_string(words.size()) +
                                   " words exceed the ACU memory of " + std::to_string(capacity) +
                                   " words");
        }
    }

    std::map<std::string, std::vector<RewriteAction>, std::less<>> by_file;
    for (auto& p : plan_actions(config))
        by_file[p.file].push_back(std::move(p.action));

    // Rewrite everything in memory first so a failure leaves out_dir untouched.
    std::vector<TemplateFile> outputs;
    GenReport report;
    for (const auto name : kTemplateNames) {
        const TemplateFile& tmpl = templates.get(name);
        const auto it = by_file.find(name);
        if (it == by_file.end()) {
            outputs.push_back(tmpl);
            continue;
        }
        auto rewritten = apply_to_file(tmpl, it->second);
        report.lines_rewritten += rewritten.lines_rewritten;
        outputs.push_back(std::move(rewritten.file));
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw RewriteError(RewriteError::Kind::IoError, "cannot create " + out_dir.string() + ": " + ec.message());

    for (const auto& file : outputs) {
        const fs::path path = out_dir / file.name;
        const std::string text = file.text();
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        out.close();
        if (!out)
            throw RewriteError(RewriteError::Kind::IoError, "cannot write " + path.string());
        report.files.push_back(path);
        report.lines_generated += file.lines.size();
    }
    report.files_written = outputs.size();
    report.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::steady_clock::now() - start);
    return report;
}

GenReport generate(const MppSoCConfig& config, const fs::path& template_dir, const fs::path& out_dir,
                   const GenerateOptions& options)
{
    return generate(config, load_templates(template_dir), out_dir, options);
}

} // namespace mppsoc::vhdl
