#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mppsoc/config.hpp"
#include "mppsoc/error.hpp"

namespace mppsoc::vhdl {

// Token after which the new value is spliced.
enum class Delimiter {
    Assign,      // ":="
    Arrow,       // "=>"
    VectorType,  // "STD_LOGIC_VECTOR", value sits inside the range that follows
};

std::string_view to_string(Delimiter d);

struct RewriteAction {
    std::string anchor;                      // required first token of the line
    std::optional<std::string> target_name;  // second token, compared case-insensitively
    Delimiter delimiter = Delimiter::Assign;
    std::string new_value;

    bool operator==(const RewriteAction&) const = default;
};

// A VHDL source held line by line; CRLF input is normalized to LF.
struct TemplateFile {
    std::string name;
    std::vector<std::string> lines;

    static TemplateFile from_text(std::string name, std::string_view text);
    std::string text() const;

    bool operator==(const TemplateFile&) const = default;
};

class RewriteError : public Error {
public:
    enum class Kind {
        BadAction,
        DelimiterNotFound,
        AnchorNeverMatched,
        TemplateMissing,
        IoError,
        MemoryImage,
        InvalidConfig,
    };

    RewriteError(Kind kind, std::string message) : Error(std::move(message)), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Splits on space, tab, CR and LF; runs of delimiters collapse.
std::vector<std::string> tokenize_line(std::string_view line);

struct LineRewrite {
    std::string line;
    bool applied = false;
};

LineRewrite rewrite_line(std::string_view line, const RewriteAction& action);

// Reads back the value an action would replace on `line`, or nullopt when the
// action does not match the line.
std::optional<std::string> extract_value(std::string_view line, const RewriteAction& action);

struct FileRewrite {
    TemplateFile file;
    std::vector<std::size_t> applied_counts;  // parallel to the action list
    std::size_t lines_rewritten = 0;          // lines touched by at least one action
};

// Throws AnchorNeverMatched when any action matched no line.
FileRewrite apply_to_file(const TemplateFile& file, std::span<const RewriteAction> actions);

inline constexpr std::string_view kUserLibrary = "user_library.vhd";
inline constexpr std::string_view kPackMppsoc = "pack_mppsoc.vhd";
inline constexpr std::string_view kMappingMppsoc = "mapping_mppsoc.vhd";
inline constexpr std::string_view kMemAcu = "mem_acu.vhd";
inline constexpr std::string_view kMemPe = "mem_pe.vhd";
inline constexpr std::string_view kTemplateNames[] = {kUserLibrary, kPackMppsoc, kMappingMppsoc,
                                                      kMemAcu, kMemPe};

struct PlannedAction {
    std::string file;  // one of kTemplateNames
    RewriteAction action;

    bool operator==(const PlannedAction&) const = default;
};

std::vector<PlannedAction> plan_actions(const MppSoCConfig& config);

// The VHDL encoding of a topology / mpNoC choice in pack_mppsoc.
std::string_view vhdl_name(Neighborhood n);
std::string_view vhdl_name(MpNocKind k);

struct TemplateSet {
    std::vector<TemplateFile> files;

    // Throws TemplateMissing.
    const TemplateFile& get(std::string_view name) const;
};

struct BundledTemplate {
    const char* name;
    const char* text;
};
const std::vector<BundledTemplate>& bundled_template_data();

TemplateSet bundled_templates();
TemplateSet load_templates(const std::filesystem::path& dir);

// One 32-bit hexadecimal word per line, '#' comments allowed.
std::vector<std::uint32_t> read_memory_image(const std::filesystem::path& path);

struct GenReport {
    std::size_t files_written = 0;
    std::size_t lines_generated = 0;
    std::size_t lines_rewritten = 0;
    std::chrono::nanoseconds elapsed{0};
    std::vector<std::filesystem::path> files;
};

struct GenerateOptions {
    // Directory against which a relative mem_init path is resolved.
    std::filesystem::path base_dir = ".";
};

// Rewrites the template set for `config` into out_dir. Nothing is written
// unless every file was rewritten successfully.
GenReport generate(const MppSoCConfig& config, const TemplateSet& templates,
                   const std::filesystem::path& out_dir, const GenerateOptions& options = {});
GenReport generate(const MppSoCConfig& config, const std::filesystem::path& template_dir,
                   const std::filesystem::path& out_dir, const GenerateOptions& options = {});

} // namespace mppsoc::vhdl
