#include "mppsoc/config.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <set>
#include <sstream>
#include <utility>

namespace mppsoc {

namespace {

constexpr std::array<std::pair<Processor, std::string_view>, 3> kProcessorNames{{
    {Processor::Minimips, "minimips"},
    {Processor::Mips, "mips"},
    {Processor::Nios, "nios"},
}};
constexpr std::array<std::pair<Methodology, std::string_view>, 2> kMethodologyNames{{
    {Methodology::Reduction, "reduction"},
    {Methodology::Replication, "replication"},
}};
constexpr std::array<std::pair<Neighborhood, std::string_view>, 5> kNeighborhoodNames{{
    {Neighborhood::Linear, "linear"},
    {Neighborhood::Ring, "ring"},
    {Neighborhood::Mesh2D, "mesh2d"},
    {Neighborhood::Torus2D, "torus2d"},
    {Neighborhood::Xnet, "xnet"},
}};
constexpr std::array<std::pair<MpNocKind, std::string_view>, 5> kMpNocNames{{
    {MpNocKind::SharedBus, "sharedbus"},
    {MpNocKind::Crossbar, "crossbar"},
    {MpNocKind::DeltaOmega, "delta-omega"},
    {MpNocKind::DeltaBaseline, "delta-baseline"},
    {MpNocKind::DeltaButterfly, "delta-butterfly"},
}};

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E value)
{
    for (const auto& [v, name] : table)
        if (v == value)
            return name;
    return "?";
}

template <typename E, std::size_t N>
std::optional<E> value_of(const std::array<std::pair<E, std::string_view>, N>& table,
                          std::string_view s)
{
    for (const auto& [v, name] : table)
        if (name == s)
            return v;
    return std::nullopt;
}

std::string_view trim(std::string_view s)
{
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && is_space(s.front()))
        s.remove_prefix(1);
    while (!s.empty() && is_space(s.back()))
        s.remove_suffix(1);
    return s;
}

// Upper bounds keep rows*cols and byte counts well inside their types.
constexpr std::uint64_t kMaxDimension = 65535;
constexpr std::uint64_t kMaxPes = 1u << 20;
constexpr std::uint64_t kMaxMemBytes = std::uint64_t{1} << 40;

std::uint64_t parse_positive(std::string_view key, std::string_view token, int line,
                             std::uint64_t max)
{
    std::uint64_t v = 0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (token.empty() || ec != std::errc{} || ptr != last || v == 0 || v > max) {
        throw ConfigError(ConfigError::Kind::BadValue,
                          "line " + std::to_string(line) + ": bad value '" + std::string(token) +
                              "' for key '" + std::string(key) + "'",
                          line, std::string(key), std::string(token));
    }
    return v;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view token, int line,
                            std::string_view why = {})
{
    std::string msg = "line " + std::to_string(line) + ": bad value '" + std::string(token) +
                      "' for key '" + std::string(key) + "'";
    if (!why.empty())
        msg += " (" + std::string(why) + ")";
    throw ConfigError(ConfigError::Kind::BadValue, msg, line, std::string(key), std::string(token));
}

} // namespace

std::string_view to_string(Processor p) { return name_of(kProcessorNames, p); }
std::string_view to_string(Methodology m) { return name_of(kMethodologyNames, m); }
std::string_view to_string(Neighborhood n) { return name_of(kNeighborhoodNames, n); }
std::string_view to_string(MpNocKind k) { return name_of(kMpNocNames, k); }

std::optional<Processor> parse_processor(std::string_view s) { return value_of(kProcessorNames, s); }
std::optional<Methodology> parse_methodology(std::string_view s) { return value_of(kMethodologyNames, s); }
std::optional<Neighborhood> parse_neighborhood(std::string_view s) { return value_of(kNeighborhoodNames, s); }
std::optional<MpNocKind> parse_mpnoc(std::string_view s) { return value_of(kMpNocNames, s); }

ConfigError::ConfigError(Kind kind, std::string message, int line, std::string key,
                         std::string token)
    : Error(std::move(message)), kind_(kind), line_(line), key_(std::move(key)),
      token_(std::move(token))
{
}

MppSoCConfig parse_config(std::string_view text)
{
    MppSoCConfig config;
    std::set<std::string, std::less<>> seen;
    int line_no = 0;

    while (!text.empty() || line_no == 0) {
        const auto eol = text.find('\n');
        std::string_view raw = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;

        if (const auto hash = raw.find('#'); hash != std::string_view::npos)
            raw = raw.substr(0, hash);
        const std::string_view line = trim(raw);
        if (line.empty()) {
            if (text.empty())
                break;
            continue;
        }

        const auto eq = line.find('=');
        const std::string_view key = eq == std::string_view::npos ? line : trim(line.substr(0, eq));
        if (eq == std::string_view::npos || key.empty()) {
            throw ConfigError(ConfigError::Kind::MalformedLine,
                              "line " + std::to_string(line_no) + ": expected 'key = value'",
                              line_no);
        }
        const std::string_view value = trim(line.substr(eq + 1));

        static constexpr std::string_view kKnownKeys[] = {
            "processor", "methodology", "rows", "cols", "acu_mem_bytes",
            "pe_mem_bytes", "neighborhood", "mpnoc", "mem_init"};
        if (std::find(std::begin(kKnownKeys), std::end(kKnownKeys), key) == std::end(kKnownKeys)) {
            throw ConfigError(ConfigError::Kind::UnknownKey,
                              "line " + std::to_string(line_no) + ": unknown key '" +
                                  std::string(key) + "'",
                              line_no, std::string(key));
        }
        if (!seen.emplace(key).second) {
            throw ConfigError(ConfigError::Kind::DuplicateKey,
                              "line " + std::to_string(line_no) + ": duplicate key '" +
                                  std::string(key) + "'",
                              line_no, std::string(key));
        }

        if (key == "processor") {
            const auto p = parse_processor(value);
            if (!p)
                bad_value(key, value, line_no);
            config.processor = *p;
        } else if (key == "methodology") {
            const auto m = parse_methodology(value);
            if (!m)
                bad_value(key, value, line_no);
            config.methodology = *m;
        } else if (key == "rows") {
            config.rows = static_cast<std::uint32_t>(parse_positive(key, value, line_no, kMaxDimension));
        } else if (key == "cols") {
            config.cols = static_cast<std::uint32_t>(parse_positive(key, value, line_no, kMaxDimension));
        } else if (key == "acu_mem_bytes" || key == "pe_mem_bytes") {
            const auto bytes = parse_positive(key, value, line_no, kMaxMemBytes);
            if (bytes % kWordBytes != 0)
                bad_value(key, value, line_no, "not a multiple of the 4-byte word");
            (key == "acu_mem_bytes" ? config.acu_mem_bytes : config.pe_mem_bytes) = bytes;
        } else if (key == "neighborhood") {
            if (value == "none") {
                config.neighborhood.reset();
            } else {
                const auto n = parse_neighborhood(value);
                if (!n)
                    bad_value(key, value, line_no);
                config.neighborhood = *n;
            }
        } else if (key == "mpnoc") {
            if (value == "none") {
                config.mpnoc.reset();
            } else {
                const auto k = parse_mpnoc(value);
                if (!k)
                    bad_value(key, value, line_no);
                config.mpnoc = *k;
            }
        } else if (key == "mem_init") {
            const bool bad = value.empty() ||
                             value.find_first_of(" \t\"") != std::string_view::npos;
            if (bad)
                bad_value(key, value, line_no, "file name must be non-empty without spaces or quotes");
            config.mem_init = std::string(value);
        }
    }

    for (std::string_view required : {"rows", "cols", "acu_mem_bytes", "pe_mem_bytes"}) {
        if (!seen.contains(required)) {
            throw ConfigError(ConfigError::Kind::MissingRequiredKey,
                              "missing required key '" + std::string(required) + "'", 0,
                              std::string(required));
        }
    }
    if (std::uint64_t{config.rows} * config.cols > kMaxPes) {
        throw ConfigError(ConfigError::Kind::BadValue,
                          "rows*cols exceeds " + std::to_string(kMaxPes) + " PEs", 0, "rows",
                          std::to_string(config.rows));
    }
    if (!config.neighborhood && !config.mpnoc) {
        throw ConfigError(ConfigError::Kind::NoNetworkSelected,
                          "no network selected: set 'neighborhood' and/or 'mpnoc'");
    }
    return config;
}

std::string serialize_config(const MppSoCConfig& config)
{
    std::ostringstream out;
    out << "processor = " << to_string(config.processor) << '\n'
        << "methodology = " << to_string(config.methodology) << '\n'
        << "rows = " << config.rows << '\n'
        << "cols = " << config.cols << '\n'
        << "acu_mem_bytes = " << config.acu_mem_bytes << '\n'
        << "pe_mem_bytes = " << config.pe_mem_bytes << '\n';
    if (config.neighborhood)
        out << "neighborhood = " << to_string(*config.neighborhood) << '\n';
    if (config.mpnoc)
        out << "mpnoc = " << to_string(*config.mpnoc) << '\n';
    if (config.mem_init)
        out << "mem_init = " << *config.mem_init << '\n';
    return out.str();
}

MemoryGeometry derive_geometry(std::uint64_t bytes, std::uint64_t word_bytes)
{
    if (word_bytes == 0 || bytes < word_bytes || bytes % word_bytes != 0) {
        throw ConfigError(ConfigError::Kind::NotDivisible,
                          std::to_string(bytes) + " bytes is not a positive multiple of " +
                              std::to_string(word_bytes) + "-byte words");
    }
    MemoryGeometry g;
    g.words = bytes / word_bytes;
    // ceil(log2(words)), floored at 1.
    g.addr_width = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::bit_width(g.words - 1)));
    return g;
}

} // namespace mppsoc
