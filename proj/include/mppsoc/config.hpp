#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "mppsoc/error.hpp"

namespace mppsoc {

enum class Processor { Minimips, Mips, Nios };
enum class Methodology { Reduction, Replication };
enum class Neighborhood { Linear, Ring, Mesh2D, Torus2D, Xnet };
enum class MpNocKind { SharedBus, Crossbar, DeltaOmega, DeltaBaseline, DeltaButterfly };

inline constexpr Neighborhood kAllNeighborhoods[] = {
    Neighborhood::Linear, Neighborhood::Ring, Neighborhood::Mesh2D,
    Neighborhood::Torus2D, Neighborhood::Xnet};
inline constexpr MpNocKind kAllMpNocKinds[] = {
    MpNocKind::SharedBus, MpNocKind::Crossbar, MpNocKind::DeltaOmega,
    MpNocKind::DeltaBaseline, MpNocKind::DeltaButterfly};

// Lowercase names used by the configuration file.
std::string_view to_string(Processor p);
std::string_view to_string(Methodology m);
std::string_view to_string(Neighborhood n);
std::string_view to_string(MpNocKind k);

std::optional<Processor> parse_processor(std::string_view s);
std::optional<Methodology> parse_methodology(std::string_view s);
std::optional<Neighborhood> parse_neighborhood(std::string_view s);
std::optional<MpNocKind> parse_mpnoc(std::string_view s);

constexpr bool is_delta(MpNocKind k)
{
    return k == MpNocKind::DeltaOmega || k == MpNocKind::DeltaBaseline ||
           k == MpNocKind::DeltaButterfly;
}

// PEs are 32-bit in every supported processor IP.
inline constexpr std::uint64_t kWordBytes = 4;

struct MppSoCConfig {
    Processor processor = Processor::Minimips;
    Methodology methodology = Methodology::Reduction;
    std::uint32_t rows = 1;             // sl_nb_rows
    std::uint32_t cols = 1;             // sl_nb_column
    std::uint64_t acu_mem_bytes = kWordBytes;
    std::uint64_t pe_mem_bytes = kWordBytes;
    std::optional<Neighborhood> neighborhood;
    std::optional<MpNocKind> mpnoc;
    std::optional<std::string> mem_init;

    std::uint32_t pe_count() const { return rows * cols; }

    bool operator==(const MppSoCConfig&) const = default;
};

struct MemoryGeometry {
    std::uint64_t words = 1;
    std::uint32_t addr_width = 1;

    bool operator==(const MemoryGeometry&) const = default;
};

class ConfigError : public Error {
public:
    enum class Kind {
        MalformedLine,
        UnknownKey,
        DuplicateKey,
        BadValue,
        MissingRequiredKey,
        NoNetworkSelected,
        NotDivisible,
    };

    ConfigError(Kind kind, std::string message, int line = 0, std::string key = {},
                std::string token = {});

    Kind kind() const { return kind_; }
    // 1-based line of the offending input, 0 when not tied to a line.
    int line() const { return line_; }
    const std::string& key() const { return key_; }
    const std::string& token() const { return token_; }

private:
    Kind kind_;
    int line_;
    std::string key_;
    std::string token_;
};

// Parses the line-oriented `key = value` configuration format.
MppSoCConfig parse_config(std::string_view text);

// Canonical emitter; parse_config(serialize_config(c)) == c.
std::string serialize_config(const MppSoCConfig& config);

// Word count and address width of a memory of `bytes` bytes. A one-word
// memory still gets a 1-bit address so no generated vector is zero-width.
MemoryGeometry derive_geometry(std::uint64_t bytes, std::uint64_t word_bytes = kWordBytes);

inline MemoryGeometry acu_geometry(const MppSoCConfig& c) { return derive_geometry(c.acu_mem_bytes); }
inline MemoryGeometry pe_geometry(const MppSoCConfig& c) { return derive_geometry(c.pe_mem_bytes); }

} // namespace mppsoc
