#include "mppsoc/rules.hpp"

#include <bit>
#include <sstream>

namespace mppsoc {

std::string_view to_string(RuleId id)
{
    switch (id) {
    case RuleId::R1: return "R1";
    case RuleId::R2: return "R2";
    case RuleId::R3: return "R3";
    }
    return "?";
}

namespace {

std::string describe(const MppSoCConfig& c)
{
    std::ostringstream s;
    s << "rows=" << c.rows << " cols=" << c.cols;
    if (c.neighborhood)
        s << " neighborhood=" << to_string(*c.neighborhood);
    if (c.mpnoc)
        s << " mpnoc=" << to_string(*c.mpnoc);
    return s.str();
}

} // namespace

ValidationReport validate(const MppSoCConfig& config)
{
    ValidationReport report;
    const std::uint64_t pes = std::uint64_t{config.rows} * config.cols;

    if (config.mpnoc && is_delta(*config.mpnoc) && !std::has_single_bit(pes)) {
        report.violations.push_back(
            {RuleId::R1,
             "Delta MIN mpNoC requires a power-of-two PE count, got " + std::to_string(pes),
             describe(config)});
    }

    if (config.neighborhood) {
        const Neighborhood n = *config.neighborhood;
        const bool one_d = n == Neighborhood::Linear || n == Neighborhood::Ring;
        if (config.rows == 1 && !one_d) {
            report.violations.push_back(
                {RuleId::R2,
                 "a single PE row admits only linear or ring neighborhoods, got " +
                     std::string(to_string(n)),
                 describe(config)});
        }
        if (config.rows > 1 && one_d) {
            report.violations.push_back(
                {RuleId::R3,
                 "a 2D PE grid admits only mesh2d, torus2d or xnet neighborhoods, got " +
                     std::string(to_string(n)),
                 describe(config)});
        }
    }

    report.is_valid = report.violations.empty();
    return report;
}

std::string format_report(const ValidationReport& report)
{
    std::ostringstream out;
    out << (report.is_valid ? "VALID" : "INVALID") << '\n';
    for (const auto& v : report.violations)
        out << "  " << to_string(v.rule) << ": " << v.message << " [" << v.offending << "]\n";
    return out.str();
}

} // namespace mppsoc
