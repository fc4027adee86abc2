#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mppsoc/config.hpp"

namespace mppsoc {

enum class RuleId { R1, R2, R3 };

std::string_view to_string(RuleId id);

struct RuleViolation {
    RuleId rule;
    std::string message;
    std::string offending;  // e.g. "rows=1 cols=4 neighborhood=mesh2d"

    bool operator==(const RuleViolation&) const = default;
};

struct ValidationReport {
    bool is_valid = true;
    std::vector<RuleViolation> violations;  // always in R1, R2, R3 order

    bool operator==(const ValidationReport&) const = default;
};

// Checks the configuration rules:
//   R1  Delta MIN mpNoC needs rows*cols to be a power of two.
//   R2  a single PE row admits only linear or ring neighborhoods.
//   R3  more than one row admits only mesh2d, torus2d or xnet.
// Every applicable violation is reported; validation itself never throws.
ValidationReport validate(const MppSoCConfig& config);

// "VALID" or "INVALID" followed by one line per violation.
std::string format_report(const ValidationReport& report);

} // namespace mppsoc
