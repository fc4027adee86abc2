#pragma once

#include <stdexcept>
#include <string>

namespace mppsoc {

// Base of every error raised by the library. Each module derives its own
// error type carrying a module-specific kind enum.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mppsoc
