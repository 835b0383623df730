// error.hpp — Exception types shared by the library and the CLI

#pragma once

#include <stdexcept>
#include <string>

namespace qme {

// Invalid parameters or configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed to meet its contract (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw ConfigError(what);
}

} // namespace qme
