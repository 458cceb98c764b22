#pragma once

#include <stdexcept>
#include <string>

namespace sentifolio {

/// Bad usage or bad configuration. CLI exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed, missing or inconsistent input data. CLI exit code 2.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Failure while computing (solver non-convergence, transport breakdown).
/// CLI exit code 3.
struct EngineError : std::runtime_error {
    explicit EngineError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sentifolio
