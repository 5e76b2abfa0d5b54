#pragma once

#include <stdexcept>
#include <string>

namespace srds {

// Malformed inputs throw; a clean cryptographic reject returns false.
struct MalformedInput : std::runtime_error {
    explicit MalformedInput(const std::string& m) : std::runtime_error(m) {}
};

struct NoSigningKey : std::runtime_error {
    explicit NoSigningKey(const std::string& m) : std::runtime_error(m) {}
};

struct ParameterError : std::invalid_argument {
    explicit ParameterError(const std::string& m) : std::invalid_argument(m) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

struct EngineError : std::logic_error {
    explicit EngineError(const std::string& m) : std::logic_error(m) {}
};

}  // namespace srds
