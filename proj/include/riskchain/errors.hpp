#pragma once

#include <stdexcept>
#include <string>

namespace riskchain {

/// Invalid configuration detected before any work starts.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// File or stream level failure (missing file, unwritable directory, ...).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Structured input that does not match the expected schema; carries the
/// offending line when known (0 = not line-addressable).
class SchemaError : public std::runtime_error {
public:
    SchemaError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Violated precondition or invariant inside the domain logic
/// (out-of-order timestamps, dimension mismatch, coverage violation, ...).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace riskchain
