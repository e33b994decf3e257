#pragma once

#include <stdexcept>
#include <string>

namespace trelliskit {

// Bad code/scheme/plan description (CLI exit code 2).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed runtime input (length mismatch, empty table, ...).
class InputError : public std::runtime_error {
  public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A computation would exceed its configured budget (CLI exit code 3).
class ResourceError : public std::runtime_error {
  public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Search limits exhausted without the required answer (CLI exit code 3).
class LimitError : public std::runtime_error {
  public:
    explicit LimitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace trelliskit
