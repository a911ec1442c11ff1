#pragma once

#include <stdexcept>
#include <string>

namespace edapx {

// Bad arguments or malformed inputs; the CLI maps these to exit code 2.
class InvalidInput : public std::runtime_error {
  public:
    explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

// A required lower recursion level was not built.
class MissingDependency : public InvalidInput {
  public:
    explicit MissingDependency(const std::string& what) : InvalidInput(what) {}
};

// Misconfiguration (integer overflow risk, nonpositive constants, ...);
// the CLI maps these to exit code 3.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace edapx
