#pragma once

#include <stdexcept>
#include <string>

namespace kchemo {

/// Invalid input to an operation (bad exponent, bad grid, missing field...).
class InvalidArgument : public std::invalid_argument {
public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

/// Configuration file failed to parse or validate.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A runtime guard tripped (wrap-around, positivity time-step bound).
class GuardAbort : public std::runtime_error {
public:
  explicit GuardAbort(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kchemo
