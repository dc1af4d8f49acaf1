#pragma once

#include <stdexcept>
#include <string>

namespace bootci {

/// Invalid names, flags or parameter combinations detected before any sampling.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or unreadable input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A guard that should be unreachable under correct configuration fired.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace bootci
