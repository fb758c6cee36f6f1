#pragma once

#include <stdexcept>
#include <string>

namespace specdec {

/// Invalid argument or violated precondition on an operation's inputs.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite or otherwise unusable numeric data.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A collaborative-filtering rating that cannot be formed (no neighbors, zero similarity mass).
class UndefinedRating : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Bad or unknown key in a simulation config.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace specdec
