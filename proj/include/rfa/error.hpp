#pragma once

#include <stdexcept>
#include <string>

namespace rfa {

// Malformed or unusable input data (CLI exit code 1).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
 public:
  using DataError::DataError;
};

// Bad configuration: flags, stopword files, generator settings (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal invariant failed; indicates a bug rather than bad input.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rfa
