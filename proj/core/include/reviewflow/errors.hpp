#pragma once

#include <stdexcept>
#include <string>

namespace reviewflow {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Table/model contract violations: duplicate columns, length mismatches.
class TableError : public Error {
 public:
  using Error::Error;
};

/// File or stream failures.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace reviewflow
