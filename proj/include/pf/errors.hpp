#pragma once

#include <stdexcept>
#include <string>

namespace pf {

// Base class for recoverable errors surfaced to CLI users.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input data: ragged rows, unparsable numbers, schema mismatches.
class FormatError : public Error {
public:
  using Error::Error;
};

// Filesystem failures: missing files, unwritable paths.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace pf
