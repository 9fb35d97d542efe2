#pragma once

#include <stdexcept>
#include <string>

namespace lassoscreen {

enum class IoCode {
  missing_file,
  bad_header,
  shape_mismatch,
  non_finite,
  zero_column,
  write_failed,
};

/// File/format error with a machine-readable code (CLI maps these to exit 2).
class IoError : public std::runtime_error {
 public:
  IoError(IoCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  IoCode code() const { return code_; }

 private:
  IoCode code_;
};

/// Solver breakdown or an instance that is numerically unusable (CLI exit 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lassoscreen
