#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bayesfuse {

/// Malformed input: bad files, out-of-domain arguments, unknown names.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structurally valid request that the engine does not support
/// (e.g. a uniform proposal over an unbounded object space).
class UnsupportedConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The posterior denominator vanished for a feature vector; carries the
/// offending input so callers can report it.
class DegeneracyError : public std::runtime_error {
 public:
  DegeneracyError(const std::string& msg, std::vector<double> features)
      : std::runtime_error(msg), features_(std::move(features)) {}
  const std::vector<double>& features() const { return features_; }

 private:
  std::vector<double> features_;
};

/// Unwritable or unreadable output/input paths.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bayesfuse
