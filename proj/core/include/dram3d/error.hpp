#pragma once

#include <stdexcept>
#include <string>

namespace dram3d {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document (not valid JSON, wrong value types).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A value violates a type invariant. `field()` names the offending field
/// using a dotted path, e.g. "profiles[1].cs".
class ValidationError : public Error {
 public:
  ValidationError(std::string field, std::string reason)
      : Error(field + ": " + reason), field_(std::move(field)), reason_(std::move(reason)) {}

  const std::string& field() const noexcept { return field_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string field_;
  std::string reason_;
};

/// An operation was called outside its domain (e.g. a layer count on a
/// planar profile, bonding pitch of a 2D array).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The MNA system is singular because a node floats.
class SingularSystemError : public Error {
 public:
  SingularSystemError(int node, const std::string& what)
      : Error(what), node_(node) {}

  int node() const noexcept { return node_; }

 private:
  int node_;
};

/// Calibration could not be set up (insensitive parameter, bad bounds).
class CalibrationError : public Error {
 public:
  using Error::Error;
};

}  // namespace dram3d
