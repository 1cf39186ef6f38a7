#pragma once

#include <stdexcept>
#include <string>

namespace mst {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical procedure failed to reach its tolerance.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

/// A requested root index does not exist (e.g. the second root for m = 2).
class NoSuchRoot : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested exactly at a pole.
class PoleError : public Error {
 public:
  using Error::Error;
};

class DuplicateKey : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// Regression system condition number exceeds the configured bound.
class IllConditioned : public Error {
 public:
  using Error::Error;
};

/// The fixed-point map is not a contraction for the given parameters.
class NotContractive : public Error {
 public:
  using Error::Error;
};

class SizeMismatch : public Error {
 public:
  using Error::Error;
};

class NegativeBase : public Error {
 public:
  using Error::Error;
};

}  // namespace mst
