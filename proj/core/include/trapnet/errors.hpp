#pragma once

#include <stdexcept>
#include <string>

namespace trapnet {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A NetworkSpec (or a derived request) violates its invariants.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

/// The spectral decomposition of a generator is numerically unreliable;
/// callers must fall back to direct time stepping.
class NearDefective : public Error {
 public:
  using Error::Error;
};

/// P_A(t) never reached one half within the allowed horizon.
class HorizonExceeded : public Error {
 public:
  using Error::Error;
};

class SingularRateMatrix : public Error {
 public:
  using Error::Error;
};

class RecursionNonConvergent : public Error {
 public:
  using Error::Error;
};

/// Malformed key-value configuration or CSV input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace trapnet
