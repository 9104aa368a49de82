// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <stdexcept>
#include <string>

namespace wmr {

/// Error classes surfaced by the library. The CLI maps each class to an exit code.
enum class ErrorKind {
  invalid_argument,
  unsupported_order,
  domain_too_small,
  insufficient_data,
  precondition,
  config,
  numerical_blowup,
  conservation_violation,
  non_convergence,
  io,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::unsupported_order: return "unsupported-order";
    case ErrorKind::domain_too_small: return "domain-too-small";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::config: return "config";
    case ErrorKind::numerical_blowup: return "numerical-blowup";
    case ErrorKind::conservation_violation: return "conservation-violation";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when an explicit step produced non-finite values.
class NumericalBlowup : public Error {
 public:
  NumericalBlowup(double time, const std::string& what)
      : Error(ErrorKind::numerical_blowup, what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace wmr
