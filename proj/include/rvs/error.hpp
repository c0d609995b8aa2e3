#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rvs {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (files, configs, templates).
///
/// `line` is 1-based and zero when the error is not tied to a line; `field`
/// is empty when not tied to a field.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message, std::size_t line = 0,
                           std::string field = {});

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Filesystem failures: missing inputs, unwritable outputs.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A scoring backend could not produce a result.
class BackendError : public Error {
 public:
  using Error::Error;
};

/// The backend refused a request outright (HTTP 400/413 on the wire).
/// Never retried.
class RequestRejected : public BackendError {
 public:
  RequestRejected(const std::string& message, int status);
  int status() const noexcept { return status_; }

 private:
  int status_;
};

}  // namespace rvs
