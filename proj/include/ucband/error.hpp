#pragma once

#include <stdexcept>
#include <string>

namespace ucband {

// Error categories map one-to-one onto CLI exit codes.
enum class ErrorKind { config = 2, data = 3, numeric = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }
  const char* kind_name() const noexcept {
    switch (kind_) {
      case ErrorKind::config: return "config";
      case ErrorKind::data: return "data";
      case ErrorKind::numeric: return "numeric";
    }
    return "unknown";
  }

 private:
  ErrorKind kind_;
};

/// Invalid argument or configuration value.
struct ParameterError : Error {
  explicit ParameterError(const std::string& w) : Error(ErrorKind::config, w) {}
};

/// A point lies outside the domain of a series basis.
struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorKind::data, w) {}
};

/// Malformed or inconsistent input data.
struct DataError : Error {
  explicit DataError(const std::string& w) : Error(ErrorKind::data, w) {}
};

/// Degenerate surface, failed factorisation, and similar.
struct NumericError : Error {
  explicit NumericError(const std::string& w) : Error(ErrorKind::numeric, w) {}
};

struct UnusableSurfaceError : NumericError {
  explicit UnusableSurfaceError(const std::string& w) : NumericError(w) {}
};

}  // namespace ucband
