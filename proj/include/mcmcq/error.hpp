#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcmcq {

enum class ErrorKind {
  invalid_input,
  invalid_layout,
  invalid_parameter,
  degenerate_data,
  domain,
  unattainable,
  parse,
  missing_regeneration,
  configuration,
};

/// Base class for every error raised by the library. The kind drives the
/// CLI exit code: configuration-type errors map to 2, data errors to 3.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  bool is_data_error() const noexcept {
    return kind_ == ErrorKind::degenerate_data || kind_ == ErrorKind::parse ||
           kind_ == ErrorKind::missing_regeneration;
  }

 private:
  ErrorKind kind_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what)
      : Error(ErrorKind::invalid_input, what) {}
};

class InvalidLayout : public Error {
 public:
  explicit InvalidLayout(const std::string& what)
      : Error(ErrorKind::invalid_layout, what) {}
};

class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& what)
      : Error(ErrorKind::invalid_parameter, what) {}
};

class DegenerateData : public Error {
 public:
  explicit DegenerateData(const std::string& what)
      : Error(ErrorKind::degenerate_data, what) {}
};

/// A bound evaluated outside its validity domain. `threshold()` is the value
/// the argument has to exceed.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double threshold)
      : Error(ErrorKind::domain, what), threshold_(threshold) {}

  double threshold() const noexcept { return threshold_; }

 private:
  double threshold_;
};

class Unattainable : public Error {
 public:
  explicit Unattainable(const std::string& what)
      : Error(ErrorKind::unattainable, what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class MissingRegeneration : public Error {
 public:
  explicit MissingRegeneration(const std::string& what)
      : Error(ErrorKind::missing_regeneration, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorKind::configuration, what) {}
};

}  // namespace mcmcq
