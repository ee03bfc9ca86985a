#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace conicmcp {

// Base of every error raised by the library. `kind()` is a stable token used
// by the CLI's machine-readable error documents; `field()` names the offending
// input when one is known.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what, std::string field = {})
      : std::runtime_error(what), kind_(std::move(kind)), field_(std::move(field)) {}

  const std::string& kind() const noexcept { return kind_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string kind_;
  std::string field_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what, std::string field = {})
      : Error("dimension", what, std::move(field)) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error("precondition", what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what, std::string field = {})
      : Error("validation", what, std::move(field)) {}
};

class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& what) : Error("divergence", what) {}
};

class OracleError : public Error {
 public:
  explicit OracleError(const std::string& what) : Error("oracle", what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::string field = {})
      : Error("parse", what, std::move(field)) {}
};

}  // namespace conicmcp
