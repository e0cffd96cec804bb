#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dbfs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Request exceeds what the desk-scale build is configured to hold.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

// A 32-bit id space would overflow.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Arguments outside the domain of a formula or routine.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A normal-vertex record was addressed to a worker that does not own it.
class RoutingError : public Error {
 public:
  using Error::Error;
};

// Mismatched buffer sizes or malformed internal structures.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class EmptyReportError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dbfs
