#pragma once

#include <stdexcept>
#include <string>

namespace eit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IncompatibleDimensions : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NonPositiveWaist : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnsupportedBranch : public DomainError {
 public:
  using DomainError::DomainError;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class QuadratureNotConverged : public Error {
 public:
  QuadratureNotConverged(const std::string& what, double deviation, double allowed)
      : Error(what), deviation_(deviation), allowed_(allowed) {}
  double deviation() const { return deviation_; }
  double allowed() const { return allowed_; }

 private:
  double deviation_;
  double allowed_;
};

class NoDipFound : public Error {
 public:
  using Error::Error;
};

class FewerThanTwoPeaks : public Error {
 public:
  using Error::Error;
};

// Configuration and input-file errors. All of them map to the same CLI exit code.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ConfigError {
 public:
  ParseError(const std::string& source, int line, int column, const std::string& message)
      : ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                    message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class ValidationError : public ConfigError {
 public:
  ValidationError(const std::string& key, const std::string& message)
      : ConfigError(key + ": " + message), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class UnitError : public ConfigError {
 public:
  UnitError(const std::string& key, const std::string& message)
      : ConfigError(key + ": " + message), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace eit
