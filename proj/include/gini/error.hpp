#pragma once

#include <stdexcept>
#include <string>

namespace gini {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SampleTooSmall : public Error {
 public:
  SampleTooSmall(std::size_t have, std::size_t need)
      : Error("sample too small: n = " + std::to_string(have) + ", need at least " +
              std::to_string(need)),
        have_(have),
        need_(need) {}
  std::size_t have() const noexcept { return have_; }
  std::size_t need() const noexcept { return need_; }

 private:
  std::size_t have_;
  std::size_t need_;
};

/// A denominator U-statistic (Gini mean difference) or a variance is zero.
class DegenerateSample : public Error {
 public:
  using Error::Error;
};

class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Zero is not interior to the convex hull of the pseudo-values.
class HullViolation : public Error {
 public:
  using Error::Error;
};

class SingularCovariance : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class NegativeVariance : public Error {
 public:
  using Error::Error;
};

class InvalidScatter : public Error {
 public:
  using Error::Error;
};

/// A study configuration key holds an invalid value. key() names it.
class ConfigInvalid : public Error {
 public:
  ConfigInvalid(std::string key, const std::string& why)
      : Error("invalid config key '" + key + "': " + why), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& why)
      : Error("parse error at line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + why),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class FileNotFound : public Error {
 public:
  explicit FileNotFound(const std::string& path) : Error("cannot open file: " + path) {}
};

}  // namespace gini
