#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace planefield {

using Point = std::array<double, 3>;

/// Base of every error the toolkit raises. `kind()` is the stable name used
/// in JSON reports ("SyntaxError", "NotSPD", ...).
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::vector<std::string> expected,
              const std::string& found);

  std::size_t position() const noexcept { return position_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(std::string name, std::size_t position);

  const std::string& name() const noexcept { return name_; }
  std::size_t position() const noexcept { return position_; }

 private:
  std::string name_;
  std::size_t position_;
};

class ArityError : public Error {
 public:
  ArityError(const std::string& function, std::size_t expected, std::size_t got,
             std::size_t position);
};

/// A function was evaluated outside its domain (sqrt of a negative, a
/// smoothstep with a >= b, division by zero, ...).
class DomainError : public Error {
 public:
  DomainError(std::string function, double argument);
  DomainError(std::string function, const std::string& detail);

  const std::string& function() const noexcept { return function_; }
  double argument() const noexcept { return argument_; }

 private:
  std::string function_;
  double argument_ = 0.0;
};

class NotSPD : public Error {
 public:
  NotSPD(const Point& p, int failing_minor);

  const Point& point() const noexcept { return point_; }
  int failing_minor() const noexcept { return minor_; }

 private:
  Point point_;
  int minor_;
};

class DegenerateDistribution : public Error {
 public:
  DegenerateDistribution(const Point& p, const std::string& why);
};

class SingularSample : public Error {
 public:
  SingularSample(const Point& p, const std::string& coordinate);
};

class NotTransverse : public Error {
 public:
  NotTransverse(const Point& p, double angle);

  const Point& point() const noexcept { return point_; }
  double angle() const noexcept { return angle_; }

 private:
  Point point_;
  double angle_;
};

class NonSPDPath : public Error {
 public:
  NonSPDPath(double t, double u, double v, int depth);
};

class OverlapMismatch : public Error {
 public:
  OverlapMismatch(const std::string& overlap, double mismatch, double tolerance);
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error("ConfigError", message) {}
};

std::string format_point(const Point& p);

}  // namespace planefield
