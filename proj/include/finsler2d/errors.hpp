#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace finsler2d {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& found);
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(std::string name, std::size_t offset);
  const std::string& name() const { return name_; }
  std::size_t offset() const { return offset_; }

 private:
  std::string name_;
  std::size_t offset_;
};

// Domain failure during evaluation (sqrt/ln of a non-positive value, division by zero).
class EvalError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string invariant, std::array<double, 2> x, const std::string& detail);
  const std::string& invariant() const { return invariant_; }
  std::array<double, 2> point() const { return x_; }

 private:
  std::string invariant_;
  std::array<double, 2> x_;
};

class SingularMetric : public Error {
 public:
  explicit SingularMetric(std::array<double, 2> x);
};

class ZeroVector : public Error {
 public:
  ZeroVector() : Error("tangent vector must be non-zero") {}
};

class DegenerateC : public Error {
 public:
  explicit DegenerateC(double c);
};

class ParamRange : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

class UnsupportedVaryingC : public Error {
 public:
  UnsupportedVaryingC()
      : Error("closed form requires a constant axis norm c; use the quadrature route") {}
};

class StepUnderflow : public Error {
 public:
  using Error::Error;
};

class LeftDomain : public Error {
 public:
  explicit LeftDomain(double t);
  double t() const { return t_; }

 private:
  double t_;
};

class BlowUp : public Error {
 public:
  explicit BlowUp(double t);
  double t() const { return t_; }

 private:
  double t_;
};

}  // namespace finsler2d
