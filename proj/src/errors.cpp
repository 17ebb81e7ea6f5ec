#include "finsler2d/errors.hpp"

#include <cstdio>

namespace finsler2d {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += "'" + items[i] + "'";
  }
  return out;
}

std::string point_text(std::array<double, 2> x) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "(%.17g, %.17g)", x[0], x[1]);
  return buf;
}

}  // namespace

SyntaxError::SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
    : Error("syntax error at offset " + std::to_string(offset) + ": expected one of " + join(expected) +
            ", found '" + found + "'"),
      offset_(offset),
      expected_(std::move(expected)) {}

UnknownIdentifier::UnknownIdentifier(std::string name, std::size_t offset)
    : Error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
      name_(std::move(name)),
      offset_(offset) {}

ValidationError::ValidationError(std::string invariant, std::array<double, 2> x, const std::string& detail)
    : Error("invariant '" + invariant + "' violated at x = " + point_text(x) + ": " + detail),
      invariant_(std::move(invariant)),
      x_(x) {}

SingularMetric::SingularMetric(std::array<double, 2> x)
    : Error("Riemannian metric is not positive definite at x = " + point_text(x)) {}

DegenerateC::DegenerateC(double c)
    : Error("axis norm c = " + std::to_string(c) + " outside (0, 1); q may vanish") {}

LeftDomain::LeftDomain(double t)
    : Error("curve left the declared domain at t = " + std::to_string(t)), t_(t) {}

BlowUp::BlowUp(double t) : Error("transported vector norm left the admissible band at t = " + std::to_string(t)), t_(t) {}

}  // namespace finsler2d
