#pragma once

// Manifold specification: expression-backed fields on a rectangular chart.

#include <array>
#include <string>
#include <string_view>

#include "json.hpp"

#include "finsler2d/expression.hpp"
#include "finsler2d/tensor.hpp"

namespace finsler2d {

enum class MetricKind { Finsleroid, Randers, Riemannian };

std::string to_string(MetricKind kind);
MetricKind metric_kind_from_string(std::string_view s);

// Value, gradient and Hessian of a field at one point.
struct FieldSample {
  double v = 0.0;
  Vec2d grad{};
  Mat2d hess{};
};

// A scalar field together with its symbolic first and second derivatives.
class ScalarField {
 public:
  ScalarField();
  explicit ScalarField(Expression e);
  static ScalarField constant(double v);

  double operator()(const Vec2d& x) const { return expr_(x[0], x[1]); }
  FieldSample sample(const Vec2d& x) const;

  const Expression& expression() const { return expr_; }
  const Expression& d1(int i) const { return d1_[i]; }
  const Expression& d2(int i, int j) const { return d2_[i][j]; }
  bool is_constant() const { return constant_; }

 private:
  Expression expr_;
  std::array<Expression, 2> d1_;
  std::array<std::array<Expression, 2>, 2> d2_;
  bool constant_ = true;
};

struct DomainBox {
  Vec2d lo{0.0, 0.0};
  Vec2d hi{1.0, 1.0};
  bool contains(const Vec2d& x, double slack = 0.0) const {
    return x[0] >= lo[0] - slack && x[0] <= hi[0] + slack && x[1] >= lo[1] - slack &&
           x[1] <= hi[1] + slack;
  }
};

struct ManifoldSpec {
  DomainBox domain;
  MetricKind kind = MetricKind::Finsleroid;
  ScalarField a11, a12, a22;
  ScalarField bt1, bt2;
  ScalarField g = ScalarField::constant(0.0);
  ScalarField c = ScalarField::constant(1.0);
  int orientation = 1;

  const ScalarField& a(int i, int j) const { return (i == 0 && j == 0) ? a11 : (i == 1 && j == 1) ? a22 : a12; }
  const ScalarField& btilde(int i) const { return i == 0 ? bt1 : bt2; }

  // Axis norm c as used by the metric formulas; the Riemannian family has c = 1.
  bool c_is_constant() const { return kind == MetricKind::Riemannian || c.is_constant(); }
  bool g_is_constant() const { return kind != MetricKind::Finsleroid || g.is_constant(); }
};

// Field samples needed by every pointwise computation at x.
struct FieldPoint {
  Vec2d x{};
  std::array<std::array<FieldSample, 2>, 2> a;
  std::array<FieldSample, 2> bt;
  FieldSample g, c;
};

FieldPoint sample_fields(const ManifoldSpec& spec, const Vec2d& x);

struct ValidationOptions {
  int grid = 11;  // points per axis
  double unit_tolerance = 1e-9;
};

// Checks positive definiteness, unit b̃, g and c ranges on a grid. Throws ValidationError.
void validate_manifold(const ManifoldSpec& spec, const ValidationOptions& opts = {});

ManifoldSpec load_manifold(const nlohmann::json& doc, const ValidationOptions& opts = {});
ManifoldSpec load_manifold_text(std::string_view text, const ValidationOptions& opts = {});
ManifoldSpec load_manifold_file(const std::string& path, const ValidationOptions& opts = {});

nlohmann::json manifold_to_json(const ManifoldSpec& spec);

}  // namespace finsler2d
