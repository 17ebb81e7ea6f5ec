#include "finsler2d/manifold.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "finsler2d/errors.hpp"

namespace finsler2d {

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::Finsleroid:
      return "finsleroid";
    case MetricKind::Randers:
      return "randers";
    case MetricKind::Riemannian:
      return "riemannian";
  }
  return "?";
}

MetricKind metric_kind_from_string(std::string_view s) {
  if (s == "finsleroid") return MetricKind::Finsleroid;
  if (s == "randers") return MetricKind::Randers;
  if (s == "riemannian") return MetricKind::Riemannian;
  throw SchemaError("unknown metric_kind '" + std::string(s) + "'");
}

ScalarField::ScalarField() : ScalarField(Expression::constant(0.0, field_variables())) {}

ScalarField::ScalarField(Expression e) : expr_(std::move(e)) {
  for (int i = 0; i < 2; ++i) d1_[i] = diff_expression(expr_, i);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d2_[i][j] = diff_expression(d1_[i], j);
  constant_ = expr_.is_constant();
}

ScalarField ScalarField::constant(double v) {
  return ScalarField(Expression::constant(v, field_variables()));
}

FieldSample ScalarField::sample(const Vec2d& x) const {
  FieldSample s;
  s.v = expr_(x[0], x[1]);
  if (constant_) return s;
  for (int i = 0; i < 2; ++i) s.grad[i] = d1_[i](x[0], x[1]);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s.hess[i][j] = d2_[i][j](x[0], x[1]);
  return s;
}

FieldPoint sample_fields(const ManifoldSpec& spec, const Vec2d& x) {
  FieldPoint p;
  p.x = x;
  p.a[0][0] = spec.a11.sample(x);
  p.a[0][1] = spec.a12.sample(x);
  p.a[1][0] = p.a[0][1];
  p.a[1][1] = spec.a22.sample(x);
  p.bt[0] = spec.bt1.sample(x);
  p.bt[1] = spec.bt2.sample(x);
  p.g = spec.g.sample(x);
  if (spec.kind == MetricKind::Riemannian) {
    p.c.v = 1.0;
  } else {
    p.c = spec.c.sample(x);
  }
  return p;
}

void validate_manifold(const ManifoldSpec& spec, const ValidationOptions& opts) {
  const int n = std::max(opts.grid, 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double s = n == 1 ? 0.5 : static_cast<double>(i) / (n - 1);
      const double t = n == 1 ? 0.5 : static_cast<double>(j) / (n - 1);
      const Vec2d x{spec.domain.lo[0] + s * (spec.domain.hi[0] - spec.domain.lo[0]),
                    spec.domain.lo[1] + t * (spec.domain.hi[1] - spec.domain.lo[1])};
      Mat2d a;
      Vec2d bt;
      double g = 0.0, c = 1.0;
      try {
        a = {{{spec.a11(x), spec.a12(x)}, {spec.a12(x), spec.a22(x)}}};
        bt = {spec.bt1(x), spec.bt2(x)};
        if (spec.kind == MetricKind::Finsleroid) g = spec.g(x);
        if (spec.kind != MetricKind::Riemannian) c = spec.c(x);
        // Derivatives must be evaluable too: every later computation needs them.
        (void)sample_fields(spec, x);
      } catch (const EvalError& e) {
        throw ValidationError("field-evaluation", x, e.what());
      }
      const double d = det(a);
      if (!(d > 0.0) || !(a[0][0] + a[1][1] > 0.0))
        throw ValidationError("a-positive-definite", x, "det = " + std::to_string(d));
      const double norm2 = quadratic(inverse(a), bt, bt);
      if (std::abs(norm2 - 1.0) > opts.unit_tolerance)
        throw ValidationError("btilde-unit-norm", x, "a^mn b_m b_n = " + std::to_string(norm2));
      if (spec.kind == MetricKind::Finsleroid && !(g > -2.0 && g < 2.0))
        throw ValidationError("g-range", x, "g = " + std::to_string(g));
      if (spec.kind != MetricKind::Riemannian && !(c > 0.0 && c < 1.0))
        throw ValidationError("c-range", x, "c = " + std::to_string(c));
    }
  }
}

namespace {

Expression expression_field(const nlohmann::json& v, const std::string& where) {
  if (v.is_number()) return Expression::constant(v.get<double>(), field_variables());
  if (!v.is_string()) throw SchemaError(where + ": expected an expression string or a number");
  try {
    return parse_expression(v.get<std::string>());
  } catch (const Error& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

Vec2d interval(const nlohmann::json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw SchemaError(where + ": expected [lo, hi]");
  Vec2d r{v[0].get<double>(), v[1].get<double>()};
  if (!(r[0] < r[1])) throw SchemaError(where + ": empty interval");
  return r;
}

const nlohmann::json& require(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw SchemaError(std::string("missing key '") + key + "'");
  return doc.at(key);
}

}  // namespace

ManifoldSpec load_manifold(const nlohmann::json& doc, const ValidationOptions& opts) {
  if (!doc.is_object()) throw SchemaError("manifold document must be a JSON object");
  ManifoldSpec spec;

  const auto& dom = require(doc, "domain");
  if (!dom.is_object()) throw SchemaError("domain: expected an object");
  const Vec2d i1 = interval(require(dom, "x1"), "domain.x1");
  const Vec2d i2 = interval(require(dom, "x2"), "domain.x2");
  spec.domain.lo = {i1[0], i2[0]};
  spec.domain.hi = {i1[1], i2[1]};

  const auto& kind = require(doc, "metric_kind");
  if (!kind.is_string()) throw SchemaError("metric_kind: expected a string");
  spec.kind = metric_kind_from_string(kind.get<std::string>());

  const auto& a = require(doc, "a");
  if (!a.is_array() || a.size() != 2 || !a[0].is_array() || !a[1].is_array() || a[0].size() != 2 ||
      a[1].size() != 2)
    throw SchemaError("a: expected a 2x2 array");
  spec.a11 = ScalarField(expression_field(a[0][0], "a[0][0]"));
  spec.a12 = ScalarField(expression_field(a[0][1], "a[0][1]"));
  const ScalarField a21(expression_field(a[1][0], "a[1][0]"));
  spec.a22 = ScalarField(expression_field(a[1][1], "a[1][1]"));

  const auto& bt = require(doc, "btilde");
  if (!bt.is_array() || bt.size() != 2) throw SchemaError("btilde: expected a 2-array");
  spec.bt1 = ScalarField(expression_field(bt[0], "btilde[0]"));
  spec.bt2 = ScalarField(expression_field(bt[1], "btilde[1]"));

  if (spec.kind == MetricKind::Finsleroid) {
    spec.g = ScalarField(expression_field(require(doc, "g"), "g"));
  } else if (doc.contains("g")) {
    spec.g = ScalarField(expression_field(doc["g"], "g"));
  }
  if (spec.kind != MetricKind::Riemannian) {
    spec.c = ScalarField(expression_field(require(doc, "c"), "c"));
  } else if (doc.contains("c")) {
    spec.c = ScalarField(expression_field(doc["c"], "c"));
  }

  if (doc.contains("orientation")) {
    const auto& o = doc["orientation"];
    if (!o.is_number_integer() || (o.get<int>() != 1 && o.get<int>() != -1))
      throw SchemaError("orientation: expected 1 or -1");
    spec.orientation = o.get<int>();
  }

  // a must be symmetric: compare both off-diagonal entries on the grid.
  const int n = std::max(opts.grid, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double s = n == 1 ? 0.5 : static_cast<double>(i) / (n - 1);
      const double t = n == 1 ? 0.5 : static_cast<double>(j) / (n - 1);
      const Vec2d x{spec.domain.lo[0] + s * (spec.domain.hi[0] - spec.domain.lo[0]),
                    spec.domain.lo[1] + t * (spec.domain.hi[1] - spec.domain.lo[1])};
      double u = 0.0, v = 0.0;
      try {
        u = spec.a12(x);
        v = a21(x);
      } catch (const EvalError& e) {
        throw ValidationError("field-evaluation", x, e.what());
      }
      if (std::abs(u - v) > 1e-12 * std::max(1.0, std::abs(u)))
        throw ValidationError("a-symmetric", x, "a12 != a21");
    }

  validate_manifold(spec, opts);
  return spec;
}

ManifoldSpec load_manifold_text(std::string_view text, const ValidationOptions& opts) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return load_manifold(doc, opts);
}

ManifoldSpec load_manifold_file(const std::string& path, const ValidationOptions& opts) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open manifold file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_manifold_text(ss.str(), opts);
}

nlohmann::json manifold_to_json(const ManifoldSpec& spec) {
  nlohmann::json doc;
  doc["domain"] = {{"x1", {spec.domain.lo[0], spec.domain.hi[0]}}, {"x2", {spec.domain.lo[1], spec.domain.hi[1]}}};
  doc["metric_kind"] = to_string(spec.kind);
  const std::string e12 = print_expression(spec.a12.expression());
  // explicit arrays: a brace list of string pairs would become an object
  doc["a"] = nlohmann::json::array({nlohmann::json::array({print_expression(spec.a11.expression()), e12}),
                                    nlohmann::json::array({e12, print_expression(spec.a22.expression())})});
  doc["btilde"] = nlohmann::json::array({print_expression(spec.bt1.expression()), print_expression(spec.bt2.expression())});
  doc["g"] = print_expression(spec.g.expression());
  doc["c"] = print_expression(spec.c.expression());
  doc["orientation"] = spec.orientation;
  return doc;
}

}  // namespace finsler2d
