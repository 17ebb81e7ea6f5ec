#include "finsler2d/finsler.hpp"

#include <cmath>
#include <limits>

namespace finsler2d {

void check_family_params(MetricKind kind, const Frame<double>& f) {
  if (kind == MetricKind::Riemannian) return;
  if (!(f.c > 0.0 && f.c < 1.0)) throw DegenerateC(f.c);
  if (kind == MetricKind::Finsleroid && !(f.g > -2.0 && f.g < 2.0))
    throw ParamRange("Finsleroid charge g = " + std::to_string(f.g) + " outside (-2, 2)");
}

MetricJet<double> metric_at(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y) {
  const Frame<double> f = frame_at(spec, x);
  check_family_params(spec.kind, f);
  return metric_jet(spec.kind, f, y);
}

Primitives primitives(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y) {
  if (y[0] == 0.0 && y[1] == 0.0) throw ZeroVector();
  const Frame<double> f = frame_at(spec, x);
  const double c = spec.kind == MetricKind::Riemannian ? 1.0 : f.c;
  if (!(c > 0.0 && c < 1.0)) throw DegenerateC(c);
  Primitives p;
  const double bt = dot(f.bt, y);
  p.b = c * bt;
  p.n = dot(f.n, y);
  p.S = std::sqrt(quadratic(f.a, y, y));
  p.q = std::sqrt((1.0 - c * c) * bt * bt + p.n * p.n);
  p.w_tilde = p.b != 0.0 ? p.n / p.b : std::copysign(std::numeric_limits<double>::infinity(), p.n);
  p.w = p.b != 0.0 ? p.q / std::abs(p.b) : std::numeric_limits<double>::infinity();
  p.t = p.n > 0.0 ? -p.b / p.q : p.b / p.q;
  return p;
}

std::pair<FinsleroidScalars<double>, MetricJet<double>> finsleroid_jet(const ManifoldSpec& spec, const Vec2d& x,
                                                                       const Vec2d& y) {
  if (spec.kind != MetricKind::Finsleroid) throw ParamRange("finsleroid_jet needs a finsleroid spec");
  auto j = metric_at(spec, x, y);
  return {j.fs, j};
}

MetricJet<double> randers_jet(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y) {
  if (spec.kind != MetricKind::Randers) throw ParamRange("randers_jet needs a randers spec");
  return metric_at(spec, x, y);
}

double metric_function(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y) {
  return metric_at(spec, x, y).F;
}

Mat2d metric_from_F(const FEvaluator& F, const Vec2d& y, double rel_step) {
  const double h = rel_step * norm(y);
  if (!(h > 1e3 * std::numeric_limits<double>::min()) || h < 8.0 * std::numeric_limits<double>::epsilon() * norm(y))
    throw StepUnderflow("metric_from_F: step underflow");
  auto E = [&](double d0, double d1) {
    const double f = F({y[0] + d0, y[1] + d1});
    return 0.5 * f * f;
  };
  Mat2d g{};
  const double e0 = E(0, 0);
  g[0][0] = (E(h, 0) - 2.0 * e0 + E(-h, 0)) / (h * h);
  g[1][1] = (E(0, h) - 2.0 * e0 + E(0, -h)) / (h * h);
  g[0][1] = g[1][0] = (E(h, h) - E(h, -h) - E(-h, h) + E(-h, -h)) / (4.0 * h * h);
  return g;
}

CartanData cartan(const MetricJet<double>& j) {
  CartanData c{};
  for (int i = 0; i < 2; ++i) {
    c.A[i] = j.I * j.m[i];
    c.A_up[i] = j.I * j.m_up[i];
  }
  c.AA = dot(c.A, c.A_up);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) c.A_ijk[i][k][l] = j.I * j.m[i] * j.m[k] * j.m[l];
  return c;
}

}  // namespace finsler2d
