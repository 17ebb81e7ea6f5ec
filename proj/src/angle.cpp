#include "finsler2d/angle.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <numbers>

#include "finsler2d/dual.hpp"
#include "finsler2d/fd.hpp"

namespace finsler2d {

namespace {

constexpr double kPi = std::numbers::pi;

double family_c(MetricKind kind, const Frame<double>& f) { return kind == MetricKind::Riemannian ? 1.0 : f.c; }

Frame<double> checked_frame(const ManifoldSpec& spec, const Vec2d& x) {
  Frame<double> f = frame_at(spec, x);
  check_family_params(spec.kind, f);
  return f;
}

void require_nonzero(const Vec2d& y) {
  if (y[0] == 0.0 && y[1] == 0.0) throw ZeroVector();
}

Vec2d arc_tangent(const Frame<double>& f, double phi) {
  return {-std::sin(phi) * f.bt_up[0] + std::cos(phi) * f.n_up[0],
          -std::sin(phi) * f.bt_up[1] + std::cos(phi) * f.n_up[1]};
}

// Integrands over w̃ ∈ [0, ∞) for the two quarter bounds.
double finsleroid_wtilde_density(double g, double c, double wt) {
  const double w = std::sqrt(wt * wt + (1.0 - c * c) / (c * c));
  return std::sqrt(1.0 + (1.0 - c * c) * g / w) / (1.0 + g * w + w * w) / c;
}

// sign = +1 on the b > 0 side, -1 on the b < 0 side.
double randers_wtilde_density(double c, double wt, double sign) {
  const double r = std::sqrt(1.0 / (c * c) + wt * wt);
  return 1.0 / (c * std::pow(r, 1.5) * std::sqrt(r + sign));
}

template <class Fn>
double integrate_half_line(Fn&& density, const QuadratureOptions& opt) {
  // w̃ = tan u maps [0, ∞) onto [0, π/2).
  auto mapped = [&](double u) {
    const double cu = std::cos(u);
    return density(std::tan(u)) / (cu * cu);
  };
  return integrate_adaptive(mapped, 0.0, kPi / 2, opt).value;
}

}  // namespace

std::string to_string(ChartId id) {
  switch (id) {
    case ChartId::C1: return "C1";
    case ChartId::C2: return "C2";
    case ChartId::C3: return "C3";
    case ChartId::C4: return "C4";
  }
  return "?";
}

ChartId chart_of(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y) {
  require_nonzero(y);
  const Frame<double> f = frame_at(spec, x);
  const double b = family_c(spec.kind, f) * dot(f.bt, y);
  const double n = dot(f.n, y);
  if (b > 0.0 && b >= std::abs(n)) return ChartId::C1;
  if (b < 0.0 && -b >= std::abs(n)) return ChartId::C4;
  return n > 0.0 ? ChartId::C2 : ChartId::C3;
}

double theta_in_frame(MetricKind kind, const Frame<double>& f, const Vec2d& y, const QuadratureOptions& opt,
                      int branch) {
  require_nonzero(y);
  const double phi = polar_angle(f, y) + 2.0 * kPi * branch;
  const double c = family_c(kind, f);
  auto h = [&](double p) { return arc_density<double>(kind, f.g, c, p); };
  return integrate_adaptive(h, 0.0, phi, opt).value;
}

int cut_side(const Frame<double>& f, const Vec2d& y) {
  if (dot(f.bt, y) >= 0.0) return 0;
  return dot(f.n, y) >= 0.0 ? 1 : -1;
}

int continued_branch(int ref_side, const Frame<double>& f, const Vec2d& y) {
  const int s = cut_side(f, y);
  return ref_side != 0 && s != 0 && s != ref_side ? ref_side : 0;
}

double theta(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y, const QuadratureOptions& opt) {
  return theta_in_frame(spec.kind, checked_frame(spec, x), y, opt);
}

AngleBounds theta_bounds(const ManifoldSpec& spec, const Vec2d& x, const QuadratureOptions& opt) {
  const Frame<double> f = checked_frame(spec, x);
  AngleBounds r;
  switch (spec.kind) {
    case MetricKind::Riemannian:
      r.theta_I = r.theta_II = kPi / 2;
      break;
    case MetricKind::Finsleroid:
      r.theta_I = integrate_half_line([&](double wt) { return finsleroid_wtilde_density(f.g, f.c, wt); }, opt);
      r.theta_II = integrate_half_line([&](double wt) { return finsleroid_wtilde_density(-f.g, f.c, wt); }, opt);
      break;
    case MetricKind::Randers:
      r.theta_I = integrate_half_line([&](double wt) { return randers_wtilde_density(f.c, wt, 1.0); }, opt);
      r.theta_II = integrate_half_line([&](double wt) { return randers_wtilde_density(f.c, wt, -1.0); }, opt);
      break;
  }
  r.theta_max = 2.0 * (r.theta_I + r.theta_II);
  return r;
}

Vec2d theta_max_dx(MetricKind kind, const Frame<Dual<double, 2>>& f2, const QuadratureOptions& opt) {
  Vec2d r{};
  if (kind == MetricKind::Riemannian) return r;
  for (int k = 0; k < 2; ++k) {
    if (f2.g.d[k] == 0.0 && f2.c.d[k] == 0.0) continue;
    auto h = [&](double p) { return arc_density<Dual<double, 2>>(kind, f2.g, f2.c, p).d[k]; };
    r[k] = 2.0 * integrate_adaptive(h, 0.0, kPi, opt).value;
  }
  return r;
}

AngleBounds theta_bounds_arc(const ManifoldSpec& spec, const Vec2d& x, const QuadratureOptions& opt) {
  const Frame<double> f = checked_frame(spec, x);
  const double c = family_c(spec.kind, f);
  auto h = [&](double p) { return arc_density<double>(spec.kind, f.g, c, p); };
  AngleBounds r;
  r.theta_I = integrate_adaptive(h, 0.0, kPi / 2, opt).value;
  r.theta_II = integrate_adaptive(h, kPi / 2, kPi, opt).value;
  r.theta_max = 2.0 * (r.theta_I + r.theta_II);
  return r;
}

double theta_g_sensitivity(MetricKind kind, const Frame<double>& f, const Vec2d& y, const QuadratureOptions& opt) {
  if (kind != MetricKind::Finsleroid) return 0.0;
  using D = Dual<double, 1>;
  const D g = D::variable(f.g, 0);
  const D c(f.c);
  auto dh = [&](double p) { return arc_density<D>(kind, g, c, p).d[0]; };
  return integrate_adaptive(dh, 0.0, polar_angle(f, y), opt).value;
}

double theta_c_sensitivity(MetricKind kind, const Frame<double>& f, const Vec2d& y, const QuadratureOptions& opt) {
  if (kind == MetricKind::Riemannian) return 0.0;
  using D = Dual<double, 1>;
  const D g(f.g);
  const D c = D::variable(f.c, 0);
  auto dh = [&](double p) { return arc_density<D>(kind, g, c, p).d[0]; };
  return integrate_adaptive(dh, 0.0, polar_angle(f, y), opt).value;
}

Vec2d dtheta_dx(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y, DThetaRoute route,
                const QuadratureOptions& opt) {
  require_nonzero(y);
  if (route == DThetaRoute::FiniteDifference) {
    const QuadratureOptions tight = oracle_quadrature();
    const int side = cut_side(checked_frame(spec, x), y);
    auto th = [&](const Vec2d& p) {
      const Frame<double> f = checked_frame(spec, p);
      return theta_in_frame(spec.kind, f, y, tight, continued_branch(side, f, y));
    };
    const double h = 1e-3;
    return {fd_partial4(th, x, 0, h), fd_partial4(th, x, 1, h)};
  }
  const FieldPoint fp = sample_fields(spec, x);
  const Frame<double> f = make_frame<double>(fp, spec.orientation);
  check_family_params(spec.kind, f);
  return dtheta_dx_at(spec, x, f, make_frame<Dual<double, 2>>(fp, spec.orientation), y, route, opt);
}

Vec2d dtheta_dx_at(const ManifoldSpec& spec, const Vec2d& x, const Frame<double>& f,
                   const Frame<Dual<double, 2>>& fd, const Vec2d& y, DThetaRoute route,
                   const QuadratureOptions& opt) {
  require_nonzero(y);
  const bool varying_c = !spec.c_is_constant();
  if (route == DThetaRoute::Auto) route = varying_c ? DThetaRoute::Arc : DThetaRoute::Closed;
  if (route == DThetaRoute::FiniteDifference) return dtheta_dx(spec, x, y, route, opt);

  const double phig = spec.g_is_constant() ? 0.0 : theta_g_sensitivity(spec.kind, f, y, opt);
  Vec2d r{};

  if (route == DThetaRoute::Closed) {
    if (varying_c) throw UnsupportedVaryingC();
    const MetricJet<double> j = metric_jet(spec.kind, f, y);
    const double c = family_c(spec.kind, f);
    const double coef = c * j.Tf * j.S * j.S / (j.F * j.F);
    for (int n = 0; n < 2; ++n) {
      double gy = 0.0;
      for (int k = 0; k < 2; ++k)
        for (int m = 0; m < 2; ++m) gy += f.gamma[k][n][m] * y[m] * j.m[k];
      r[n] = phig * f.dg[n] - coef * f.phat[n] + gy / j.F;
    }
    return r;
  }

  // Arc route: θ = ∫_0^{φ(x,y)} h(g(x), c(x), φ) dφ.
  using D2 = Dual<double, 2>;
  const Vec2<D2> yv{D2(y[0]), D2(y[1])};
  const D2 phi = atan2(dot(fd.n, yv), dot(fd.bt, yv));
  const double phic = theta_c_sensitivity(spec.kind, f, y, opt);
  const double hy = arc_density<double>(spec.kind, f.g, family_c(spec.kind, f), phi.v);
  for (int n = 0; n < 2; ++n) {
    const double dc = spec.kind == MetricKind::Riemannian ? 0.0 : f.dc[n];
    r[n] = phig * f.dg[n] + phic * dc + hy * phi.d[n];
  }
  return r;
}

double two_vector_angle(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y1, const Vec2d& y2,
                        const QuadratureOptions& opt) {
  const Frame<double> f = checked_frame(spec, x);
  return theta_in_frame(spec.kind, f, y2, opt) - theta_in_frame(spec.kind, f, y1, opt);
}

double sector_area(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y1, const Vec2d& y2,
                   const QuadratureOptions& opt) {
  require_nonzero(y1);
  require_nonzero(y2);
  const Frame<double> f = checked_frame(spec, x);
  const double p1 = polar_angle(f, y1);
  double p2 = polar_angle(f, y2);
  if (p2 == p1) return 0.0;
  if (p2 < p1) p2 += 2.0 * kPi;

  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  auto slice = [&](double phi) {
    const Vec2d u = arc_point(f, phi), du = arc_tangent(f, phi);
    const double jac = std::abs(u[0] * du[1] - u[1] * du[0]);
    // Radius of the indicatrix along u.
    auto residual = [&](double r) { return metric_jet(spec.kind, f, Vec2d{r * u[0], r * u[1]}).F - 1.0; };
    const double r0 = 1.0 / std::max(metric_jet(spec.kind, f, u).F, 1e-300);
    std::uintmax_t iters = 100;
    const auto [lo, hi] = boost::math::tools::toms748_solve(residual, 0.5 * r0, 2.0 * r0,
                                                            boost::math::tools::eps_tolerance<double>(50), iters);
    const double R = 0.5 * (lo + hi);
    auto radial = [&](double r) {
      const MetricJet<double> j = metric_jet(spec.kind, f, Vec2d{r * u[0], r * u[1]});
      return std::sqrt(det(j.g)) * r;
    };
    return jac * GK::integrate(radial, 0.0, R, 0, 0.0);
  };
  return integrate_adaptive(slice, p1, p2, opt).value;
}

double indicatrix_arclength(const ManifoldSpec& spec, const Vec2d& x, const QuadratureOptions& opt) {
  const Frame<double> f = checked_frame(spec, x);
  auto ds = [&](double phi) {
    const Vec2d u = arc_point(f, phi), du = arc_tangent(f, phi);
    const MetricJet<double> j = metric_jet(spec.kind, f, u);
    const double dF = dot(j.l, du);
    Vec2d dl;
    for (int i = 0; i < 2; ++i) dl[i] = du[i] / j.F - u[i] * dF / (j.F * j.F);
    return std::sqrt(quadratic(j.g, dl, dl));
  };
  return integrate_adaptive(ds, -kPi, kPi, opt).value;
}

std::vector<IndicatrixSample> indicatrix_sweep(const ManifoldSpec& spec, const Vec2d& x, int count,
                                               const QuadratureOptions& opt) {
  const Frame<double> f = checked_frame(spec, x);
  std::vector<IndicatrixSample> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) {
    IndicatrixSample s;
    s.phi = -kPi + 2.0 * kPi * (k + 1) / count;
    const Vec2d u = arc_point(f, s.phi);
    const double Fu = metric_jet(spec.kind, f, u).F;
    s.y = {u[0] / Fu, u[1] / Fu};
    s.F = metric_jet(spec.kind, f, s.y).F;
    s.theta = theta_in_frame(spec.kind, f, s.y, opt);
    out.push_back(s);
  }
  return out;
}

Mat2d coordinate_metric(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y) {
  const Frame<double> f = checked_frame(spec, x);
  const QuadratureOptions tight = oracle_quadrature();
  const double h = 1e-3 * norm(y);
  auto Fy = [&](const Vec2d& v) { return metric_jet(spec.kind, f, v).F; };
  const int side = cut_side(f, y);
  auto thy = [&](const Vec2d& v) { return theta_in_frame(spec.kind, f, v, tight, continued_branch(side, f, v)); };
  Mat2d J;  // J[A][i] = ∂z^A/∂y^i with z = (F, θ)
  for (int i = 0; i < 2; ++i) {
    J[0][i] = fd_partial4(Fy, y, i, h);
    J[1][i] = fd_partial4(thy, y, i, h);
  }
  const Mat2d Ji = inverse(J);  // Ji[i][A] = ∂y^i/∂z^A
  const MetricJet<double> j = metric_jet(spec.kind, f, y);
  Mat2d G{};
  for (int A = 0; A < 2; ++A)
    for (int B = 0; B < 2; ++B)
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) G[A][B] += j.g[i][k] * Ji[i][A] * Ji[k][B];
  return G;
}

double chart_theta_tilde(MetricKind kind, double g, double c, double w_tilde, const QuadratureOptions& opt) {
  switch (kind) {
    case MetricKind::Finsleroid:
      return integrate_adaptive([&](double wt) { return finsleroid_wtilde_density(g, c, wt); }, 0.0, w_tilde, opt)
          .value;
    case MetricKind::Randers:
      return integrate_adaptive([&](double wt) { return randers_wtilde_density(c, wt, 1.0); }, 0.0, w_tilde, opt)
          .value;
    case MetricKind::Riemannian:
      return std::atan(w_tilde);
  }
  return 0.0;
}

double chart_dtheta_dwtilde(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y) {
  const Frame<double> f = checked_frame(spec, x);
  const MetricJet<double> j = metric_jet(spec.kind, f, y);
  const double b2 = j.b * j.b;
  switch (spec.kind) {
    case MetricKind::Finsleroid:
      return b2 / j.fs.B * std::sqrt(j.fs.nu / j.q) / f.c;
    case MetricKind::Randers:
      return b2 * j.Tf / (j.F * j.F);
    case MetricKind::Riemannian:
      return b2 / (j.S * j.S);
  }
  return 0.0;
}

double chart_dtheta_dt(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y) {
  if (spec.kind != MetricKind::Finsleroid) throw ParamRange("the t-chart derivative is defined for the finsleroid");
  const Frame<double> f = checked_frame(spec, x);
  const MetricJet<double> j = metric_jet(spec.kind, f, y);
  const double q3 = j.q * j.q * j.q;
  return q3 / (std::abs(j.n_y) * j.fs.B) * std::sqrt(j.fs.nu / j.q) / f.c;
}

}  // namespace finsler2d
