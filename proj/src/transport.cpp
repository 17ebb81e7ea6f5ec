#include "finsler2d/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

namespace finsler2d {

namespace {

const std::vector<std::string>& curve_variables() {
  static const std::vector<std::string> vars{"t"};
  return vars;
}

// State of one RK4 run: transported vectors followed by linearized companions.
using State = std::vector<Vec2d>;

State axpy(const State& y, double h, const State& k) {
  State r(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) r[i] = {y[i][0] + h * k[i][0], y[i][1] + h * k[i][1]};
  return r;
}

}  // namespace

Curve Curve::expressions(Expression x1, Expression x2) {
  Curve c;
  c.x_ = {std::move(x1), std::move(x2)};
  for (int i = 0; i < 2; ++i) c.dx_[i] = diff_expression(c.x_[i], 0);
  return c;
}

Curve Curve::parse(std::string_view x1, std::string_view x2) {
  return expressions(parse_expression(x1, curve_variables()), parse_expression(x2, curve_variables()));
}

Curve Curve::polyline(std::vector<Vec2d> points) {
  if (points.size() < 2) throw SchemaError("polyline needs at least two points");
  Curve c;
  c.points_ = std::move(points);
  return c;
}

Curve Curve::from_json(const nlohmann::json& j) {
  if (j.contains("polyline")) {
    std::vector<Vec2d> pts;
    for (const auto& p : j.at("polyline")) {
      if (!p.is_array() || p.size() != 2) throw SchemaError("polyline points must be [x1, x2]");
      pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return polyline(std::move(pts));
  }
  if (!j.contains("x1") || !j.contains("x2")) throw SchemaError("curve needs x1 and x2 expressions or a polyline");
  return parse(j.at("x1").get<std::string>(), j.at("x2").get<std::string>());
}

nlohmann::json Curve::to_json() const {
  nlohmann::json j;
  if (is_polyline()) {
    j["polyline"] = nlohmann::json::array();
    for (const Vec2d& p : points_) j["polyline"].push_back({p[0], p[1]});
  } else {
    j["x1"] = print_expression(x_[0]);
    j["x2"] = print_expression(x_[1]);
  }
  return j;
}

Vec2d Curve::position(double t) const {
  if (!is_polyline()) {
    const double v[1] = {t};
    return {x_[0].evaluate(v), x_[1].evaluate(v)};
  }
  const double n = static_cast<double>(segments());
  const double s = std::clamp(t, 0.0, 1.0) * n;
  const std::size_t i = std::min(static_cast<std::size_t>(s), segments() - 1);
  const double u = s - static_cast<double>(i);
  const Vec2d& a = points_[i];
  const Vec2d& b = points_[i + 1];
  return {a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1])};
}

Vec2d Curve::velocity(double t, int side) const {
  if (!is_polyline()) {
    const double v[1] = {t};
    return {dx_[0].evaluate(v), dx_[1].evaluate(v)};
  }
  const double n = static_cast<double>(segments());
  const double s = std::clamp(t, 0.0, 1.0) * n;
  double fl = std::floor(s);
  if (side < 0 && std::abs(s - std::round(s)) < 1e-9 * n) fl = std::round(s) - 1.0;
  const std::size_t i = static_cast<std::size_t>(std::clamp(fl, 0.0, n - 1.0));
  const Vec2d& a = points_[i];
  const Vec2d& b = points_[i + 1];
  return {n * (b[0] - a[0]), n * (b[1] - a[1])};
}

TransportResult horizontal_lift(const ManifoldSpec& spec, const Curve& curve, const std::vector<Vec2d>& y0,
                                const KChoice& kc, int steps, const TransportOptions& opt) {
  if (steps < 2) throw ParamRange("transport needs at least 2 steps");
  if (y0.empty()) throw ParamRange("transport needs at least one vector");
  for (const Vec2d& y : y0)
    if (y[0] == 0.0 && y[1] == 0.0) throw ZeroVector();

  const std::size_t nv = y0.size();
  const std::size_t nw = opt.linearized && nv >= 2 ? nv - 1 : 0;
  const double h = 1.0 / steps;
  const int stride = opt.diagnostic_stride > 0 ? opt.diagnostic_stride : std::max(1, steps / 200);

  std::vector<double> norm0(nv);
  for (std::size_t a = 0; a < nv; ++a) norm0[a] = norm(y0[a]);

  TransportResult res;
  res.stats.steps = steps;
  res.stats.h = h;

  // Each stage stays on the θ branch its step started from (refs), so the right-hand side is
  // smooth within a step even when ∂θ^max/∂x jumps across the cut.
  std::vector<int> refs(nv, 0);
  auto rhs = [&](double t, int side, const State& s) {
    const Vec2d x = curve.position(t);
    if (!spec.domain.contains(x, 1e-12)) throw LeftDomain(t);
    const Vec2d v = curve.velocity(t, side);
    const PointContext pc = point_context(spec, x, kc);
    State d(s.size());
    for (std::size_t a = 0; a < nv; ++a) {
      const bool need_lin = a < nw;
      ConnectionOptions co = opt.connection;
      co.theta_branch = continued_branch(refs[a], pc.frame, s[a]);
      const ConnectionJet cj = need_lin ? derivative_coeffs(pc, s[a], co) : connection_coeffs(pc, s[a], co);
      ++res.stats.rhs_evaluations;
      for (int k = 0; k < 2; ++k) d[a][k] = cj.N[k][0] * v[0] + cj.N[k][1] * v[1];
      if (need_lin) {
        const Vec2d& w = s[nv + a];
        for (int k = 0; k < 2; ++k) {
          double acc = 0.0;
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) acc += cj.Nnm[k][i][j] * v[i] * w[j];
          d[nv + a][k] = acc;
        }
      }
    }
    return d;
  };

  // Diagnostics at a grid point.
  std::vector<double> F0(nv), th0(nv), ip0(nw), raw0(nv > 1 ? nv - 1 : 0);
  std::vector<double> unwrap(nv, 0.0);  // θ^max(x) added at each crossing of the cut
  res.F_drift.assign(nv, 0.0);
  auto diagnose = [&](double t, const State& s, bool first) {
    const Vec2d x = curve.position(t);
    Frame<double> f = frame_at(spec, x);
    TransportSample smp;
    smp.t = t;
    smp.x = x;
    smp.y.assign(s.begin(), s.begin() + static_cast<long>(nv));
    for (std::size_t a = 0; a < nv; ++a) {
      const MetricJet<double> j = metric_jet(spec.kind, f, s[a]);
      const double th = theta_in_frame(spec.kind, f, s[a], opt.connection.quadrature);
      smp.F.push_back(j.F);
      smp.theta.push_back(th);
      if (a + 1 < nv) {
        double raw = 0.0, ip = 0.0;
        for (int i = 0; i < 2; ++i) {
          raw += j.y_lo[i] * s[a + 1][i];
          if (a < nw) ip += j.y_lo[i] * s[nv + a][i];
        }
        if (first) {
          raw0[a] = raw;
          if (a < nw) ip0[a] = ip;
        } else {
          res.raw_inner_product_change = std::max(res.raw_inner_product_change, std::abs(raw - raw0[a]));
          if (a < nw) res.inner_product_drift = std::max(res.inner_product_drift, std::abs(ip - ip0[a]));
        }
      }
      if (first) {
        F0[a] = j.F;
        th0[a] = th;
      } else {
        res.F_drift[a] = std::max(res.F_drift[a], std::abs(j.F - F0[a]));
      }
    }
    if (!first)
      for (std::size_t a = 0; a < nv; ++a)
        for (std::size_t b = a + 1; b < nv; ++b) {
          const double d = (smp.theta[b] + unwrap[b] - smp.theta[a] - unwrap[a]) - (th0[b] - th0[a]);
          res.theta_pair_drift = std::max(res.theta_pair_drift, std::abs(d));
        }
    ++res.stats.diagnostic_points;
    if (opt.keep_samples) res.samples.push_back(std::move(smp));
  };

  State s(y0.begin(), y0.end());
  for (std::size_t a = 0; a < nw; ++a) s.push_back(y0[a + 1]);
  diagnose(0.0, s, true);

  auto rk4 = [&](double t, double H, const State& y) {
    const State k1 = rhs(t, 1, y);
    const State k2 = rhs(t + 0.5 * H, 1, axpy(y, 0.5 * H, k1));
    const State k3 = rhs(t + 0.5 * H, 1, axpy(y, 0.5 * H, k2));
    const State k4 = rhs(t + H, -1, axpy(y, H, k3));
    State r = y;
    for (std::size_t i = 0; i < r.size(); ++i)
      for (int k = 0; k < 2; ++k) r[i][k] += H / 6.0 * (k1[i][k] + 2.0 * k2[i][k] + 2.0 * k3[i][k] + k4[i][k]);
    return r;
  };
  auto n_dot = [&](double t, const Vec2d& y) { return dot(frame_at(spec, curve.position(t)).n, y); };

  // Vector a meets the cut at t: record the θ jump and move w_a across the switching
  // surface n·y = 0 (saltation by the jump of the right-hand side).
  auto cross = [&](double t, std::size_t a, int from) {
    const Vec2d x = curve.position(t);
    const Vec2d v = curve.velocity(t, 1);
    const PointContext pc = point_context(spec, x, kc);
    unwrap[a] += from * theta_bounds(spec, x, opt.connection.quadrature).theta_max;
    ++res.stats.cut_crossings;
    if (a >= nw) return;
    const Vec2d dmax = theta_max_dx(spec.kind, pc.frame2, opt.connection.quadrature);
    const double jump_rate = from * (dmax[0] * v[0] + dmax[1] * v[1]);
    if (jump_rate == 0.0) return;
    const MetricJet<double> j = metric_jet(spec.kind, pc.frame, s[a]);
    ConnectionOptions co = opt.connection;
    if (cut_side(pc.frame, s[a]) != from) co.theta_branch = from;
    const ConnectionJet cj = connection_coeffs(pc, s[a], co);
    Vec2d f_old{}, dn_dt{};
    for (int k = 0; k < 2; ++k) f_old[k] = cj.N[k][0] * v[0] + cj.N[k][1] * v[1];
    for (int i = 0; i < 2; ++i) dn_dt[i] = pc.frame2.n[i].d[0] * v[0] + pc.frame2.n[i].d[1] * v[1];
    const Vec2d& n = pc.frame.n;
    const double denom = dot(dn_dt, s[a]) + dot(n, f_old);
    if (denom == 0.0) return;
    const double proj = dot(n, s[nv + a]) / denom;
    for (int k = 0; k < 2; ++k) s[nv + a][k] += j.F * j.m_up[k] * jump_rate * proj;
  };

  for (int step = 0; step < steps; ++step) {
    double t = step * h, rem = h;
    const Frame<double> f0 = frame_at(spec, curve.position(t));
    for (std::size_t a = 0; a < nv; ++a) refs[a] = cut_side(f0, s[a]);
    for (int events = 0;; ++events) {
      State trial = rk4(t, rem, s);
      const Frame<double> fe = frame_at(spec, curve.position(t + rem));
      double first = rem;
      std::size_t who = nv;
      if (events < 8)
        for (std::size_t a = 0; a < nv; ++a) {
          if (refs[a] == 0 || cut_side(fe, trial[a]) != -refs[a]) continue;
          auto g = [&](double sig) { return n_dot(t + sig, sig == 0.0 ? s[a] : rk4(t, sig, s)[a]); };
          std::uintmax_t iters = 60;
          const auto [lo, hi] =
              boost::math::tools::toms748_solve(g, 0.0, rem, boost::math::tools::eps_tolerance<double>(48), iters);
          const double sig = 0.5 * (lo + hi);
          if (sig < first) {
            first = sig;
            who = a;
          }
        }
      if (who == nv) {
        s = std::move(trial);
        break;
      }
      s = rk4(t, first, s);
      t += first;
      rem -= first;
      const int from = refs[who];
      cross(t, who, from);
      const Frame<double> fc = frame_at(spec, curve.position(t));
      for (std::size_t a = 0; a < nv; ++a) refs[a] = cut_side(fc, s[a]);
      refs[who] = -from;
      if (rem <= 0.0) break;
    }
    const double tn = (step + 1) * h;
    for (std::size_t a = 0; a < nv; ++a) {
      const double r = norm(s[a]) / norm0[a];
      if (!std::isfinite(r) || r < 1e-8 || r > 1e8) throw BlowUp(tn);
    }
    if ((step + 1) % stride == 0 || step + 1 == steps) diagnose(tn, s, false);
  }

  res.y_final.assign(s.begin(), s.begin() + static_cast<long>(nv));
  for (double d : res.F_drift) res.max_F_drift = std::max(res.max_F_drift, d);
  res.order = std::numeric_limits<double>::quiet_NaN();
  return res;
}

TransportResult transport_report(const ManifoldSpec& spec, const Curve& curve, const std::vector<Vec2d>& y0,
                                 const KChoice& kc, int steps, const TransportOptions& opt) {
  if (y0.size() < 2) throw ParamRange("transport_report needs at least two vectors");
  TransportResult res = horizontal_lift(spec, curve, y0, kc, steps, opt);

  TransportOptions light = opt;
  light.keep_samples = false;
  light.linearized = false;
  light.diagnostic_stride = std::numeric_limits<int>::max();
  std::array<std::vector<Vec2d>, 3> ends;
  int n = std::max(2, opt.order_base_steps);
  for (int r = 0; r < 3; ++r, n *= 2) {
    res.order_steps[r] = n;
    ends[r] = horizontal_lift(spec, curve, y0, kc, n, light).y_final;
  }
  auto diff = [&](const std::vector<Vec2d>& a, const std::vector<Vec2d>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max({m, std::abs(a[i][0] - b[i][0]), std::abs(a[i][1] - b[i][1])});
    return m;
  };
  res.order_differences = {diff(ends[0], ends[1]), diff(ends[1], ends[2])};
  if (res.order_differences[0] > 0.0 && res.order_differences[1] > 0.0)
    res.order = std::log2(res.order_differences[0] / res.order_differences[1]);
  return res;
}

}  // namespace finsler2d
