#include "finsler2d/connection.hpp"

#include <cmath>

namespace finsler2d {

namespace {

Frame<double> checked_frame(const ManifoldSpec& spec, const Vec2d& x) {
  Frame<double> f = frame_at(spec, x);
  check_family_params(spec.kind, f);
  return f;
}

bool finsleroid_const_c(const ManifoldSpec& spec) {
  return spec.kind == MetricKind::Finsleroid && spec.c_is_constant();
}

int digit(std::size_t comp, std::size_t rank, std::size_t pos) {
  return static_cast<int>((comp >> (rank - 1 - pos)) & 1u);
}

std::size_t with_digit(std::size_t comp, std::size_t rank, std::size_t pos, int v) {
  const std::size_t bit = std::size_t{1} << (rank - 1 - pos);
  return v ? (comp | bit) : (comp & ~bit);
}

}  // namespace

std::string to_string(const KChoice& k) {
  switch (k.mode) {
    case KChoice::Mode::Frame: return k.sign < 0 ? "frame(-1)" : "frame(+1)";
    case KChoice::Mode::Zero: return "zero";
    case KChoice::Mode::User: return "user";
  }
  return "?";
}

KChoice k_choice_from_string(std::string_view s) {
  if (s == "frame" || s == "frame(-1)") return KChoice::frame(-1);
  if (s == "frame(+1)") return KChoice::frame(1);
  if (s == "zero") return KChoice::zero();
  if (s.substr(0, 5) == "user:") {
    const std::string_view body = s.substr(5);
    const std::size_t semi = body.find(';');
    if (semi == std::string_view::npos) throw SchemaError("user k needs two expressions separated by ';'");
    return KChoice::user(parse_expression(body.substr(0, semi)), parse_expression(body.substr(semi + 1)));
  }
  throw SchemaError("unknown k choice '" + std::string(s) + "'");
}

namespace {

KField k_from_frame(const Frame<D2>& f, const Vec2d& x, const KChoice& kc) {
  KField r;
  switch (kc.mode) {
    case KChoice::Mode::Zero:
      break;
    case KChoice::Mode::User: {
      const FieldSample s[2] = {kc.k1.sample(x), kc.k2.sample(x)};
      for (int j = 0; j < 2; ++j) {
        r.k[j] = s[j].v;
        for (int i = 0; i < 2; ++i) r.dk[i][j] = s[j].grad[i];
      }
      break;
    }
    case KChoice::Mode::Frame: {
      const double s = kc.sign >= 0 ? 1.0 : -1.0;
      for (int j = 0; j < 2; ++j) {
        r.k[j] = s * f.phat[j].v;
        for (int i = 0; i < 2; ++i) r.dk[i][j] = s * f.phat[j].d[i];
      }
      break;
    }
  }
  return r;
}

Vec2d dK_dx_in_frame(const Frame<double>& f, const MetricJet<double>& j, const Vec2d& y) {
  const auto& s = j.fs;
  Vec2d r{};
  for (int n = 0; n < 2; ++n) {
    const double star = 0.5 * s.Mbar * s.K * f.dg[n];
    const double pn = f.c * f.phat[n];
    double ayl = 0.0;
    for (int k = 0; k < 2; ++k)
      for (int m = 0; m < 2; ++m) ayl += f.gamma[k][n][m] * y[m] * j.l[k];
    r[n] = star + s.K / s.B * f.g * j.n_y * j.q * pn + ayl;
  }
  return r;
}

}  // namespace

KField k_field(const ManifoldSpec& spec, const Vec2d& x, const KChoice& kc) {
  if (kc.mode != KChoice::Mode::Frame) return k_from_frame(Frame<D2>{}, x, kc);
  return k_from_frame(make_frame<D2>(sample_fields(spec, x), spec.orientation), x, kc);
}

PointContext point_context(const ManifoldSpec& spec, const Vec2d& x, const KChoice& kc) {
  PointContext pc;
  pc.spec = &spec;
  pc.x = x;
  pc.fields = sample_fields(spec, x);
  pc.frame = make_frame<double>(pc.fields, spec.orientation);
  check_family_params(spec.kind, pc.frame);
  pc.frame2 = make_frame<D2>(pc.fields, spec.orientation);
  pc.k = k_from_frame(pc.frame2, x, kc);
  return pc;
}

MetricJet<D4> metric_jet_d4(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y) {
  const Frame<D4> f = make_frame<D4>(sample_fields(spec, x), spec.orientation);
  if (spec.kind != MetricKind::Riemannian && !(f.c.v > 0.0 && f.c.v < 1.0)) throw DegenerateC(f.c.v);
  const Vec2<D4> yv{D4::variable(y[0], 2), D4::variable(y[1], 3)};
  return metric_jet(spec.kind, f, yv);
}

MetricJet<double> primal_jet(const MetricJet<D4>& j) {
  MetricJet<double> r;
  r.F = j.F.v;
  r.S = j.S.v;
  r.bt_y = j.bt_y.v;
  r.n_y = j.n_y.v;
  r.b = j.b.v;
  r.q = j.q.v;
  for (int i = 0; i < 2; ++i) {
    r.u[i] = j.u[i].v;
    r.l[i] = j.l[i].v;
    r.l_up[i] = j.l_up[i].v;
    r.y_lo[i] = j.y_lo[i].v;
    r.m[i] = j.m[i].v;
    r.m_up[i] = j.m_up[i].v;
    for (int k = 0; k < 2; ++k) {
      r.g[i][k] = j.g[i][k].v;
      r.g_up[i][k] = j.g_up[i][k].v;
      r.eps[i][k] = j.eps[i][k].v;
    }
  }
  r.det_ratio = j.det_ratio.v;
  r.I = j.I.v;
  r.Tf = j.Tf.v;
  return r;
}

Vec2d finsleroid_dK_dx(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y) {
  if (!finsleroid_const_c(spec)) throw UnsupportedVaryingC();
  const Frame<double> f = checked_frame(spec, x);
  return dK_dx_in_frame(f, metric_jet(spec.kind, f, y), y);
}

ConnectionJet connection_coeffs(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y, const KChoice& kc,
                                const ConnectionOptions& opt) {
  return connection_coeffs(point_context(spec, x, kc), y, opt);
}

ConnectionJet connection_coeffs(const PointContext& pc, const Vec2d& y, const ConnectionOptions& opt) {
  const ManifoldSpec& spec = *pc.spec;
  const Frame<double>& f = pc.frame;
  ConnectionJet cj;
  cj.x = pc.x;
  cj.y = y;
  const MetricJet<double> j = metric_jet(spec.kind, f, y);
  cj.k = pc.k.k;
  cj.dtheta_dx = dtheta_dx_at(spec, pc.x, f, pc.frame2, y, opt.theta_route, opt.quadrature);
  if (opt.theta_branch != 0) {
    const Vec2d dmax = theta_max_dx(spec.kind, pc.frame2, opt.quadrature);
    for (int n = 0; n < 2; ++n) cj.dtheta_dx[n] += opt.theta_branch * dmax[n];
  }
  if (finsleroid_const_c(spec)) {
    cj.dF_dx = dK_dx_in_frame(f, j, y);
  } else {
    const MetricJet<D2> jd = metric_jet(spec.kind, pc.frame2, Vec2<D2>{D2(y[0]), D2(y[1])});
    cj.dF_dx = {jd.F.d[0], jd.F.d[1]};
  }
  for (int n = 0; n < 2; ++n) cj.P[n] = cj.dtheta_dx[n] - cj.k[n];
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < 2; ++n) cj.N[k][n] = -j.l_up[k] * cj.dF_dx[n] - j.F * j.m_up[k] * cj.P[n];
  cj.I = j.I;
  cj.axis_note = std::abs(j.I) < 1e-12;
  return cj;
}

ConnectionJet derivative_coeffs(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y, const KChoice& kc,
                                const ConnectionOptions& opt) {
  return derivative_coeffs(point_context(spec, x, kc), y, opt);
}

ConnectionJet derivative_coeffs(const PointContext& pc, const Vec2d& y, const ConnectionOptions& opt) {
  ConnectionJet cj = connection_coeffs(pc, y, opt);
  const Frame<D4> f4 = make_frame<D4>(pc.fields, pc.spec->orientation);
  const MetricJet<D4> j4 = metric_jet(pc.spec->kind, f4, Vec2<D4>{D4::variable(y[0], 2), D4::variable(y[1], 3)});
  const MetricJet<double> j = primal_jet(j4);
  const double F = j.F, I = j.I;
  Mat2d dl{}, dm{}, Fdm{};  // dl[n][m] = ∂_n l_m, dm[n][m] = ∂_n m_m, Fdm[k][m] = F ∂m^k/∂y^m
  for (int n = 0; n < 2; ++n)
    for (int m = 0; m < 2; ++m) {
      dl[n][m] = j4.l[m].d[n];
      dm[n][m] = j4.m[m].d[n];
    }
  for (int k = 0; k < 2; ++k)
    for (int m = 0; m < 2; ++m) Fdm[k][m] = -I * j.m_up[k] * j.m[m] - j.l_up[k] * j.m[m];
  const Vec2d dIx{j4.I.d[0], j4.I.d[1]}, dIy{j4.I.d[2], j4.I.d[3]};

  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < 2; ++n)
      for (int m = 0; m < 2; ++m) {
        cj.Nnm[k][n][m] = -j.l_up[k] * dl[n][m] - (j.l[m] * j.m_up[k] + Fdm[k][m]) * cj.P[n] - j.m_up[k] * dm[n][m];
        for (int i = 0; i < 2; ++i)
          cj.Nnmi[k][n][m][i] = j.m_up[k] * j.m[m] * (F * dIy[i] * cj.P[n] - j.m[i] * dIx[n]) / F;
      }
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int n = 0; n < 2; ++n) cj.D[k][i][n] = -cj.Nnm[k][i][n];
  cj.full = true;
  return cj;
}

double finsleroid_C1(const ManifoldSpec& spec, const Vec2d& x, const KChoice& kc) {
  switch (kc.mode) {
    case KChoice::Mode::Zero: return 0.0;
    case KChoice::Mode::Frame: {
      const Frame<double> f = checked_frame(spec, x);
      return -(kc.sign >= 0 ? 1.0 : -1.0) / f.c;
    }
    case KChoice::Mode::User: break;
  }
  throw ParamRange("the finsleroid route needs k proportional to p (frame or zero choice)");
}

Mat2d finsleroid_connection_closed(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y, const KChoice& kc,
                                   const ConnectionOptions& opt) {
  if (!finsleroid_const_c(spec)) throw UnsupportedVaryingC();
  const Frame<double> f = checked_frame(spec, x);
  const MetricJet<double> j = metric_jet(spec.kind, f, y);
  const auto& s = j.fs;
  const double C1 = finsleroid_C1(spec, x, kc);
  const double phig = spec.g_is_constant() ? 0.0 : theta_g_sensitivity(spec.kind, f, y, opt.quadrature);
  const double Nl = f.g * j.n_y * j.q / s.B;
  const double Nm = C1 - std::sqrt(s.nu / j.q) * j.S * j.S / (f.c * s.B);
  Mat2d N{};
  for (int n = 0; n < 2; ++n) {
    const double pn = f.c * f.phat[n];
    const double starK = 0.5 * s.Mbar * s.K * f.dg[n];
    const double starTheta = phig * f.dg[n];
    for (int k = 0; k < 2; ++k) {
      double ay = 0.0;
      for (int m = 0; m < 2; ++m) ay += f.gamma[k][n][m] * y[m];
      N[k][n] = -(Nl * j.l_up[k] + Nm * j.m_up[k]) * s.K * pn - j.l_up[k] * starK - s.K * j.m_up[k] * starTheta - ay;
    }
  }
  return N;
}

Vec2d finsleroid_Z(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y, const KChoice& kc,
                   const ConnectionOptions& opt) {
  if (!finsleroid_const_c(spec)) throw UnsupportedVaryingC();
  const Frame<double> f = checked_frame(spec, x);
  const MetricJet<double> j = metric_jet(spec.kind, f, y);
  const auto& s = j.fs;
  const double c = f.c, g = f.g, b = j.b, n = j.n_y, q = j.q, nu = s.nu;
  const double C1 = finsleroid_C1(spec, x, kc);
  const double phig = spec.g_is_constant() ? 0.0 : theta_g_sensitivity(spec.kind, f, y, opt.quadrature);
  using D1 = Dual<double, 1>;
  const auto sg = finsleroid_scalars<D1>(D1::variable(g, 0), D1(c), D1(b), D1(q));
  const D1 G = D1::variable(g, 0) * sg.invX / sqrt(q * sg.nu);
  const double omc = 1.0 - c * c;
  Vec2d Z{};
  for (int i = 0; i < 2; ++i) {
    // Only the g-part of ∂θ/∂x enters here: P = ∂*θ + C1 p.
    const double P = phig * f.dg[i] + C1 * c * f.phat[i];
    Z[i] = -0.75 * g * omc * omc * s.B * s.B * (2.0 * b * nu + g * c * c * n * n) * P / (q * q * q * nu * nu * nu) +
           0.5 * n * c * G.d[0] * f.dg[i];
  }
  return Z;
}

Vec2d d_apply(const ConnectionJet& jet, const Vec2d& dW_dx, const Vec2d& dW_dy) {
  Vec2d r;
  for (int n = 0; n < 2; ++n) r[n] = dW_dx[n] + jet.N[0][n] * dW_dy[0] + jet.N[1][n] * dW_dy[1];
  return r;
}

TensorJet tensor_from_d4(const std::string& pattern, const std::vector<D4>& comps) {
  TensorJet t;
  t.pattern = pattern;
  for (const D4& c : comps) {
    t.value.push_back(c.v);
    t.dx.push_back({c.d[0], c.d[1]});
    t.dy.push_back({c.d[2], c.d[3]});
  }
  return t;
}

TensorJet tensor_from_fd(const std::string& pattern, const TensorEvaluator& f, const Vec2d& x, const Vec2d& y,
                         double hx, double hy) {
  TensorJet t;
  t.pattern = pattern;
  t.value = f(x, y);
  const std::size_t n = t.value.size();
  t.dx.assign(n, Vec2d{});
  t.dy.assign(n, Vec2d{});
  const double sy = hy * norm(y);
  const double w[4] = {-1.0 / 12.0, 8.0 / 12.0, -8.0 / 12.0, 1.0 / 12.0};
  const double o[4] = {2.0, 1.0, -1.0, -2.0};
  for (int axis = 0; axis < 2; ++axis) {
    for (int s = 0; s < 4; ++s) {
      Vec2d xp = x, yp = y;
      xp[axis] += o[s] * hx;
      yp[axis] += o[s] * sy;
      const auto vx = f(xp, y), vy = f(x, yp);
      for (std::size_t c = 0; c < n; ++c) {
        t.dx[c][axis] += w[s] * vx[c] / hx;
        t.dy[c][axis] += w[s] * vy[c] / sy;
      }
    }
  }
  return t;
}

TensorDerivative covariant_derivative(const ConnectionJet& jet, const TensorJet& w) {
  if (!jet.full) throw ParamRange("covariant_derivative needs derivative_coeffs");
  const std::size_t r = w.rank();
  TensorDerivative out(w.size());
  for (std::size_t c = 0; c < w.size(); ++c) {
    for (int n = 0; n < 2; ++n) {
      double v = w.dx[c][n] + jet.N[0][n] * w.dy[c][0] + jet.N[1][n] * w.dy[c][1];
      for (std::size_t p = 0; p < r; ++p) {
        const int a = digit(c, r, p);
        for (int h = 0; h < 2; ++h) {
          const double wh = w.value[with_digit(c, r, p, h)];
          if (w.pattern[p] == 'u')
            v += jet.D[a][n][h] * wh;
          else
            v -= jet.D[h][n][a] * wh;
        }
      }
      out[c][n] = v;
    }
  }
  return out;
}

TensorDerivative s_derivative(const MetricJet<double>& mj, const TensorJet& w) {
  const std::size_t r = w.rank();
  auto C = [&](int up, int a, int b) { return mj.I * mj.m_up[up] * mj.m[a] * mj.m[b] / mj.F; };
  TensorDerivative out(w.size());
  for (std::size_t c = 0; c < w.size(); ++c) {
    for (int h = 0; h < 2; ++h) {
      double v = w.dy[c][h];
      for (std::size_t p = 0; p < r; ++p) {
        const int a = digit(c, r, p);
        for (int s = 0; s < 2; ++s) {
          const double ws = w.value[with_digit(c, r, p, s)];
          if (w.pattern[p] == 'u')
            v += C(a, h, s) * ws;
          else
            v -= C(s, h, a) * ws;
        }
      }
      out[c][h] = v;
    }
  }
  return out;
}

TensorJet field_y_lower(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y) {
  const auto j = metric_jet_d4(spec, x, y);
  return tensor_from_d4("l", {j.y_lo[0], j.y_lo[1]});
}

TensorJet field_y_upper(const ManifoldSpec&, const Vec2d&, const Vec2d& y) {
  return tensor_from_d4("u", {D4::variable(y[0], 2), D4::variable(y[1], 3)});
}

TensorJet field_g_lower(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y) {
  const auto j = metric_jet_d4(spec, x, y);
  return tensor_from_d4("ll", {j.g[0][0], j.g[0][1], j.g[1][0], j.g[1][1]});
}

TensorJet field_m_upper(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y) {
  const auto j = metric_jet_d4(spec, x, y);
  return tensor_from_d4("u", {j.m_up[0], j.m_up[1]});
}

TensorJet field_l_up_m_low(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y) {
  const auto j = metric_jet_d4(spec, x, y);
  std::vector<D4> c;
  for (int n = 0; n < 2; ++n)
    for (int k = 0; k < 2; ++k) c.push_back(j.l_up[n] * j.m[k]);
  return tensor_from_d4("ul", c);
}

}  // namespace finsler2d
