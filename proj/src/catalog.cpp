#include <algorithm>
#include <cmath>

#include "finsler2d/fd.hpp"
#include "finsler2d/harness.hpp"

namespace finsler2d {

namespace {

using D1 = Dual<double, 1>;

// ---------------------------------------------------------------- comparison helpers

inline void flat_into(double v, std::vector<double>& o) { o.push_back(v); }
template <class T, std::size_t N>
void flat_into(const std::array<T, N>& a, std::vector<double>& o) {
  for (const auto& e : a) flat_into(e, o);
}
template <class T>
void flat_into(const std::vector<T>& a, std::vector<double>& o) {
  for (const auto& e : a) flat_into(e, o);
}
template <class A>
std::vector<double> flat(const A& a) {
  std::vector<double> o;
  flat_into(a, o);
  return o;
}
double maxabs(const std::vector<double>& v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}


template <class A, class B>
Residual compare(const A& lhs, const B& rhs, double extra_scale = 0.0) {
  const std::vector<double> l = flat(lhs), r = flat(rhs);
  Residual res;
  for (std::size_t i = 0; i < l.size(); ++i) res.diff = std::max(res.diff, std::abs(l[i] - r[i]));
  res.scale = std::max({maxabs(l), maxabs(r), extra_scale});
  if (!std::isfinite(res.diff)) res.diff = std::numeric_limits<double>::infinity();
  return res;
}

template <class A>
Residual vanishes(const A& v, double scale) {
  Residual res;
  res.diff = maxabs(flat(v));
  res.scale = scale;
  if (!std::isfinite(res.diff)) res.diff = std::numeric_limits<double>::infinity();
  return res;
}

Residual holds(bool ok) {
  Residual r;
  r.diff = ok ? 0.0 : 1.0;
  return r;
}

Residual skip() {
  Residual r;
  r.skipped = true;
  return r;
}

Residual worst(std::initializer_list<Residual> rs) {
  Residual w;
  for (const Residual& r : rs)
    if (r.value() >= w.value()) w = r;
  return w;
}

// ---------------------------------------------------------------- evaluation helpers

double family_c(MetricKind kind, const Frame<double>& f) { return kind == MetricKind::Riemannian ? 1.0 : f.c; }

Frame<double> frame_of(const IdentityContext& c) {
  Frame<double> f = frame_at(c.spec, c.x);
  check_family_params(c.spec.kind, f);
  return f;
}

MetricJet<double> jet_of(const IdentityContext& c) { return metric_at(c.spec, c.x, c.y); }

ConnectionOptions tight() {
  ConnectionOptions o;
  o.quadrature = oracle_quadrature();
  return o;
}

// Difference stencils around y stay on the θ branch of y.
ConnectionOptions across_cut(const PointContext& pc, const Vec2d& y, const Vec2d& v) {
  ConnectionOptions o = tight();
  o.theta_branch = continued_branch(cut_side(pc.frame, y), pc.frame, v);
  return o;
}

// Frame whose charge g carries the derivative: ∂*_n W = g_n ∂W/∂g.
Frame<D1> charge_frame(const Frame<double>& f) {
  Frame<D1> r;
  for (int i = 0; i < 2; ++i) {
    r.bt[i] = D1(f.bt[i]);
    r.bt_up[i] = D1(f.bt_up[i]);
    r.n[i] = D1(f.n[i]);
    r.n_up[i] = D1(f.n_up[i]);
    for (int k = 0; k < 2; ++k) {
      r.a[i][k] = D1(f.a[i][k]);
      r.ainv[i][k] = D1(f.ainv[i][k]);
      r.eps[i][k] = D1(f.eps[i][k]);
    }
  }
  r.sqrt_det = D1(f.sqrt_det);
  r.g = D1::variable(f.g, 0);
  r.c = D1(f.c);
  r.orientation = f.orientation;
  return r;
}

MetricJet<D1> charge_jet(const Frame<double>& f, const Vec2d& y) {
  return metric_jet(MetricKind::Finsleroid, charge_frame(f), Vec2<D1>{D1(y[0]), D1(y[1])});
}

Vec2d d_of(const ConnectionJet& cj, const D4& w) { return d_apply(cj, {w.d[0], w.d[1]}, {w.d[2], w.d[3]}); }

// a^k_nj y^j
Mat2d gamma_y(const Frame<double>& f, const Vec2d& y) {
  Mat2d r{};
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < 2; ++n) r[k][n] = f.gamma[k][n][0] * y[0] + f.gamma[k][n][1] * y[1];
  return r;
}


// y with the same n(y) and |b̃(y)|, moved to the side b > 0.
Vec2d to_positive_b(const Frame<double>& f, const Vec2d& y) {
  const double bt = std::abs(dot(f.bt, y));
  const double n = dot(f.n, y);
  return {bt * f.bt_up[0] + n * f.n_up[0], bt * f.bt_up[1] + n * f.n_up[1]};
}

Vec2d rotate(const Vec2d& v, double a) {
  return {std::cos(a) * v[0] - std::sin(a) * v[1], std::sin(a) * v[0] + std::cos(a) * v[1]};
}

// Finsleroid abbreviations at (x, y) with the charge-dual pieces used by the ∂* terms.
struct FinsleroidPoint {
  Frame<double> f;
  MetricJet<double> j;
  double c = 0, g = 0, b = 0, n = 0, q = 0, S = 0, B = 0, B1 = 0, nu = 0, K = 0, T = 0, invX = 0;
  double sq = 0;        // sqrt(q / ν)
  double C1 = 0, U = 0;  // U = C1 (1/c) sqrt(q/ν)
  Vec2d p{}, bl{}, bu{};  // p_n = c n^h ∇_n b̃_h, b_i, b^i
  Vec2d starK{}, starTheta{}, Pstar{};
};

FinsleroidPoint finsleroid_point(const IdentityContext& ctx) {
  FinsleroidPoint r;
  r.f = frame_of(ctx);
  r.j = metric_jet(MetricKind::Finsleroid, r.f, ctx.y);
  const auto& s = r.j.fs;
  r.c = r.f.c;
  r.g = r.f.g;
  r.b = r.j.b;
  r.n = r.j.n_y;
  r.q = r.j.q;
  r.S = r.j.S;
  r.B = s.B;
  r.B1 = s.B1;
  r.nu = s.nu;
  r.K = s.K;
  r.T = r.j.Tf;
  r.invX = s.invX;
  r.sq = std::sqrt(r.q / r.nu);
  r.C1 = finsleroid_C1(ctx.spec, ctx.x, ctx.kc);
  r.U = r.C1 / r.c * r.sq;
  const double phig =
      ctx.spec.g_is_constant() ? 0.0 : theta_g_sensitivity(MetricKind::Finsleroid, r.f, ctx.y, oracle_quadrature());
  for (int i = 0; i < 2; ++i) {
    r.p[i] = r.c * r.f.phat[i];
    r.bl[i] = r.c * r.f.bt[i];
    r.bu[i] = r.c * r.f.bt_up[i];
    r.starK[i] = 0.5 * s.Mbar * s.K * r.f.dg[i];
    r.starTheta[i] = phig * r.f.dg[i];
    r.Pstar[i] = r.starTheta[i] + r.C1 * r.p[i];
  }
  return r;
}

double curl_scale(const CurvatureJet& cv) { return max_abs(cv.M); }

// ---------------------------------------------------------------- the catalog

std::vector<IdentityRecord> build_catalog() {
  std::vector<IdentityRecord> c;
  auto add = [&](std::string id, std::string source, ToleranceClass tc, unsigned fam,
                 std::function<Residual(const IdentityContext&)> fn) -> IdentityRecord& {
    IdentityRecord r;
    r.id = std::move(id);
    r.source = std::move(source);
    r.tolerance_class = tc;
    r.families = fam;
    r.eval = std::move(fn);
    c.push_back(std::move(r));
    return c.back();
  };
  using TC = ToleranceClass;

  // ---- Finsleroid scalars and the metric function

  add("finsleroid-L-square-identity", "L^2 + h^2 b^2 = B with L = q + g b / 2", TC::ClosedForm, kFinsleroid,
      [](const IdentityContext& x) {
        const MetricJet<double> j = jet_of(x);
        const auto& s = j.fs;
        return compare(s.L * s.L + s.h * s.h * j.b * j.b, s.B);
      });

  add("finsleroid-B-decomposition", "B = b^2 + g b q + q^2, B1 = (b + g c^2 q)/c^2, B - b B1 = n^2", TC::ClosedForm,
      kFinsleroid, [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const MetricJet<double> j = metric_jet(MetricKind::Finsleroid, f, x.y);
        const double b = j.b, q = j.q, g = f.g, c = f.c, n = j.n_y;
        const double B = b * b + g * b * q + q * q;
        const double B1 = (b + g * c * c * q) / (c * c);
        return worst({compare(B, j.fs.B), compare(B1, j.fs.B1), compare(B - b * B1, n * n, B)});
      });

  add("finsleroid-nu-positive", "nu = q + (1 - c^2) g b > 0 when |g| < 2", TC::ClosedForm, kFinsleroid,
      [](const IdentityContext& x) {
        const MetricJet<double> j = jet_of(x);
        return holds(j.fs.nu > 0.0);
      });

  add("finsleroid-c2S2-relations",
      "(c^2 S^2 - b^2)/(q nu) = 1 - (1 - c^2) B/(q nu) and g b (c^2 S^2 - b^2) = q B - nu S^2", TC::ClosedForm,
      kFinsleroid, [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const MetricJet<double> j = metric_jet(MetricKind::Finsleroid, f, x.y);
        const double c = f.c, g = f.g, b = j.b, q = j.q, S2 = j.S * j.S, B = j.fs.B, nu = j.fs.nu;
        return worst({compare((c * c * S2 - b * b) / (q * nu), 1.0 - (1.0 - c * c) * B / (q * nu)),
                      compare(g * b * (c * c * S2 - b * b), q * B - nu * S2)});
      });

  add("finsleroid-values-on-axis", "at y = b^i: n = 0, b = c^2, q = c sqrt(1 - c^2), S^2 = c^2, eta B = c^2",
      TC::ClosedForm, kFinsleroid, [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const double c = f.c, g = f.g;
        const Vec2d y{c * f.bt_up[0], c * f.bt_up[1]};
        const MetricJet<double> j = metric_jet(MetricKind::Finsleroid, f, y);
        const double eta = 1.0 / (1.0 + g * c * std::sqrt(1.0 - c * c));
        return worst({vanishes(j.n_y, 1.0), compare(j.b, c * c), compare(j.q, c * std::sqrt(1.0 - c * c)),
                      compare(j.S * j.S, c * c), compare(eta * j.fs.B, c * c)});
      });

  add("finsleroid-zero-charge-is-riemannian", "at g = 0: B = S^2, K = S and g_ij = a_ij", TC::ClosedForm,
      kFinsleroid, [](const IdentityContext& x) {
        Frame<double> f = frame_of(x);
        f.g = 0.0;
        const MetricJet<double> j = metric_jet(MetricKind::Finsleroid, f, x.y);
        return worst({compare(j.fs.B, j.S * j.S), compare(j.F, j.S), compare(j.g, f.a)});
      });

  // ---- metric tensor, determinant, Cartan data

  add("covariant-y-is-half-gradient-of-F-squared", "y_i = (1/2) dF^2/dy^i = (u_i + g q b_i) K^2 / B",
      TC::FirstOrderFD, kAllFamilies, [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const MetricJet<double> j = metric_jet(x.spec.kind, f, x.y);
        auto half = [&](const Vec2d& v) {
          const double F = metric_jet(x.spec.kind, f, v).F;
          return 0.5 * F * F;
        };
        const double h = 1e-3 * norm(x.y);
        const Vec2d fd{fd_partial4(half, x.y, 0, h), fd_partial4(half, x.y, 1, h)};
        return compare(fd, j.y_lo);
      });

  add("metric-tensor-is-hessian-of-half-F-squared", "g_ij = d y_i / d y^j, closed form of the metric tensor",
      TC::NestedFD, kAllFamilies, [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const MetricJet<double> j = metric_jet(x.spec.kind, f, x.y);
        const Mat2d fd = metric_from_F([&](const Vec2d& v) { return metric_jet(x.spec.kind, f, v).F; }, x.y);
        return compare(fd, j.g);
      });

  add("inverse-metric-closed-form", "g^ij closed form is the inverse of g_ij", TC::ClosedForm, kAllFamilies,
      [](const IdentityContext& x) {
        const MetricJet<double> j = jet_of(x);
        Mat2d prod{};
        for (int i = 0; i < 2; ++i)
          for (int k = 0; k < 2; ++k) prod[i][k] = j.g[i][0] * j.g_up[0][k] + j.g[i][1] * j.g_up[1][k];
        const Mat2d id{{{1.0, 0.0}, {0.0, 1.0}}};
        return compare(prod, id);
      });

  add("finsleroid-determinant", "det(g_ij) = (nu/q) (K^2/B)^2 det(a_ij) > 0", TC::ClosedForm, kFinsleroid,
      [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const MetricJet<double> j = metric_jet(MetricKind::Finsleroid, f, x.y);
        const double K2B = j.F * j.F / j.fs.B;
        const double rhs = j.fs.nu / j.q * K2B * K2B * det(f.a);
        return worst({compare(det(j.g), rhs), holds(rhs > 0.0)});
      });

  add("finsleroid-X-two-forms", "1/X = 2 + (1 - c^2) B/(q nu) = 3 - c^2 n^2/(q nu)", TC::ClosedForm, kFinsleroid,
      [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const MetricJet<double> j = metric_jet(MetricKind::Finsleroid, f, x.y);
        const double c = f.c;
        return compare(j.fs.invX, 3.0 - c * c * j.n_y * j.n_y / (j.q * j.fs.nu));
      });

  add("cartan-vector-from-log-determinant", "A_i = F d ln sqrt(det g)/dy^i = I m_i", TC::FirstOrderFD,
      kAllFamilies, [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const MetricJet<double> j = metric_jet(x.spec.kind, f, x.y);
        auto lndet = [&](const Vec2d& v) { return 0.5 * std::log(det(metric_jet(x.spec.kind, f, v).g)); };
        const double h = 1e-3 * norm(x.y);
        const Vec2d A{j.F * fd_partial4(lndet, x.y, 0, h), j.F * fd_partial4(lndet, x.y, 1, h)};
        const Vec2d Im{j.I * j.m[0], j.I * j.m[1]};
        return compare(A, Im);
      });

  add("finsleroid-cartan-vector-closed",
      "A_i = (K g/(2 q B))(1/X)(S^2 b_i - b u_i) = (K g/(2 q B))(n/X)(n b_i - b n_i); "
      "A^i = (g/(2 X K nu))(B b^i - (b + g q c^2) y^i); A_i = I m_i",
      TC::ClosedForm, kFinsleroid, [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const MetricJet<double> j = metric_jet(MetricKind::Finsleroid, f, x.y);
        const double c = f.c, g = f.g, b = j.b, n = j.n_y, q = j.q, S2 = j.S * j.S, K = j.F, B = j.fs.B;
        const double iX = j.fs.invX, nu = j.fs.nu;
        Vec2d A1, A2, Aup, Im, Imup;
        for (int i = 0; i < 2; ++i) {
          const double bi = c * f.bt[i], bui = c * f.bt_up[i];
          A1[i] = K * g / (2.0 * q * B) * iX * (S2 * bi - b * j.u[i]);
          A2[i] = K * g / (2.0 * q * B) * n * iX * (n * bi - b * f.n[i]);
          Aup[i] = g * iX / (2.0 * K * nu) * (B * bui - (b + g * q * c * c) * x.y[i]);
          Im[i] = j.I * j.m[i];
          Imup[i] = j.I * j.m_up[i];
        }
        return worst({compare(A1, Im), compare(A2, Im), compare(Aup, Imup)});
      });

  add("finsleroid-cartan-norm", "A^i A_i = (g^2/(4 X^2))(3 - 1/X) = (g^2/(4 X^2)) c^2 n^2/(q nu) = I^2",
      TC::ClosedForm, kFinsleroid, [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const MetricJet<double> j = metric_jet(MetricKind::Finsleroid, f, x.y);
        const CartanData cd = cartan(j);
        const double g = f.g, c = f.c, iX = j.fs.invX;
        const double pre = g * g * iX * iX / 4.0;
        return worst({compare(cd.AA, pre * (3.0 - iX)), compare(cd.AA, pre * c * c * j.n_y * j.n_y / (j.q * j.fs.nu)),
                      compare(cd.AA, j.I * j.I)});
      });

  add("T-is-scaled-determinant-ratio",
      "T = (1/c) sqrt(det g/det a); finsleroid (1/c) sqrt(nu/q) K^2/B, randers (1/c) (F/S)^(3/2)", TC::ClosedForm,
      kAllFamilies, [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const MetricJet<double> j = metric_jet(x.spec.kind, f, x.y);
        const double c = family_c(x.spec.kind, f);
        const double fromdet = std::sqrt(det(j.g) / det(f.a)) / c;
        double fam = 1.0;
        if (x.spec.kind == MetricKind::Finsleroid) fam = std::sqrt(j.fs.nu / j.q) * j.F * j.F / (c * j.fs.B);
        if (x.spec.kind == MetricKind::Randers) fam = std::pow(j.F / j.S, 1.5) / c;
        return worst({compare(j.Tf, fromdet), compare(j.Tf, fam)});
      });

  add("m-lower-closed-form",
      "m_i = -eps_ik l^k = (1/F) T (b n_i - n b_i); randers (1/(c S)) sqrt(F/S)(b n_i - n b_i); "
      "riemannian (1/S)(b n_i - n b_i)",
      TC::ClosedForm, kAllFamilies, [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const MetricJet<double> j = metric_jet(x.spec.kind, f, x.y);
        const double sd = (f.orientation >= 0 ? 1.0 : -1.0) * std::sqrt(det(j.g));
        const Vec2d viaEps{-(sd * j.l_up[1]), sd * j.l_up[0]};  // eps_01 = +sd
        const double c = family_c(x.spec.kind, f);
        Vec2d closed;
        for (int i = 0; i < 2; ++i) closed[i] = j.Tf / j.F * (j.b * f.n[i] - j.n_y * c * f.bt[i]);
        return worst({compare(viaEps, j.m), compare(closed, j.m)});
      });

  add("m-upper-is-raised-m",
      "m^n = g^nk m_k; finsleroid c sqrt(q/nu)((b n^n - n b^n)/c^2 + g q n^n)/K; "
      "randers (1/(c F)) sqrt(S/F)(-n b^i + (b + c^2 S) n^i)",
      TC::ClosedForm, kAllFamilies, [](const IdentityContext& x) {
        const MetricJet<double> j = jet_of(x);
        return compare(contract(inverse(j.g), j.m), j.m_up);
      });

  add("orthonormal-frame-l-m", "g_ij = l_i l_j + m_i m_j, l^i l_i = m^i m_i = 1, l^i m_i = 0", TC::ClosedForm,
      kAllFamilies, [](const IdentityContext& x) {
        const MetricJet<double> j = jet_of(x);
        Mat2d llmm{};
        for (int i = 0; i < 2; ++i)
          for (int k = 0; k < 2; ++k) llmm[i][k] = j.l[i] * j.l[k] + j.m[i] * j.m[k];
        const Vec2d dots{dot(j.l_up, j.l) - 1.0, dot(j.m_up, j.m) - 1.0};
        return worst({compare(llmm, j.g), vanishes(dots, 1.0), vanishes(dot(j.l_up, j.m), 1.0)});
      });

  add("cartan-tensor-from-metric-derivative", "A_ijk = (F/2) dg_ij/dy^k = I m_i m_j m_k", TC::FirstOrderFD,
      kAllFamilies, [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const MetricJet<double> j = metric_jet(x.spec.kind, f, x.y);
        auto gij = [&](const Vec2d& v) { return metric_jet(x.spec.kind, f, v).g; };
        const double h = 1e-3 * norm(x.y);
        Arr3d lhs{}, rhs{};
        for (int k = 0; k < 2; ++k) {
          const Mat2d d = fd_partial4(gij, x.y, k, h);
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
              lhs[a][b][k] = 0.5 * j.F * d[a][b];
              rhs[a][b][k] = j.I * j.m[a] * j.m[b] * j.m[k];
            }
        }
        return compare(lhs, rhs);
      });

  add("angle-gradient-is-m-over-F", "F dtheta/dy^n = m_n", TC::FirstOrderFD, kAllFamilies,
      [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const MetricJet<double> j = metric_jet(x.spec.kind, f, x.y);
        const int side = cut_side(f, x.y);
        auto th = [&](const Vec2d& v) {
          return theta_in_frame(x.spec.kind, f, v, oracle_quadrature(), continued_branch(side, f, v));
        };
        const double h = 1e-3 * norm(x.y);
        const Vec2d Fdth{j.F * fd_partial4(th, x.y, 0, h), j.F * fd_partial4(th, x.y, 1, h)};
        return compare(Fdth, j.m);
      });

  add("m-y-derivatives", "F dm_k/dy^m = -l_k m_m + I m_m m_k, F dm^k/dy^m = -I m^k m_m - l^k m_m", TC::ClosedForm,
      kAllFamilies, [](const IdentityContext& x) {
        const MetricJet<D4> j4 = metric_jet_d4(x.spec, x.x, x.y);
        const MetricJet<double> j = primal_jet(j4);
        Mat2d lo{}, lo_r{}, up{}, up_r{};
        for (int k = 0; k < 2; ++k)
          for (int m = 0; m < 2; ++m) {
            lo[k][m] = j.F * j4.m[k].d[2 + m];
            up[k][m] = j.F * j4.m_up[k].d[2 + m];
            lo_r[k][m] = -j.l[k] * j.m[m] + j.I * j.m[m] * j.m[k];
            up_r[k][m] = -j.I * j.m_up[k] * j.m[m] - j.l_up[k] * j.m[m];
          }
        return worst({compare(lo, lo_r), compare(up, up_r)});
      });

  add("finsleroid-K-m-upper-y-derivative",
      "d(K m^k)/dy^m = l_m m^k - l^k m_m + g c m^k m_m (1/(2X)) n/sqrt(q nu)", TC::ClosedForm, kFinsleroid,
      [](const IdentityContext& x) {
        const MetricJet<D4> j4 = metric_jet_d4(x.spec, x.x, x.y);
        const MetricJet<double> j = primal_jet(j4);
        const Frame<double> f = frame_of(x);
        const double coef = f.g * f.c * 0.5 * j.fs.invX * j.n_y / std::sqrt(j.q * j.fs.nu);
        Mat2d lhs{}, rhs{};
        for (int k = 0; k < 2; ++k)
          for (int m = 0; m < 2; ++m) {
            lhs[k][m] = (j4.F * j4.m_up[k]).d[2 + m];
            rhs[k][m] = j.l[m] * j.m_up[k] - j.l_up[k] * j.m[m] + coef * j.m_up[k] * j.m[m];
          }
        return compare(lhs, rhs);
      });

  add("finsleroid-T-over-K-y-derivative",
      "d(T/K)/dy^i = -l_i (1/c) sqrt(nu/q)/B - (1/(2c)) sqrt(q/nu)(1 - c^2) g n/q^3 Ups_i K/B "
      "- (1/c) q nu/sqrt(nu q) K/B^2 n g/q^2 Ups_i, Ups_i = b n_i - n b_i",
      TC::ClosedForm, kFinsleroid, [](const IdentityContext& x) {
        const MetricJet<D4> j4 = metric_jet_d4(x.spec, x.x, x.y);
        const MetricJet<double> j = primal_jet(j4);
        const Frame<double> f = frame_of(x);
        const double c = f.c, g = f.g, b = j.b, n = j.n_y, q = j.q, nu = j4.fs.nu.v, B = j4.fs.B.v, K = j.F;
        const D4 TK = j4.Tf / j4.F;
        Vec2d lhs, rhs;
        for (int i = 0; i < 2; ++i) {
          const double ups = b * f.n[i] - n * c * f.bt[i];
          lhs[i] = TK.d[2 + i];
          rhs[i] = -j.l[i] / c * std::sqrt(nu / q) / B -
                   0.5 / c * std::sqrt(q / nu) * (1.0 - c * c) * g * n / (q * q * q) * ups * K / B -
                   1.0 / c * q * nu / std::sqrt(nu * q) * K / (B * B) * n * g / (q * q) * ups;
        }
        return compare(lhs, rhs);
      });

  add("finsleroid-m-lower-y-derivative", "K dm_m/dy^i = -g c m_m m_i (1/(2X)) n/sqrt(q nu) - l_m m_i",
      TC::ClosedForm, kFinsleroid, [](const IdentityContext& x) {
        const MetricJet<D4> j4 = metric_jet_d4(x.spec, x.x, x.y);
        const MetricJet<double> j = primal_jet(j4);
        const Frame<double> f = frame_of(x);
        const double coef = f.g * f.c * 0.5 * j.fs.invX * j.n_y / std::sqrt(j.q * j.fs.nu);
        Mat2d lhs{}, rhs{};
        for (int m = 0; m < 2; ++m)
          for (int i = 0; i < 2; ++i) {
            lhs[m][i] = j.F * j4.m[m].d[2 + i];
            rhs[m][i] = -coef * j.m[m] * j.m[i] - j.l[m] * j.m[i];
          }
        return compare(lhs, rhs);
      });

  // ---- x-derivatives of K

  auto& dK59 = add("finsleroid-K-x-derivative",
                   "dK/dx^n = d*_n K + (K/B) g q y^j nabla_n b_j + a^k_nj y^j l_k, d*_n K = (1/2) Mbar K g_n",
                   TC::FirstOrderFD, kFinsleroid, [](const IdentityContext& x) {
                     const Frame<double> f = frame_of(x);
                     const MetricJet<double> j = metric_jet(MetricKind::Finsleroid, f, x.y);
                     const auto& s = j.fs;
                     const Mat2d ay = gamma_y(f, x.y);
                     Vec2d rhs;
                     for (int n = 0; n < 2; ++n) {
                       const double ynb = f.c * (f.nabla_bt[n][0] * x.y[0] + f.nabla_bt[n][1] * x.y[1]);
                       rhs[n] = 0.5 * s.Mbar * s.K * f.dg[n] + s.K / s.B * f.g * j.q * ynb + ay[0][n] * j.l[0] +
                                ay[1][n] * j.l[1];
                     }
                     auto K = [&](const Vec2d& p) { return metric_function(x.spec, p, x.y); };
                     const Vec2d fd{fd_partial4(K, x.x, 0, 1e-3), fd_partial4(K, x.x, 1, 1e-3)};
                     return compare(fd, rhs);
                   });
  dK59.constant_c_only = true;

  add("finsleroid-charge-derivative-of-K",
      "dK/dg at fixed y = (1/2) Mbar K, Mbar = -f/h^3 + (1/2) G q^2/(h B) + b q/(h^2 B)", TC::ClosedForm, kFinsleroid,
      [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const MetricJet<D1> jd = charge_jet(f, x.y);
        const auto& s = jd.fs;
        const double h = s.h.v, G = s.G.v, q = jd.q.v, b = jd.b.v, B = s.B.v;
        const double Mbar = -s.f.v / (h * h * h) + 0.5 * G * q * q / (h * B) + b * q / (h * h * B);
        return worst({compare(jd.F.d[0], 0.5 * s.Mbar.v * s.K.v), compare(Mbar, s.Mbar.v)});
      });

  auto& dK88 = add("finsleroid-K-x-derivative-with-p",
                   "dK/dx^n = d*_n K + (K/B) g n q p_n + a^k_nj y^j l_k, p_n = c n^h nabla_n b~_h",
                   TC::FirstOrderFD, kFinsleroid, [](const IdentityContext& x) {
                     const Vec2d rhs = finsleroid_dK_dx(x.spec, x.x, x.y);
                     auto K = [&](const Vec2d& p) { return metric_function(x.spec, p, x.y); };
                     const Vec2d fd{fd_partial4(K, x.x, 0, 1e-3), fd_partial4(K, x.x, 1, 1e-3)};
                     return compare(fd, rhs);
                   });
  dK88.constant_c_only = true;

  // ---- charts and angle integrals

  add("chart-w-tilde-angle-derivative",
      "w~ = n/b, dw~/dy^n = (b n_n - n b_n)/b^2, dTheta~/dw~ = (1/c)(b^2/B) sqrt(nu/q); randers b^2 T/F^2",
      TC::FirstOrderFD, kAllFamilies, [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const double c = family_c(x.spec.kind, f);
        const MetricJet<double> j0 = metric_jet(x.spec.kind, f, x.y);
        const double w0 = j0.b != 0.0 ? j0.n_y / std::abs(j0.b) : 0.0;
        auto yw = [&](double w) {
          return Vec2d{f.bt_up[0] / c + w * f.n_up[0], f.bt_up[1] / c + w * f.n_up[1]};
        };
        auto th = [&](double w) { return theta_in_frame(x.spec.kind, f, yw(w), oracle_quadrature()); };
        const double fd = fd_central4(th, w0, 1e-3 * std::max(1.0, std::abs(w0)));
        const Residual r1 = compare(fd, chart_dtheta_dwtilde(x.spec, x.x, yw(w0)));
        if (std::abs(j0.b) < 1e-3 * j0.S) return r1;
        const MetricJet<D4> j4 = metric_jet_d4(x.spec, x.x, x.y);
        const D4 wt = j4.n_y / j4.b;
        Vec2d lhs, rhs;
        for (int i = 0; i < 2; ++i) {
          lhs[i] = wt.d[2 + i];
          rhs[i] = (j0.b * f.n[i] - j0.n_y * c * f.bt[i]) / (j0.b * j0.b);
        }
        return worst({r1, compare(lhs, rhs)});
      });

  add("chart-t-angle-derivative",
      "t = -b/q on n > 0, dt/dy^m = (|n|/q^3)(b n_m - n b_m), dTheta^/dt = (1/c) q^3/(|n| B) sqrt(nu/q)",
      TC::FirstOrderFD, kFinsleroid, [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const double c = f.c, omc = 1.0 - c * c;
        const MetricJet<double> j0 = metric_jet(MetricKind::Finsleroid, f, x.y);
        const double t0 = -j0.b / j0.q;
        auto yt = [&](double t) {
          const double b = -t / std::sqrt(1.0 - t * t * omc / (c * c));
          return Vec2d{b / c * f.bt_up[0] + f.n_up[0], b / c * f.bt_up[1] + f.n_up[1]};
        };
        const double tmax = c / std::sqrt(omc);
        const double h = 1e-3 * std::min(1.0, tmax - std::abs(t0));
        if (!(h > 1e-7)) return skip();
        auto th = [&](double t) { return theta_in_frame(MetricKind::Finsleroid, f, yt(t), oracle_quadrature()); };
        const Residual r1 = compare(fd_central4(th, t0, h), chart_dtheta_dt(x.spec, x.x, yt(t0)));
        if (std::abs(j0.n_y) < 1e-3 * j0.S) return r1;
        const MetricJet<D4> j4 = metric_jet_d4(x.spec, x.x, x.y);
        const double sgn = j0.n_y > 0.0 ? -1.0 : 1.0;
        const D4 t = sgn * j4.b / j4.q;
        Vec2d lhs, rhs;
        const double q3 = j0.q * j0.q * j0.q;
        for (int m = 0; m < 2; ++m) {
          lhs[m] = t.d[2 + m];
          rhs[m] = std::abs(j0.n_y) / q3 * (j0.b * f.n[m] - j0.n_y * c * f.bt[m]);
        }
        return worst({r1, compare(lhs, rhs)});
      });

  add("chart-angle-derivatives-positive", "dTheta~/dw~ > 0 and dTheta^/dt > 0", TC::ClosedForm, kFinslerFamilies,
      [](const IdentityContext& x) {
        const ChartId ch = chart_of(x.spec, x.x, x.y);
        const bool side = ch == ChartId::C1 || ch == ChartId::C4;
        if (x.spec.kind == MetricKind::Randers && !side) return skip();
        const double v = side ? chart_dtheta_dwtilde(x.spec, x.x, x.y) : chart_dtheta_dt(x.spec, x.x, x.y);
        return holds(v > 0.0);
      });

  auto& bounds = add("theta-bounds-integrals",
                     "theta^max = 2(theta^I + theta^II), theta^I and theta^II as integrals over w~ in (0, inf)",
                     TC::Quadrature, kAllFamilies, [](const IdentityContext& x) {
                       const AngleBounds a = theta_bounds(x.spec, x.x, oracle_quadrature());
                       const AngleBounds b = theta_bounds_arc(x.spec, x.x, oracle_quadrature());
                       Residual r = worst({compare(a.theta_I, b.theta_I), compare(a.theta_II, b.theta_II),
                                           compare(a.theta_max, 2.0 * (b.theta_I + b.theta_II))});
                       r.diff /= std::max(1.0, a.theta_max);
                       r.scale = 0.0;
                       return r;
                     });
  bounds.max_samples = 40;

  add("theta-range", "-theta^max/2 < theta <= theta^max/2 with theta(b~) = 0", TC::Quadrature, kAllFamilies,
      [](const IdentityContext& x) {
        const AngleBounds a = theta_bounds_arc(x.spec, x.x);
        const double th = theta(x.spec, x.x, x.y);
        const Frame<double> f = frame_of(x);
        return worst({holds(th > -0.5 * a.theta_max - 1e-12 && th <= 0.5 * a.theta_max + 1e-12),
                      vanishes(theta_in_frame(x.spec.kind, f, f.bt_up), 1.0)});
      });

  add("chart-angle-integral-matches-theta", "theta = Theta~(g, c, w~) = (1/c) int_0^w~ density dw~ on b > 0",
      TC::Quadrature, kAllFamilies, [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const Vec2d y = to_positive_b(f, x.y);
        const MetricJet<double> j = metric_jet(x.spec.kind, f, y);
        const double w = j.n_y / j.b;
        const double ch = chart_theta_tilde(x.spec.kind, f.g, family_c(x.spec.kind, f), w, oracle_quadrature());
        return compare(ch, theta_in_frame(x.spec.kind, f, y, oracle_quadrature()));
      });

  add("chart-integral-charge-derivative",
      "dTheta~/dg = (1/c) int (-w sqrt(1 + (1 - c^2) g/w)/(1 + g w + w^2)^2 "
      "+ (1 - c^2)/(2 w (1 + g w + w^2)) / sqrt(1 + (1 - c^2) g/w)) dw~",
      TC::FirstOrderFD, kFinsleroid, [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const Vec2d y = to_positive_b(f, x.y);
        const MetricJet<double> j = metric_jet(MetricKind::Finsleroid, f, y);
        const double c = f.c, g = f.g, wt = j.n_y / j.b, omc = 1.0 - c * c;
        auto integrand = [&](double v) {
          const double w = std::sqrt(v * v + omc / (c * c));
          const double D = 1.0 + g * w + w * w;
          const double r = std::sqrt(1.0 + omc * g / w);
          return (-w * r / (D * D) + omc / (2.0 * w * D) / r) / c;
        };
        const double closed = integrate_adaptive(integrand, 0.0, wt, oracle_quadrature()).value;
        auto Th = [&](double gg) { return chart_theta_tilde(MetricKind::Finsleroid, gg, c, wt, oracle_quadrature()); };
        return compare(closed, fd_central4(Th, g, 1e-3));
      });

  add("chart-integral-axis-norm-derivative",
      "dTheta~/dc = -(1/c) Theta~ - g int (1/w)/((1 + g w + w^2) sqrt(1 + (1 - c^2) g/w)) dw~ "
      "- (1/c^4) int rho'(w)/w dw~, rho = sqrt(1 + (1 - c^2) g/w)/(1 + g w + w^2)",
      TC::FirstOrderFD, kFinsleroid, [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const Vec2d y = to_positive_b(f, x.y);
        const MetricJet<double> j = metric_jet(MetricKind::Finsleroid, f, y);
        const double c = f.c, g = f.g, wt = j.n_y / j.b, omc = 1.0 - c * c, k = omc * g;
        auto integrand = [&](double v) {
          const double w = std::sqrt(v * v + omc / (c * c));
          const double D = 1.0 + g * w + w * w, r = std::sqrt(1.0 + k / w);
          const double drho = -k / (2.0 * w * w * r) / D - r * (g + 2.0 * w) / (D * D);
          // the w(c) term is absent from the printed form
          return -g / (w * D * r) - drho / (c * c * c * c * w);
        };
        const double Th0 = chart_theta_tilde(MetricKind::Finsleroid, g, c, wt, oracle_quadrature());
        const double closed = -Th0 / c + integrate_adaptive(integrand, 0.0, wt, oracle_quadrature()).value;
        auto Th = [&](double cc) { return chart_theta_tilde(MetricKind::Finsleroid, g, cc, wt, oracle_quadrature()); };
        const double h = 1e-3 * std::min(c, 1.0 - c);
        return compare(closed, fd_central4(Th, c, h));
      });

  add("angle-x-derivative-routes",
      "dtheta/dx^n = Theta_g g_n + Theta_c c_n + Theta_w dw~/dx^n, assembled by the closed or arc route",
      TC::FirstOrderFD, kAllFamilies, [](const IdentityContext& x) {
        const Vec2d a = dtheta_dx(x.spec, x.x, x.y, DThetaRoute::Auto, oracle_quadrature());
        const Vec2d fd = dtheta_dx(x.spec, x.x, x.y, DThetaRoute::FiniteDifference);
        return compare(a, fd);
      });

  add("chart-route-angle-x-derivative",
      "dtheta/dx^n = Theta_g g_n + Theta_c c_n + (1/F^2) T b^2 (dw~/dx^n - a^k_nj y^j (b n_k - n b_k)/b^2) "
      "+ a^k_nj y^j dtheta/dy^k = Theta_g g_n + Theta_c c_n - (1/F^2) T (S^2 c p^_n + b n c_n/c) + a^k_nj y^j "
      "dtheta/dy^k",
      TC::FirstOrderFD, kFinslerFamilies, [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const Vec2d y = to_positive_b(f, x.y);
        const MetricJet<double> j = metric_jet(x.spec.kind, f, y);
        const MetricJet<D4> j4 = metric_jet_d4(x.spec, x.x, y);
        const double c = f.c, g = f.g, b = j.b, n = j.n_y, wt = n / b, F = j.F, T = j.Tf, S2 = j.S * j.S;
        auto Thg = [&](double gg) { return chart_theta_tilde(x.spec.kind, gg, c, wt, oracle_quadrature()); };
        auto Thc = [&](double cc) { return chart_theta_tilde(x.spec.kind, g, cc, wt, oracle_quadrature()); };
        const double dg = x.spec.kind == MetricKind::Finsleroid ? fd_central4(Thg, g, 1e-3) : 0.0;
        const double dc = fd_central4(Thc, c, 1e-3 * std::min(c, 1.0 - c));
        const D4 w4 = j4.n_y / j4.b;
        const Mat2d ay = gamma_y(f, y);
        Vec2d r82, r83;
        for (int i = 0; i < 2; ++i) {
          double aym = 0.0, ayups = 0.0;
          for (int k = 0; k < 2; ++k) {
            aym += ay[k][i] * j.m[k] / F;
            ayups += ay[k][i] * (b * f.n[k] - n * c * f.bt[k]);
          }
          const double base = dg * f.dg[i] + dc * f.dc[i] + aym;
          r82[i] = base + T * b * b / (F * F) * (w4.d[i] - ayups / (b * b));
          r83[i] = base - T / (F * F) * (S2 * c * f.phat[i] + b * n * f.dc[i] / c);
        }
        const Vec2d fd = dtheta_dx(x.spec, x.x, y, DThetaRoute::FiniteDifference);
        return worst({compare(r82, fd), compare(r83, fd)});
      });

  add("tangent-metric-in-F-theta-coordinates", "G_11 = 1, G_12 = 0, G_22 = F^2 in the coordinates (F, theta)",
      TC::NestedFD, kAllFamilies, [](const IdentityContext& x) {
        const Mat2d G = coordinate_metric(x.spec, x.x, x.y);
        const double F = metric_function(x.spec, x.x, x.y);
        const Mat2d expect{{{1.0, 0.0}, {0.0, F * F}}};
        Residual r = compare(G, expect);
        r.diff /= std::max(1.0, F * F);
        r.scale = 0.0;
        return r;
      });

  auto& area = add("sector-area-is-half-angle", "Sigma{y1, y2} = (1/2)(theta_2 - theta_1)", TC::Area, kAllFamilies,
                   [](const IdentityContext& x) {
                     const Vec2d y2 = rotate(x.y, 1.0);
                     const AngleBounds a = theta_bounds_arc(x.spec, x.x, oracle_quadrature());
                     double dth = two_vector_angle(x.spec, x.x, x.y, y2, oracle_quadrature());
                     if (dth < 0.0) dth += a.theta_max;
                     const double sig = sector_area(x.spec, x.x, x.y, y2, oracle_quadrature());
                     Residual r = compare(sig, 0.5 * dth);
                     r.diff /= std::abs(0.5 * dth);
                     r.scale = 0.0;
                     return r;
                   });
  area.max_samples = 10;

  auto& arc = add("indicatrix-arclength-is-theta-max", "ds = dtheta along the indicatrix, total length theta^max",
                  TC::Quadrature, kAllFamilies, [](const IdentityContext& x) {
                    const double L = indicatrix_arclength(x.spec, x.x, oracle_quadrature());
                    const AngleBounds a = theta_bounds(x.spec, x.x, oracle_quadrature());
                    Residual r = compare(L, a.theta_max);
                    r.diff /= a.theta_max;
                    r.scale = 0.0;
                    return r;
                  });
  arc.max_samples = 10;

  // ---- connection axioms

  add("connection-preserves-F", "d_n F = dF/dx^n + N^k_n dF/dy^k = 0", TC::ClosedForm, kAllFamilies,
      [](const IdentityContext& x) {
        const ConnectionJet cj = connection_coeffs(x.spec, x.x, x.y, x.kc, tight());
        const MetricJet<D4> j4 = metric_jet_d4(x.spec, x.x, x.y);
        const Vec2d dF = d_of(cj, j4.F);
        return vanishes(dF, std::max({max_abs(cj.dF_dx), max_abs(cj.N), j4.F.v}));
      });

  add("connection-angle-rule", "d_n theta = dtheta/dx^n + N^k_n dtheta/dy^k = k_n", TC::FirstOrderFD, kAllFamilies,
      [](const IdentityContext& x) {
        const ConnectionJet cj = connection_coeffs(x.spec, x.x, x.y, x.kc, tight());
        const MetricJet<double> j = jet_of(x);
        const Vec2d th = dtheta_dx(x.spec, x.x, x.y, DThetaRoute::FiniteDifference);
        const Vec2d dth = d_apply(cj, th, {j.m[0] / j.F, j.m[1] / j.F});
        return compare(dth, cj.k, max_abs(th));
      });

  add("y-lower-annihilates-N-nmi", "y_k N^k_nmi = 0", TC::ClosedForm, kAllFamilies, [](const IdentityContext& x) {
    const ConnectionJet cj = derivative_coeffs(x.spec, x.x, x.y, x.kc, tight());
    const MetricJet<double> j = jet_of(x);
    Arr3d v{};
    for (int n = 0; n < 2; ++n)
      for (int m = 0; m < 2; ++m)
        for (int i = 0; i < 2; ++i) v[n][m][i] = j.y_lo[0] * cj.Nnmi[0][n][m][i] + j.y_lo[1] * cj.Nnmi[1][n][m][i];
    return vanishes(v, j.F * max_abs(cj.Nnmi));
  });

  add("two-vector-angle-preserved", "d_n (theta_2 - theta_1) = 0 for two vectors at one point", TC::FirstOrderFD,
      kAllFamilies, [](const IdentityContext& x) {
        const Vec2d y2 = rotate(x.y, 0.7);
        Vec2d d[2];
        double sc = 0.0;
        const Vec2d ys[2] = {x.y, {1.3 * y2[0], 1.3 * y2[1]}};
        for (int a = 0; a < 2; ++a) {
          const ConnectionJet cj = connection_coeffs(x.spec, x.x, ys[a], x.kc, tight());
          const MetricJet<double> j = metric_at(x.spec, x.x, ys[a]);
          const Vec2d th = dtheta_dx(x.spec, x.x, ys[a], DThetaRoute::FiniteDifference);
          d[a] = d_apply(cj, th, {j.m[0] / j.F, j.m[1] / j.F});
          sc = std::max(sc, max_abs(th));
        }
        return compare(d[1], d[0], sc);
      });

  add("connection-y-derivative", "N^k_nm = dN^k_n/dy^m = -l^k dl_m/dx^n - l_m m^k P_n - F dm^k/dy^m P_n - m^k dm_m/dx^n",
      TC::FirstOrderFD, kAllFamilies, [](const IdentityContext& x) {
        const ConnectionJet cj = derivative_coeffs(x.spec, x.x, x.y, x.kc, tight());
        const PointContext pc = point_context(x.spec, x.x, x.kc);
        auto N = [&](const Vec2d& v) { return connection_coeffs(pc, v, across_cut(pc, x.y, v)).N; };
        const double h = 1e-3 * norm(x.y);
        Arr3d fd{};
        for (int m = 0; m < 2; ++m) {
          const Mat2d d = fd_partial4(N, x.y, m, h);
          for (int k = 0; k < 2; ++k)
            for (int n = 0; n < 2; ++n) fd[k][n][m] = d[k][n];
        }
        return compare(fd, cj.Nnm);
      });

  add("connection-second-y-derivative", "N^k_nmi = (1/F) m^k m_m (F dI/dy^i P_n - m_i dI/dx^n)", TC::FirstOrderFD,
      kAllFamilies, [](const IdentityContext& x) {
        const ConnectionJet cj = derivative_coeffs(x.spec, x.x, x.y, x.kc, tight());
        const PointContext pc = point_context(x.spec, x.x, x.kc);
        auto Nnm = [&](const Vec2d& v) { return derivative_coeffs(pc, v, across_cut(pc, x.y, v)).Nnm; };
        const double h = 1e-3 * norm(x.y);
        Arr4d fd{};
        for (int i = 0; i < 2; ++i) {
          const Arr3d d = fd_partial4(Nnm, x.y, i, h);
          for (int k = 0; k < 2; ++k)
            for (int n = 0; n < 2; ++n)
              for (int m = 0; m < 2; ++m) fd[k][n][m][i] = d[k][n][m];
        }
        return compare(fd, cj.Nnmi, max_abs(cj.Nnm) / norm(x.y));
      });

  add("N-nmi-main-scalar-form", "N^k_nmi = -(1/F) m^k m_m m_i d_n I", TC::ClosedForm, kAllFamilies,
      [](const IdentityContext& x) {
        const ConnectionJet cj = derivative_coeffs(x.spec, x.x, x.y, x.kc, tight());
        const MetricJet<D4> j4 = metric_jet_d4(x.spec, x.x, x.y);
        const MetricJet<double> j = primal_jet(j4);
        const Vec2d dI = d_of(cj, j4.I);
        Arr4d rhs{};
        for (int k = 0; k < 2; ++k)
          for (int n = 0; n < 2; ++n)
            for (int m = 0; m < 2; ++m)
              for (int i = 0; i < 2; ++i) rhs[k][n][m][i] = -j.m_up[k] * j.m[m] * j.m[i] * dI[n] / j.F;
        return compare(cj.Nnmi, rhs);
      });

  add("covariant-y-lower-vanishes", "D_i y_j = dy_j/dx^i + N^k_i g_kj - D^h_ij y_h = 0", TC::ClosedForm,
      kAllFamilies, [](const IdentityContext& x) {
        const ConnectionJet cj = derivative_coeffs(x.spec, x.x, x.y, x.kc, tight());
        const TensorJet w = field_y_lower(x.spec, x.x, x.y);
        return vanishes(covariant_derivative(cj, w), max_abs(cj.N) + maxabs(w.value));
      });

  add("metric-compatibility", "D_i g_jn = d_i g_jn - D^h_ij g_hn - D^h_in g_jh = 0", TC::ClosedForm, kAllFamilies,
      [](const IdentityContext& x) {
        const ConnectionJet cj = derivative_coeffs(x.spec, x.x, x.y, x.kc, tight());
        const TensorJet w = field_g_lower(x.spec, x.x, x.y);
        return vanishes(covariant_derivative(cj, w), max_abs(cj.Nnm) * maxabs(w.value));
      });

  add("N-is-D-contracted-with-y", "D^k_in = -N^k_in and N^k_i = -D^k_in y^n", TC::ClosedForm, kAllFamilies,
      [](const IdentityContext& x) {
        const ConnectionJet cj = derivative_coeffs(x.spec, x.x, x.y, x.kc, tight());
        Mat2d Dy{};
        for (int k = 0; k < 2; ++k)
          for (int i = 0; i < 2; ++i) Dy[k][i] = -(cj.D[k][i][0] * x.y[0] + cj.D[k][i][1] * x.y[1]);
        return compare(Dy, cj.N);
      });

  add("covariant-y-upper-vanishes", "D_i y^j = N^j_i + D^j_ih y^h = 0", TC::ClosedForm, kAllFamilies,
      [](const IdentityContext& x) {
        const ConnectionJet cj = derivative_coeffs(x.spec, x.x, x.y, x.kc, tight());
        const TensorJet w = field_y_upper(x.spec, x.x, x.y);
        return vanishes(covariant_derivative(cj, w), max_abs(cj.N));
      });

  add("covariant-m-upper-vanishes", "D_i m^k = 0, that is d_i m^k = N^k_ih m^h", TC::ClosedForm, kAllFamilies,
      [](const IdentityContext& x) {
        const ConnectionJet cj = derivative_coeffs(x.spec, x.x, x.y, x.kc, tight());
        const TensorJet w = field_m_upper(x.spec, x.x, x.y);
        return vanishes(covariant_derivative(cj, w), max_abs(cj.Nnm) * maxabs(w.value));
      });

  // ---- Riemannian counterparts

  add("riemannian-connection-L-form",
      "L^k_n = S m^k T_n - a^k_nh y^h = L^k_nh y^h, L^k_nh = -a^kj eps_jh T_n - a^k_nh, "
      "da_mn/dx^i + L^s_im a_sn + L^s_in a_ms = 0",
      TC::ClosedForm, kRiemannian, [](const IdentityContext& x) {
        const ConnectionJet cj = connection_coeffs(x.spec, x.x, x.y, x.kc, tight());
        const Frame<double> f = frame_of(x);
        const MetricJet<double> j = metric_jet(MetricKind::Riemannian, f, x.y);
        const KField kf = k_field(x.spec, x.x, x.kc);
        Vec2d T;
        for (int n = 0; n < 2; ++n) T[n] = f.phat[n] + kf.k[n];
        Arr3d L{};
        Mat2d Lform{}, Ly{};
        for (int k = 0; k < 2; ++k)
          for (int n = 0; n < 2; ++n) {
            for (int h = 0; h < 2; ++h) {
              double ae = 0.0;
              for (int jj = 0; jj < 2; ++jj) ae += f.ainv[k][jj] * f.eps[jj][h];
              L[k][n][h] = -ae * T[n] - f.gamma[k][n][h];
            }
            Lform[k][n] = j.S * j.m_up[k] * T[n] - (f.gamma[k][n][0] * x.y[0] + f.gamma[k][n][1] * x.y[1]);
            Ly[k][n] = L[k][n][0] * x.y[0] + L[k][n][1] * x.y[1];
          }
        Arr3d met{};
        for (int i = 0; i < 2; ++i)
          for (int m = 0; m < 2; ++m)
            for (int n = 0; n < 2; ++n) {
              double v = f.da[i][m][n];
              for (int s = 0; s < 2; ++s) v += L[s][i][m] * f.a[s][n] + L[s][i][n] * f.a[m][s];
              met[i][m][n] = v;
            }
        return worst({compare(Lform, cj.N), compare(Ly, cj.N), vanishes(met, max_abs(f.da))});
      });

  add("riemannian-limit-is-christoffel", "with k_n = -n^h nabla_n b~_h: N^k_n = -a^k_nh y^h, so D = Christoffel",
      TC::ClosedForm, kRiemannian, [](const IdentityContext& x) {
        if (x.kc.mode != KChoice::Mode::Frame || x.kc.sign != kDefaultKSign) return skip();
        const ConnectionJet cj = connection_coeffs(x.spec, x.x, x.y, x.kc, tight());
        const Frame<double> f = frame_of(x);
        Mat2d sum = gamma_y(f, x.y);
        for (int k = 0; k < 2; ++k)
          for (int n = 0; n < 2; ++n) sum[k][n] += cj.N[k][n];
        return vanishes(sum, max_abs(cj.N));
      });

  add("riemannian-angle-representation",
      "a^k_nh y^h = (1/S) dS/dx^n y^k + (dtheta/dx^n + n^h nabla_n b~_h) S m^k, theta = arctan(n/b)",
      TC::ClosedForm, kAllFamilies, [](const IdentityContext& x) {
        const Frame<D2> f = make_frame<D2>(sample_fields(x.spec, x.x), x.spec.orientation);
        const Vec2<D2> y{D2(x.y[0]), D2(x.y[1])};
        const D2 S = sqrt(dot(contract(f.a, y), y));
        const D2 b = dot(f.bt, y), n = dot(f.n, y);
        const D2 th = atan2(n, b);
        Mat2d lhs{}, rhs{};
        for (int k = 0; k < 2; ++k) {
          const double mk = (b.v * f.n_up[k].v - n.v * f.bt_up[k].v) / S.v;
          for (int i = 0; i < 2; ++i) {
            lhs[k][i] = f.gamma[k][i][0].v * x.y[0] + f.gamma[k][i][1].v * x.y[1];
            rhs[k][i] = S.d[i] / S.v * x.y[k] + (th.d[i] + f.phat[i].v) * S.v * mk;
          }
        }
        return compare(lhs, rhs);
      });

  add("frame-on-axis", "a(b~, b~) = a(n, n) = 1, a(b~, n) = 0, theta(x, b~) = 0; riemannian: "
      "dtheta/dy^i(x, b~) = n_i, dtheta/dy^i(x, n) = -b~_i",
      TC::ClosedForm, kAllFamilies, [](const IdentityContext& x) {
        const Frame<double> f = frame_of(x);
        const Vec2d r{quadratic(f.a, f.bt_up, f.bt_up) - 1.0, quadratic(f.a, f.n_up, f.n_up) - 1.0};
        Residual res = worst({vanishes(r, 1.0), vanishes(quadratic(f.a, f.bt_up, f.n_up), 1.0),
                              vanishes(theta_in_frame(x.spec.kind, f, f.bt_up), 1.0)});
        if (x.spec.kind != MetricKind::Riemannian) return res;
        const MetricJet<double> jb = metric_jet(MetricKind::Riemannian, f, f.bt_up);
        const MetricJet<double> jn = metric_jet(MetricKind::Riemannian, f, f.n_up);
        const Vec2d mb{jb.m[0] / jb.F, jb.m[1] / jb.F}, mn{jn.m[0] / jn.F, jn.m[1] / jn.F};
        return worst({res, compare(jb.g, f.a), compare(mb, f.n), compare(mn, Vec2d{-f.bt[0], -f.bt[1]})});
      });

  add("frame-derivative-identities",
      "nabla_i b~^k = -n^k b~_m nabla_i n^m, nabla_i n^k = -b~^k n_m nabla_i b~^m, "
      "nabla_i (n^t nabla_j b~_t) - nabla_j (n^t nabla_i b~_t) = -n^t b~_l a_t^l_ij",
      TC::ClosedForm, kAllFamilies, [](const IdentityContext& x) {
        const Frame<D2> f = make_frame<D2>(sample_fields(x.spec, x.x), x.spec.orientation);
        Mat2d nb{}, nn{};  // [i][k] = nabla_i V^k
        for (int i = 0; i < 2; ++i)
          for (int k = 0; k < 2; ++k) {
            nb[i][k] = f.bt_up[k].d[i];
            nn[i][k] = f.n_up[k].d[i];
            for (int j = 0; j < 2; ++j) {
              nb[i][k] += f.gamma[k][i][j].v * f.bt_up[j].v;
              nn[i][k] += f.gamma[k][i][j].v * f.n_up[j].v;
            }
          }
        Mat2d rb{}, rn{};
        for (int i = 0; i < 2; ++i)
          for (int k = 0; k < 2; ++k) {
            rb[i][k] = -f.n_up[k].v * (f.bt[0].v * nn[i][0] + f.bt[1].v * nn[i][1]);
            rn[i][k] = -f.bt_up[k].v * (f.n[0].v * nb[i][0] + f.n[1].v * nb[i][1]);
          }
        const Arr4d R = riemann_tensor_from(f);
        const double lhs = f.phat[1].d[0] - f.phat[0].d[1];
        double rhs = 0.0;
        for (int t = 0; t < 2; ++t)
          for (int l = 0; l < 2; ++l) rhs -= f.n_up[t].v * f.bt[l].v * R[t][l][0][1];
        return worst({compare(nb, rb), compare(nn, rn), compare(lhs, rhs)});
      });

  add("riemannian-two-dimensional-curvature",
      "a_tlij = -R (a_tj a_li - a_ti a_lj), a^ti a^lj a_tlij = 2R, "
      "a_tlij = -R (n_t b~_l - n_l b~_t)(n_j b~_i - n_i b~_j), n^t b~^l a_tlij (b~_k n_n - n_k b~_n) = -a_knij",
      TC::ClosedForm, kAllFamilies, [](const IdentityContext& x) {
        const RiemannCurvature rc = riemann_curvature(x.spec, x.x);
        const Frame<double> f = frame_of(x);
        Arr4d low{}, form{};
        for (int t = 0; t < 2; ++t)
          for (int l = 0; l < 2; ++l)
            for (int i = 0; i < 2; ++i)
              for (int j = 0; j < 2; ++j) {
                low[t][l][i][j] = f.a[l][0] * rc.tensor[t][0][i][j] + f.a[l][1] * rc.tensor[t][1][i][j];
                form[t][l][i][j] = -rc.R * (f.a[t][j] * f.a[l][i] - f.a[t][i] * f.a[l][j]);
              }
        const double sc = max_abs(low);
        return worst({compare(low, form), vanishes(rc.factorization_residual, sc),
                      vanishes(rc.contraction_residual, sc)});
      });

  add("riemann-counterpart-curvature",
      "Lbar_k^n_ij = (nabla_i T_j - nabla_j T_i) a^nt eps_tk + a_k^n_ij = a^nt eps_tk M_ij, "
      "n^t b~_l a_t^l_ij a^nt eps_tk = a_k^n_ij",
      TC::ClosedForm, kAllFamilies, [](const IdentityContext& x) {
        const RiemannCounterpart rc = riemann_counterpart(x.spec, x.x, x.kc);
        const Frame<double> f = frame_of(x);
        const RiemannCurvature R = riemann_curvature(x.spec, x.x);
        const KField kf = k_field(x.spec, x.x, x.kc);
        const Frame<D2> f2 = make_frame<D2>(sample_fields(x.spec, x.x), x.spec.orientation);
        Arr4d via410{}, via414{};
        for (int k = 0; k < 2; ++k)
          for (int n = 0; n < 2; ++n)
            for (int i = 0; i < 2; ++i)
              for (int j = 0; j < 2; ++j) {
                double ae = 0.0;
                for (int t = 0; t < 2; ++t) ae += f.ainv[n][t] * f.eps[t][k];
                const double curlT = (f2.phat[j].d[i] + kf.dk[i][j]) - (f2.phat[i].d[j] + kf.dk[j][i]);
                via410[k][n][i][j] = curlT * ae + R.tensor[k][n][i][j];
                double nb = 0.0;
                for (int t = 0; t < 2; ++t)
                  for (int l = 0; l < 2; ++l) nb += f.n_up[t] * f.bt[l] * R.tensor[t][l][i][j];
                via414[k][n][i][j] = nb * ae;
              }
        const double sc = std::max(max_abs(rc.Lbar), max_abs(R.tensor));
        return worst({vanishes(rc.lbar_residual, sc), compare(via410, rc.Lbar), compare(via414, R.tensor)});
      });

  add("factorization-theorem",
      "rho_knij = f1 Lbar_knij, f1 = sqrt(det g/det a); randers f1 = sqrt((F/S)^3)", TC::ClosedForm,
      kAllFamilies, [](const IdentityContext& x) {
        const RiemannCounterpart rc = riemann_counterpart(x.spec, x.x, x.kc);
        const CurvatureJet cv = curvature_closed(x.spec, x.x, x.y, x.kc);
        const Frame<double> f = frame_of(x);
        const MetricJet<double> j = metric_jet(x.spec.kind, f, x.y);
        const double f1 = std::sqrt(det(j.g) / det(f.a));
        Arr4d rhs{};
        for (int k = 0; k < 2; ++k)
          for (int n = 0; n < 2; ++n)
            for (int i = 0; i < 2; ++i)
              for (int jj = 0; jj < 2; ++jj) rhs[k][n][i][jj] = f1 * rc.Lbar_low[k][n][i][jj];
        Residual r = compare(cv.rho_low, rhs);
        const Residual rf = compare(cv.f1, f1);
        if (x.spec.kind == MetricKind::Randers) return worst({r, rf, compare(cv.f1, std::pow(j.F / j.S, 1.5))});
        return worst({r, rf});
      });

  add("f1-is-c-T", "f1 = c T", TC::ClosedForm, kFinslerFamilies, [](const IdentityContext& x) {
    const Frame<double> f = frame_of(x);
    const MetricJet<double> j = metric_jet(x.spec.kind, f, x.y);
    return compare(std::sqrt(j.det_ratio), f.c * j.Tf);
  });

  // ---- Finsleroid connection with constant c

  auto finsleroid_conn = [&](std::string id, std::string source, std::function<Residual(const IdentityContext&)> fn) {
    IdentityRecord& r = add(std::move(id), std::move(source), TC::ClosedForm, kFinsleroid, std::move(fn));
    r.constant_c_only = true;
    r.frame_k_only = true;
  };

  finsleroid_conn("finsleroid-connection-axis-forms",
                  "N^k_n = [(b/c^2 - U c^2 B1) n^k + n (U - 1/c^2) b^k] p_n - l^k d*K - K m^k d*theta - a^k_nj y^j, "
                  "U = C1 (1/c) sqrt(q/nu); = -K m^k (C1 p_n + d*theta) + (1/c^2)(b n^k - n b^k) p_n - l^k d*K - a y; "
                  "= -(N_l l^k + N_m m^k) K p_n - l^k d*K - K m^k d*theta - a y, N_l = g n q/B, "
                  "N_m = C1 - (1/c) sqrt(nu/q) S^2/B",
                  [](const IdentityContext& x) {
                    const FinsleroidPoint P = finsleroid_point(x);
                    const ConnectionJet cj = connection_coeffs(x.spec, x.x, x.y, x.kc, tight());
                    const Mat2d ay = gamma_y(P.f, x.y);
                    Mat2d n85{}, n104{};
                    for (int k = 0; k < 2; ++k)
                      for (int n = 0; n < 2; ++n) {
                        const double common = -P.j.l_up[k] * P.starK[n] - ay[k][n];
                        n85[k][n] = ((P.b / (P.c * P.c) - P.U * P.c * P.c * P.B1) * P.f.n_up[k] +
                                     P.n * (P.U - 1.0 / (P.c * P.c)) * P.bu[k]) *
                                        P.p[n] -
                                    P.K * P.j.m_up[k] * P.starTheta[n] + common;
                        n104[k][n] = -P.K * P.j.m_up[k] * P.Pstar[n] +
                                     (P.b * P.f.n_up[k] - P.n * P.bu[k]) * P.p[n] / (P.c * P.c) + common;
                      }
                    const Mat2d n105 = finsleroid_connection_closed(x.spec, x.x, x.y, x.kc, tight());
                    return worst({compare(n85, cj.N), compare(n104, cj.N), compare(n105, cj.N)});
                  });

  finsleroid_conn("finsleroid-connection-contracted-with-y",
                  "N^k_n y_k = -K d*_n K - g n q p_n K^2/B - K a^k_nj y^j l_k", [](const IdentityContext& x) {
                    const FinsleroidPoint P = finsleroid_point(x);
                    const ConnectionJet cj = connection_coeffs(x.spec, x.x, x.y, x.kc, tight());
                    const Mat2d ay = gamma_y(P.f, x.y);
                    Vec2d lhs, rhs;
                    for (int n = 0; n < 2; ++n) {
                      lhs[n] = cj.N[0][n] * P.j.y_lo[0] + cj.N[1][n] * P.j.y_lo[1];
                      rhs[n] = -P.K * P.starK[n] - P.g * P.n * P.q * P.p[n] * P.K * P.K / P.B -
                               P.K * (ay[0][n] * P.j.l[0] + ay[1][n] * P.j.l[1]);
                    }
                    return compare(lhs, rhs);
                  });

  finsleroid_conn("finsleroid-angle-connection-rule", "dtheta/dx^n + N^k_n dtheta/dy^k = -C1 p_n",
                  [](const IdentityContext& x) {
                    const FinsleroidPoint P = finsleroid_point(x);
                    const ConnectionJet cj = connection_coeffs(x.spec, x.x, x.y, x.kc, tight());
                    const Vec2d th = dtheta_dx(x.spec, x.x, x.y, DThetaRoute::Arc, oracle_quadrature());
                    const Vec2d d = d_apply(cj, th, {P.j.m[0] / P.K, P.j.m[1] / P.K});
                    return compare(d, Vec2d{-P.C1 * P.p[0], -P.C1 * P.p[1]}, max_abs(th));
                  });

  finsleroid_conn("finsleroid-angle-x-derivative-decomposition",
                  "N^k_n dtheta/dy^k = -d*theta + T S^2 p_n/K^2 - C1 p_n - a^k_nj y^j dtheta/dy^k; "
                  "dtheta/dx^n = d*theta - T S^2 p_n/K^2 + a^k_nj y^j dtheta/dy^k",
                  [](const IdentityContext& x) {
                    const FinsleroidPoint P = finsleroid_point(x);
                    const ConnectionJet cj = connection_coeffs(x.spec, x.x, x.y, x.kc, tight());
                    const Vec2d th = dtheta_dx(x.spec, x.x, x.y, DThetaRoute::Arc, oracle_quadrature());
                    const Mat2d ay = gamma_y(P.f, x.y);
                    Vec2d l92, r92, r93;
                    for (int n = 0; n < 2; ++n) {
                      const double aym = (ay[0][n] * P.j.m[0] + ay[1][n] * P.j.m[1]) / P.K;
                      const double tsp = P.T * P.S * P.S * P.p[n] / (P.K * P.K);
                      l92[n] = (cj.N[0][n] * P.j.m[0] + cj.N[1][n] * P.j.m[1]) / P.K;
                      r92[n] = -P.starTheta[n] + tsp - P.C1 * P.p[n] - aym;
                      r93[n] = P.starTheta[n] - tsp + aym;
                    }
                    return worst({compare(l92, r92), compare(th, r93)});
                  });

  finsleroid_conn("finsleroid-connection-two-term-form",
                  "N^k_n = -l^k dK/dx^n - K m^k P_n, P_n = dtheta/dx^n + C1 p_n", [](const IdentityContext& x) {
                    const FinsleroidPoint P = finsleroid_point(x);
                    const ConnectionJet cj = connection_coeffs(x.spec, x.x, x.y, x.kc, tight());
                    const MetricJet<D4> j4 = metric_jet_d4(x.spec, x.x, x.y);
                    const Vec2d th = dtheta_dx(x.spec, x.x, x.y, DThetaRoute::Arc, oracle_quadrature());
                    Mat2d N{};
                    for (int k = 0; k < 2; ++k)
                      for (int n = 0; n < 2; ++n)
                        N[k][n] = -P.j.l_up[k] * j4.F.d[n] - P.K * P.j.m_up[k] * (th[n] + P.C1 * P.p[n]);
                    return compare(N, cj.N);
                  });

  finsleroid_conn("finsleroid-d-of-b", "d_i b = n U c^2 p_i - b d*K/K + c sqrt(q/nu) n d*theta",
                  [](const IdentityContext& x) {
                    const FinsleroidPoint P = finsleroid_point(x);
                    const ConnectionJet cj = connection_coeffs(x.spec, x.x, x.y, x.kc, tight());
                    const MetricJet<D4> j4 = metric_jet_d4(x.spec, x.x, x.y);
                    Vec2d rhs;
                    for (int i = 0; i < 2; ++i)
                      rhs[i] = P.n * P.U * P.c * P.c * P.p[i] - P.b * P.starK[i] / P.K +
                               P.c * P.sq * P.n * P.starTheta[i];
                    return compare(d_of(cj, j4.b), rhs);
                  });

  finsleroid_conn("finsleroid-d-of-n", "d_i n = -U c^2 B1 p_i - n d*K/K - c sqrt(q/nu) B1 d*theta",
                  [](const IdentityContext& x) {
                    const FinsleroidPoint P = finsleroid_point(x);
                    const ConnectionJet cj = connection_coeffs(x.spec, x.x, x.y, x.kc, tight());
                    const MetricJet<D4> j4 = metric_jet_d4(x.spec, x.x, x.y);
                    Vec2d rhs;
                    for (int i = 0; i < 2; ++i)
                      rhs[i] = -P.U * P.c * P.c * P.B1 * P.p[i] - P.n * P.starK[i] / P.K -
                               P.c * P.sq * P.B1 * P.starTheta[i];
                    return compare(d_of(cj, j4.n_y), rhs);
                  });

  finsleroid_conn("finsleroid-d-of-S-squared",
                  "(1/2) d_i S^2 = -U c^2 g n q p_i - S^2 d*K/K - c sqrt(q/nu) g n q d*theta "
                  "= -S^2 d*K/K - c sqrt(q/nu) g n q P_i",
                  [](const IdentityContext& x) {
                    const FinsleroidPoint P = finsleroid_point(x);
                    const ConnectionJet cj = connection_coeffs(x.spec, x.x, x.y, x.kc, tight());
                    const MetricJet<D4> j4 = metric_jet_d4(x.spec, x.x, x.y);
                    const Vec2d d = d_of(cj, j4.S * j4.S);
                    const double S2 = P.S * P.S, gnq = P.g * P.n * P.q;
                    Vec2d lhs, r1, r2;
                    for (int i = 0; i < 2; ++i) {
                      lhs[i] = 0.5 * d[i];
                      r1[i] = -P.U * P.c * P.c * gnq * P.p[i] - S2 * P.starK[i] / P.K - P.c * P.sq * gnq * P.starTheta[i];
                      r2[i] = -S2 * P.starK[i] / P.K - P.c * P.sq * gnq * P.Pstar[i];
                    }
                    return worst({compare(lhs, r1), compare(lhs, r2)});
                  });

  finsleroid_conn("finsleroid-d-of-q", "q d_i q = -q^2 d*K/K - c sqrt(q/nu)(b + g q) n P_i",
                  [](const IdentityContext& x) {
                    const FinsleroidPoint P = finsleroid_point(x);
                    const ConnectionJet cj = connection_coeffs(x.spec, x.x, x.y, x.kc, tight());
                    const MetricJet<D4> j4 = metric_jet_d4(x.spec, x.x, x.y);
                    const Vec2d d = d_of(cj, j4.q);
                    Vec2d lhs, rhs;
                    for (int i = 0; i < 2; ++i) {
                      lhs[i] = P.q * d[i];
                      rhs[i] = -P.q * P.q * P.starK[i] / P.K - P.c * P.sq * (P.b + P.g * P.q) * P.n * P.Pstar[i];
                    }
                    return compare(lhs, rhs);
                  });

  finsleroid_conn("finsleroid-d-of-B",
                  "d_i B = -g (1/q) n B U c^2 p_i - g (1/q) B c sqrt(q/nu) n d*theta - 2 B d*K/K + b q g_i",
                  [](const IdentityContext& x) {
                    const FinsleroidPoint P = finsleroid_point(x);
                    const ConnectionJet cj = connection_coeffs(x.spec, x.x, x.y, x.kc, tight());
                    const MetricJet<D4> j4 = metric_jet_d4(x.spec, x.x, x.y);
                    Vec2d rhs;
                    for (int i = 0; i < 2; ++i)
                      rhs[i] = -P.g / P.q * P.n * P.B * P.U * P.c * P.c * P.p[i] -
                               P.g / P.q * P.B * P.c * P.sq * P.n * P.starTheta[i] - 2.0 * P.B * P.starK[i] / P.K +
                               P.b * P.q * P.f.dg[i];
                    return compare(d_of(cj, j4.fs.B), rhs);
                  });

  finsleroid_conn("finsleroid-d-of-b-over-q",
                  "d_i (b/q) = (n/q^3) B (U c^2 p_i + c sqrt(q/nu) d*theta) = (n/q^3) B c sqrt(q/nu)(C1 p_i + d*theta)",
                  [](const IdentityContext& x) {
                    const FinsleroidPoint P = finsleroid_point(x);
                    const ConnectionJet cj = connection_coeffs(x.spec, x.x, x.y, x.kc, tight());
                    const MetricJet<D4> j4 = metric_jet_d4(x.spec, x.x, x.y);
                    const double pre = P.n / (P.q * P.q * P.q) * P.B;
                    Vec2d r1, r2;
                    for (int i = 0; i < 2; ++i) {
                      r1[i] = pre * (P.U * P.c * P.c * P.p[i] + P.c * P.sq * P.starTheta[i]);
                      r2[i] = pre * P.c * P.sq * P.Pstar[i];
                    }
                    const Vec2d d = d_of(cj, j4.b / j4.q);
                    return worst({compare(d, r1), compare(d, r2)});
                  });

  finsleroid_conn("finsleroid-d-of-T",
                  "(1/T) d_i T = (b q/(2B))(1/X - 4) g_i + 2 d*K/K + g (n/(2q))(1/X)(U c^2 p_i + c sqrt(q/nu) d*theta)",
                  [](const IdentityContext& x) {
                    const FinsleroidPoint P = finsleroid_point(x);
                    const ConnectionJet cj = connection_coeffs(x.spec, x.x, x.y, x.kc, tight());
                    const MetricJet<D4> j4 = metric_jet_d4(x.spec, x.x, x.y);
                    const Vec2d d = d_of(cj, j4.Tf);
                    Vec2d lhs, rhs;
                    for (int i = 0; i < 2; ++i) {
                      lhs[i] = d[i] / P.T;
                      rhs[i] = P.b * P.q / (2.0 * P.B) * (P.invX - 4.0) * P.f.dg[i] + 2.0 * P.starK[i] / P.K +
                               P.g * P.n / (2.0 * P.q) * P.invX *
                                   (P.U * P.c * P.c * P.p[i] + P.c * P.sq * P.starTheta[i]);
                    }
                    return compare(lhs, rhs);
                  });

  finsleroid_conn("finsleroid-d-of-K-m-upper",
                  "d_i (K m^n) = -K m^n (1/2)(q/nu)(1 - c^2)(g_i b/q + g (n/q^3) B c sqrt(q/nu) P_i) "
                  "- (1/c) sqrt(q/nu) y^n p_i + c sqrt(q/nu) g_i q n^n - c sqrt(q/nu)(1/c^2) g q b^n p_i - m^n d*K "
                  "+ (q/nu)[y^n - (n/q) g c^2 (b + g q) n^n + g q b^n] P_i",
                  [](const IdentityContext& x) {
                    const FinsleroidPoint P = finsleroid_point(x);
                    const ConnectionJet cj = connection_coeffs(x.spec, x.x, x.y, x.kc, tight());
                    const MetricJet<D4> j4 = metric_jet_d4(x.spec, x.x, x.y);
                    const double c = P.c, g = P.g, b = P.b, n = P.n, q = P.q, nu = P.nu, sq = P.sq;
                    Mat2d lhs{}, rhs{};
                    for (int k = 0; k < 2; ++k) {
                      const Vec2d d = d_of(cj, j4.F * j4.m_up[k]);
                      for (int i = 0; i < 2; ++i) {
                        // the free index is differentiated covariantly in a_ij
                        lhs[k][i] = d[i] + P.K * (P.f.gamma[k][i][0] * P.j.m_up[0] + P.f.gamma[k][i][1] * P.j.m_up[1]);
                        const double gi = P.f.dg[i];
                        rhs[k][i] =
                            -P.K * P.j.m_up[k] * 0.5 * q / nu * (1.0 - c * c) *
                                (gi * b / q + g * n / (q * q * q) * P.B * c * sq * P.Pstar[i]) -
                            sq / c * x.y[k] * P.p[i] + c * sq * gi * q * P.f.n_up[k] -
                            c * sq / (c * c) * g * q * P.bu[k] * P.p[i] - P.j.m_up[k] * P.starK[i] +
                            q / nu * (x.y[k] - n / q * g * c * c * (b + g * q) * P.f.n_up[k] + g * q * P.bu[k]) *
                                P.Pstar[i];
                      }
                    }
                    return compare(lhs, rhs);
                  });

  finsleroid_conn("finsleroid-N-nm-form",
                  "N^k_nm = (-l_m m^k + l^k m_m - g c m^k m_m (1/(2X)) n/sqrt(q nu)) P_n - l^k d*_n l_m "
                  "- m^k d*_n m_m + (1/c^2)(b_m n^k - n_m b^k) p_n - a^k_nm",
                  [](const IdentityContext& x) {
                    const FinsleroidPoint P = finsleroid_point(x);
                    const ConnectionJet cj = derivative_coeffs(x.spec, x.x, x.y, x.kc, tight());
                    const MetricJet<D1> jd = charge_jet(P.f, x.y);
                    const double coef = P.g * P.c * 0.5 * P.invX * P.n / std::sqrt(P.q * P.nu);
                    Arr3d rhs{};
                    for (int k = 0; k < 2; ++k)
                      for (int n = 0; n < 2; ++n)
                        for (int m = 0; m < 2; ++m) {
                          const double gn = P.f.dg[n];
                          rhs[k][n][m] = (-P.j.l[m] * P.j.m_up[k] + P.j.l_up[k] * P.j.m[m] -
                                          coef * P.j.m_up[k] * P.j.m[m]) *
                                             P.Pstar[n] -
                                         P.j.l_up[k] * gn * jd.l[m].d[0] - P.j.m_up[k] * gn * jd.m[m].d[0] +
                                         (P.bl[m] * P.f.n_up[k] - P.f.n[m] * P.bu[k]) * P.p[n] / (P.c * P.c) -
                                         P.f.gamma[k][n][m];
                        }
                    return compare(cj.Nnm, rhs);
                  });

  finsleroid_conn("finsleroid-N-nmi-Z-form",
                  "N^k_nmi = (1/K) Z_n m^k m_m m_i, Z_n = -(3/4) g (1 - c^2)^2 B^2 (2 b nu + g c^2 n^2) P_n/(q^3 nu^3) "
                  "+ (1/2) n c d*_n (g (1/X)/sqrt(q nu))",
                  [](const IdentityContext& x) {
                    const FinsleroidPoint P = finsleroid_point(x);
                    const ConnectionJet cj = derivative_coeffs(x.spec, x.x, x.y, x.kc, tight());
                    const Vec2d Z = finsleroid_Z(x.spec, x.x, x.y, x.kc, tight());
                    Arr4d rhs{};
                    for (int k = 0; k < 2; ++k)
                      for (int n = 0; n < 2; ++n)
                        for (int m = 0; m < 2; ++m)
                          for (int i = 0; i < 2; ++i)
                            rhs[k][n][m][i] = Z[n] * P.j.m_up[k] * P.j.m[m] * P.j.m[i] / P.K;
                    return compare(cj.Nnmi, rhs);
                  });

  // ---- curvature

  auto& comm = add("curvature-closed-forms-vs-commutator",
                   "M^n_ij = d_i N^n_j - d_j N^n_i = F m^n M_ij, M_ij = dk_j/dx^i - dk_i/dx^j; "
                   "E_k^n_ij = d_i D^n_jk - d_j D^n_ik + D D - D D = (-l_k m^n + l^n m_k + I m_k m^n) M_ij "
                   "= -dM^n_ij/dy^k",
                   TC::NestedFD, kAllFamilies, [](const IdentityContext& x) {
                     const CurvatureJet cv = curvature_closed(x.spec, x.x, x.y, x.kc);
                     const CommutatorOracle o = curvature_commutator_oracle(x.spec, x.x, x.y, x.kc);
                     return worst({compare(o.Mn, cv.Mn), compare(o.E, cv.E), compare(o.E_from_M, cv.E)});
                   });
  comm.max_samples = 6;

  add("curvature-identity-set",
      "y_n M^n_ij = 0, y^k E_k^n_ij = -M^n_ij, y_n E_k^n_ij = g_kn M^n_ij, E_mnij + E_nmij = 2 C_mnh M^h_ij",
      TC::ClosedForm, kAllFamilies, [](const IdentityContext& x) {
        const CurvatureJet cv = curvature_closed(x.spec, x.x, x.y, x.kc);
        const MetricJet<double> j = jet_of(x);
        Mat2d yM{};
        Arr3d yE{}, yEl{}, gM{};
        Arr4d sym{}, cM{};
        for (int i = 0; i < 2; ++i)
          for (int jj = 0; jj < 2; ++jj) {
            for (int n = 0; n < 2; ++n) {
              yM[i][jj] += j.y_lo[n] * cv.Mn[n][i][jj];
              for (int k = 0; k < 2; ++k) {
                yE[n][i][jj] += x.y[k] * cv.E[k][n][i][jj];
                yEl[k][i][jj] += j.y_lo[n] * cv.E[k][n][i][jj];
                gM[k][i][jj] += j.g[k][n] * cv.Mn[n][i][jj];
              }
            }
            for (int m = 0; m < 2; ++m)
              for (int n = 0; n < 2; ++n) {
                double Em = 0.0, En = 0.0, CM = 0.0;
                for (int h = 0; h < 2; ++h) {
                  Em += j.g[n][h] * cv.E[m][h][i][jj];
                  En += j.g[m][h] * cv.E[n][h][i][jj];
                  CM += 2.0 * j.I * j.m[m] * j.m[n] * j.m[h] / j.F * cv.Mn[h][i][jj];
                }
                sym[m][n][i][jj] = Em + En;
                cM[m][n][i][jj] = CM;
              }
          }
        Arr3d minusM{};
        for (int n = 0; n < 2; ++n)
          for (int i = 0; i < 2; ++i)
            for (int jj = 0; jj < 2; ++jj) minusM[n][i][jj] = -cv.Mn[n][i][jj];
        const double sc = curl_scale(cv) * std::max(1.0, j.F);
        return worst({vanishes(yM, sc), compare(yE, minusM), compare(yEl, gM), compare(sym, cM)});
      });

  add("rho-from-E-and-cartan", "rho_k^n_ij = E_k^n_ij - M^h_ij C^n_hk = (l^n m_k - l_k m^n) M_ij = eps^n_k M_ij",
      TC::ClosedForm, kAllFamilies, [](const IdentityContext& x) {
        const CurvatureJet cv = curvature_closed(x.spec, x.x, x.y, x.kc);
        const MetricJet<double> j = jet_of(x);
        Arr4d viaE{}, viaEps{};
        for (int k = 0; k < 2; ++k)
          for (int n = 0; n < 2; ++n)
            for (int i = 0; i < 2; ++i)
              for (int jj = 0; jj < 2; ++jj) {
                double v = cv.E[k][n][i][jj];
                for (int h = 0; h < 2; ++h) v -= cv.Mn[h][i][jj] * j.I * j.m_up[n] * j.m[h] * j.m[k] / j.F;
                viaE[k][n][i][jj] = v;
                double e = 0.0;
                for (int t = 0; t < 2; ++t) e += j.g_up[n][t] * j.eps[t][k];
                viaEps[k][n][i][jj] = e * cv.M[i][jj];
              }
        return worst({compare(viaE, cv.rho), compare(viaEps, cv.rho)});
      });

  add("rho-skew-symmetry", "rho_mnij = -rho_nmij", TC::ClosedForm, kAllFamilies, [](const IdentityContext& x) {
    const CurvatureJet cv = curvature_closed(x.spec, x.x, x.y, x.kc);
    Arr4d s{};
    for (int m = 0; m < 2; ++m)
      for (int n = 0; n < 2; ++n)
        for (int i = 0; i < 2; ++i)
          for (int jj = 0; jj < 2; ++jj) s[m][n][i][jj] = cv.rho_low[m][n][i][jj] + cv.rho_low[n][m][i][jj];
    return vanishes(s, max_abs(cv.rho_low));
  });

  add("rho-lower-epsilon-form",
      "rho_knij = eps_nk M_ij, l_n m_k - l_k m_n = T (b_n n_k - b_k n_n), rho_knij = T (b_n n_k - b_k n_n) M_ij",
      TC::ClosedForm, kAllFamilies, [](const IdentityContext& x) {
        const CurvatureJet cv = curvature_closed(x.spec, x.x, x.y, x.kc);
        const Frame<double> f = frame_of(x);
        const MetricJet<double> j = metric_jet(x.spec.kind, f, x.y);
        const double c = family_c(x.spec.kind, f);
        Mat2d lm{}, Tbn{};
        Arr4d viaT{};
        for (int n = 0; n < 2; ++n)
          for (int k = 0; k < 2; ++k) {
            lm[n][k] = j.l[n] * j.m[k] - j.l[k] * j.m[n];
            Tbn[n][k] = j.Tf * c * (f.bt[n] * f.n[k] - f.bt[k] * f.n[n]);
            for (int i = 0; i < 2; ++i)
              for (int jj = 0; jj < 2; ++jj) viaT[k][n][i][jj] = Tbn[n][k] * cv.M[i][jj];
          }
        Arr4d viaEps{};
        for (int k = 0; k < 2; ++k)
          for (int n = 0; n < 2; ++n)
            for (int i = 0; i < 2; ++i)
              for (int jj = 0; jj < 2; ++jj) viaEps[k][n][i][jj] = j.eps[n][k] * cv.M[i][jj];
        return worst({compare(lm, Tbn), compare(viaEps, cv.rho_low), compare(viaT, cv.rho_low)});
      });

  auto& rule = add("commutator-rule",
                   "(D_i D_j - D_j D_i) w^n_k = M^h_ij S_h w^n_k - rho_k^h_ij w^n_h + rho_h^n_ij w^h_k, "
                   "S_h w^n_k = dw^n_k/dy^h + C^n_hs w^s_k - C^s_hk w^n_s",
                   TC::NestedFD, kAllFamilies, [](const IdentityContext& x) {
                     const CommutatorAction a = commutator_action(x.spec, x.x, x.y, x.kc, TestTensor::Generic);
                     return compare(a.lhs, a.rhs);
                   });
  rule.max_samples = 3;

  return c;
}

}  // namespace

const std::vector<IdentityRecord>& identity_catalog() {
  static const std::vector<IdentityRecord> catalog = build_catalog();
  return catalog;
}

const std::vector<CoverageItem>& coverage_list() {
  static const std::vector<CoverageItem> items{
      // definitions
      {"riemannian metric S = sqrt(a_ij y^i y^j), frame b~, n and eps", "", "make_frame, metric_jet"},
      {"finsleroid metric function K(g; b, q) and its branch continuation", "", "finsleroid_scalars, metric_jet"},
      {"randers metric function F = S + b~_i y^i scaled by c", "", "metric_jet"},
      {"finsleroid abbreviations h, G, B, B1, L, f, J, nu, X, eta", "", "finsleroid_scalars"},
      {"angle theta as the indicatrix arc from b~", "", "theta_in_frame, arc_density"},
      {"charts C1..C4 and the variables w~ and t", "", "chart_of, primitives"},
      {"connection coefficients N^k_n from the angle rule and F preservation", "", "connection_coeffs"},
      {"k_n choices: frame multiple of n^h nabla_n b~_h, zero, user field", "", "KChoice, k_field"},
      {"covariant derivative D on mixed tensors", "", "covariant_derivative"},
      {"vertical derivative S_h with the Cartan tensor", "", "s_derivative"},
      {"horizontal transport dy^k/dt + N^k_n(x, y) dx^n/dt = 0", "", "horizontal_lift"},
      {"riemannian curvature tensor a_k^n_ij and scalar R", "", "riemann_curvature"},
      // metric identities
      {"finsleroid L^2 + h^2 b^2 = B", "finsleroid-L-square-identity", ""},
      {"B and B1 decomposition", "finsleroid-B-decomposition", ""},
      {"nu > 0", "finsleroid-nu-positive", ""},
      {"c^2 S^2 - b^2 relations", "finsleroid-c2S2-relations", ""},
      {"axis values at y = b^i", "finsleroid-values-on-axis", ""},
      {"zero-charge reduction", "finsleroid-zero-charge-is-riemannian", ""},
      {"covariant tangent vector y_i", "covariant-y-is-half-gradient-of-F-squared", ""},
      {"metric tensor g_ij", "metric-tensor-is-hessian-of-half-F-squared", ""},
      {"inverse metric g^ij", "inverse-metric-closed-form", ""},
      {"finsleroid determinant", "finsleroid-determinant", ""},
      {"X two forms", "finsleroid-X-two-forms", ""},
      {"Cartan vector from the determinant", "cartan-vector-from-log-determinant", ""},
      {"finsleroid Cartan vector A_i and A^i", "finsleroid-cartan-vector-closed", ""},
      {"A^i A_i and the main scalar", "finsleroid-cartan-norm", ""},
      {"T and the determinant ratio", "T-is-scaled-determinant-ratio", ""},
      {"m_i from eps and family forms", "m-lower-closed-form", ""},
      {"m^i family forms", "m-upper-is-raised-m", ""},
      {"orthonormal pair l, m", "orthonormal-frame-l-m", ""},
      {"Cartan tensor I m m m", "cartan-tensor-from-metric-derivative", ""},
      {"F dtheta/dy = m", "angle-gradient-is-m-over-F", ""},
      {"y-derivatives of m_k and m^k", "m-y-derivatives", ""},
      {"y-derivative of K m^k", "finsleroid-K-m-upper-y-derivative", ""},
      {"y-derivative of T/K", "finsleroid-T-over-K-y-derivative", ""},
      {"y-derivative of m_m for the finsleroid", "finsleroid-m-lower-y-derivative", ""},
      {"x-derivative of K with nabla b", "finsleroid-K-x-derivative", ""},
      {"charge derivative of K", "finsleroid-charge-derivative-of-K", ""},
      {"x-derivative of K with p", "finsleroid-K-x-derivative-with-p", ""},
      // angle
      {"w~ chart derivative", "chart-w-tilde-angle-derivative", ""},
      {"t chart derivative", "chart-t-angle-derivative", ""},
      {"chart derivatives positive", "chart-angle-derivatives-positive", ""},
      {"theta^I, theta^II and theta^max", "theta-bounds-integrals", ""},
      {"range of theta", "theta-range", ""},
      {"chart integral Theta~", "chart-angle-integral-matches-theta", ""},
      {"Theta~ charge derivative", "chart-integral-charge-derivative", ""},
      {"Theta~ axis-norm derivative", "chart-integral-axis-norm-derivative", ""},
      {"dtheta/dx assembly", "angle-x-derivative-routes", ""},
      {"dtheta/dx chart forms", "chart-route-angle-x-derivative", ""},
      {"metric in (F, theta) coordinates", "tangent-metric-in-F-theta-coordinates", ""},
      {"sector area", "sector-area-is-half-angle", ""},
      {"indicatrix length", "indicatrix-arclength-is-theta-max", ""},
      // connection
      {"F preserved", "connection-preserves-F", ""},
      {"angle rule d_n theta = k_n", "connection-angle-rule", ""},
      {"y_k N^k_nmi = 0", "y-lower-annihilates-N-nmi", ""},
      {"two-vector angle preserved", "two-vector-angle-preserved", ""},
      {"N^k_nm", "connection-y-derivative", ""},
      {"N^k_nmi", "connection-second-y-derivative", ""},
      {"N^k_nmi through d_n I", "N-nmi-main-scalar-form", ""},
      {"D y_j = 0", "covariant-y-lower-vanishes", ""},
      {"metricity", "metric-compatibility", ""},
      {"N = -D y", "N-is-D-contracted-with-y", ""},
      {"D y^j = 0", "covariant-y-upper-vanishes", ""},
      {"D m^k = 0", "covariant-m-upper-vanishes", ""},
      {"riemannian L form", "riemannian-connection-L-form", ""},
      {"riemannian limit", "riemannian-limit-is-christoffel", ""},
      {"riemannian angle representation", "riemannian-angle-representation", ""},
      {"frame on the axis", "frame-on-axis", ""},
      {"frame derivative identities", "frame-derivative-identities", ""},
      {"finsleroid connection forms", "finsleroid-connection-axis-forms", ""},
      {"N^k_n y_k", "finsleroid-connection-contracted-with-y", ""},
      {"finsleroid angle rule", "finsleroid-angle-connection-rule", ""},
      {"N^k_n m_k and dtheta/dx decomposition", "finsleroid-angle-x-derivative-decomposition", ""},
      {"two-term form of N", "finsleroid-connection-two-term-form", ""},
      {"d_i b", "finsleroid-d-of-b", ""},
      {"d_i n", "finsleroid-d-of-n", ""},
      {"d_i S^2", "finsleroid-d-of-S-squared", ""},
      {"d_i q", "finsleroid-d-of-q", ""},
      {"d_i B", "finsleroid-d-of-B", ""},
      {"d_i (b/q)", "finsleroid-d-of-b-over-q", ""},
      {"d_i T", "finsleroid-d-of-T", ""},
      {"d_i (K m^n)", "finsleroid-d-of-K-m-upper", ""},
      {"finsleroid N^k_nm", "finsleroid-N-nm-form", ""},
      {"finsleroid N^k_nmi with Z", "finsleroid-N-nmi-Z-form", ""},
      // curvature
      {"M^n_ij and E_k^n_ij", "curvature-closed-forms-vs-commutator", ""},
      {"curvature identity set", "curvature-identity-set", ""},
      {"rho from E", "rho-from-E-and-cartan", ""},
      {"rho skew", "rho-skew-symmetry", ""},
      {"rho lower forms", "rho-lower-epsilon-form", ""},
      {"commutator rule", "commutator-rule", ""},
      {"riemannian counterpart curvature", "riemann-counterpart-curvature", ""},
      {"factorization", "factorization-theorem", ""},
      {"f1 = c T", "f1-is-c-T", ""},
      {"two-dimensional riemann tensor", "riemannian-two-dimensional-curvature", ""},
  };
  return items;
}

}  // namespace finsler2d
