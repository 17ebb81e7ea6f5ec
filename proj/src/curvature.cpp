#include "finsler2d/curvature.hpp"

#include <cmath>

#include "finsler2d/fd.hpp"

namespace finsler2d {

namespace {

ConnectionOptions tight_options() {
  ConnectionOptions o;
  o.quadrature = oracle_quadrature();
  return o;
}

constexpr double kStepX = 1e-3;
constexpr double kStepY = 1e-3;

}  // namespace

CurvatureJet curvature_closed(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y, const KChoice& kc) {
  const MetricJet<double> j = metric_at(spec, x, y);
  const KField kf = k_field(spec, x, kc);
  const Frame<double> f = frame_at(spec, x);
  CurvatureJet c;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) c.M[i][k] = kf.dk[i][k] - kf.dk[k][i];
  for (int n = 0; n < 2; ++n) c.T[n] = f.phat[n] + kf.k[n];
  c.f1 = std::sqrt(j.det_ratio);
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < 2; ++n)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double M = c.M[a][b];
          c.Mn[n][a][b] = j.F * j.m_up[n] * M;
          c.E[k][n][a][b] = (-j.l[k] * j.m_up[n] + j.l_up[n] * j.m[k] + j.I * j.m[k] * j.m_up[n]) * M;
          c.rho[k][n][a][b] = (j.l_up[n] * j.m[k] - j.l[k] * j.m_up[n]) * M;
          c.rho_low[k][n][a][b] = j.eps[n][k] * M;
        }
  return c;
}

CommutatorOracle curvature_commutator_oracle(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y,
                                             const KChoice& kc) {
  const ConnectionOptions opt = tight_options();
  const ConnectionJet cj = derivative_coeffs(spec, x, y, kc, opt);
  const double hy = kStepY * norm(y);
  auto Nx = [&](const Vec2d& p) { return connection_coeffs(spec, p, y, kc, opt).N; };
  auto Dx = [&](const Vec2d& p) { return derivative_coeffs(spec, p, y, kc, opt).D; };
  auto Dy = [&](const Vec2d& v) { return derivative_coeffs(spec, x, v, kc, opt).D; };
  auto My = [&](const Vec2d& v) { return curvature_closed(spec, x, v, kc).Mn; };
  Mat2d dN[2];
  Arr3d dDx[2], dDy[2];
  Arr3d dMy[2];
  for (int a = 0; a < 2; ++a) {
    dN[a] = fd_partial4(Nx, x, a, kStepX);
    dDx[a] = fd_partial4(Dx, x, a, kStepX);
    dDy[a] = fd_partial4(Dy, y, a, hy);
    dMy[a] = fd_partial4(My, y, a, hy);
  }
  CommutatorOracle o;
  for (int n = 0; n < 2; ++n)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double v = dN[i][n][j] - dN[j][n][i];
        for (int h = 0; h < 2; ++h) v += -cj.N[h][i] * cj.D[n][j][h] + cj.N[h][j] * cj.D[n][i][h];
        o.Mn[n][i][j] = v;
      }
  // d_i D^n_jk = ∂_i D^n_jk + N^h_i ∂D^n_jk/∂y^h
  auto dD = [&](int i, int n, int j, int k) {
    double v = dDx[i][n][j][k];
    for (int h = 0; h < 2; ++h) v += cj.N[h][i] * dDy[h][n][j][k];
    return v;
  };
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < 2; ++n)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          double v = dD(i, n, j, k) - dD(j, n, i, k);
          for (int m = 0; m < 2; ++m) v += cj.D[m][j][k] * cj.D[n][i][m] - cj.D[m][i][k] * cj.D[n][j][m];
          o.E[k][n][i][j] = v;
          o.E_from_M[k][n][i][j] = -dMy[k][n][i][j];
        }
  return o;
}

TensorJet test_tensor(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y, TestTensor which) {
  if (which == TestTensor::LUpMLow) return field_l_up_m_low(spec, x, y);
  const Frame<D4> f = make_frame<D4>(sample_fields(spec, x), spec.orientation);
  const Vec2<D4> yv{D4::variable(y[0], 2), D4::variable(y[1], 3)};
  const Vec2<D4> u = contract(f.a, yv);
  const D4 S = sqrt(dot(u, yv));
  std::vector<D4> c;
  for (int n = 0; n < 2; ++n)
    for (int k = 0; k < 2; ++k) c.push_back(f.bt_up[n] * u[k] / S);
  return tensor_from_d4("ul", c);
}

CommutatorAction commutator_action(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y, const KChoice& kc,
                                   TestTensor which) {
  const ConnectionOptions opt = tight_options();
  const ConnectionJet cj = derivative_coeffs(spec, x, y, kc, opt);
  const TensorJet w = test_tensor(spec, x, y, which);
  // outer[j][comp][i] = 𝒟_i (𝒟_j w)_comp
  TensorDerivative outer[2];
  for (int jdir = 0; jdir < 2; ++jdir) {
    TensorEvaluator inner = [&, jdir](const Vec2d& xp, const Vec2d& yp) {
      const ConnectionJet c = derivative_coeffs(spec, xp, yp, kc, opt);
      const TensorDerivative d = covariant_derivative(c, test_tensor(spec, xp, yp, which));
      std::vector<double> out(d.size());
      for (std::size_t a = 0; a < d.size(); ++a) out[a] = d[a][jdir];
      return out;
    };
    outer[jdir] = covariant_derivative(cj, tensor_from_fd("ul", inner, x, y, kStepX, kStepY));
  }
  const MetricJet<double> mj = metric_at(spec, x, y);
  const TensorDerivative S = s_derivative(mj, w);
  const CurvatureJet cv = curvature_closed(spec, x, y, kc);
  CommutatorAction r;
  for (int n = 0; n < 2; ++n)
    for (int k = 0; k < 2; ++k) {
      const int comp = 2 * n + k;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          r.lhs[n][k][i][j] = outer[j][comp][i] - outer[i][comp][j];
          double v = 0.0;
          for (int h = 0; h < 2; ++h)
            v += cv.Mn[h][i][j] * S[comp][h] - cv.rho[k][h][i][j] * w.value[2 * n + h] +
                 cv.rho[h][n][i][j] * w.value[2 * h + k];
          r.rhs[n][k][i][j] = v;
        }
    }
  return r;
}

RiemannCounterpart riemann_counterpart(const ManifoldSpec& spec, const Vec2d& x, const KChoice& kc) {
  const Frame<D2> f = make_frame<D2>(sample_fields(spec, x), spec.orientation);
  const KField kf = k_field(spec, x, kc);
  Vec2<D2> T;
  for (int n = 0; n < 2; ++n) {
    D2 k(kf.k[n]);
    k.d[0] = kf.dk[0][n];
    k.d[1] = kf.dk[1][n];
    T[n] = f.phat[n] + k;
  }
  Arr3<D2> Lb;  // Lb[n][j][k] = L̄^n_jk
  RiemannCounterpart r;
  for (int n = 0; n < 2; ++n)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        D2 v = f.gamma[n][j][k];
        for (int t = 0; t < 2; ++t) v += f.ainv[n][t] * f.eps[t][k] * T[j];
        Lb[n][j][k] = v;
        r.L[n][j][k] = -v.v;
      }
  Mat2d M;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) M[i][j] = kf.dk[i][j] - kf.dk[j][i];
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < 2; ++n)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          double v = Lb[n][j][k].d[i] - Lb[n][i][k].d[j];
          for (int m = 0; m < 2; ++m) v += Lb[m][j][k].v * Lb[n][i][m].v - Lb[m][i][k].v * Lb[n][j][m].v;
          r.Lbar[k][n][i][j] = v;
          double e = 0.0;
          for (int t = 0; t < 2; ++t) e += f.ainv[n][t].v * f.eps[t][k].v;
          r.Lbar_expected[k][n][i][j] = e * M[i][j];
          r.lbar_residual = std::max(r.lbar_residual, std::abs(v - e * M[i][j]));
        }
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < 2; ++n)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          double v = 0.0;
          for (int h = 0; h < 2; ++h) v += f.a[n][h].v * r.Lbar[k][h][i][j];
          r.Lbar_low[k][n][i][j] = v;
        }
  return r;
}

FactorizationReport factorization_report(const ManifoldSpec& spec, const Vec2d& x, const KChoice& kc,
                                         const std::vector<Vec2d>& ys) {
  const RiemannCounterpart rc = riemann_counterpart(spec, x, kc);
  FactorizationReport rep;
  rep.max_lbar = max_abs(rc.Lbar_low);
  const Frame<double> f = frame_at(spec, x);
  for (const Vec2d& y : ys) {
    const CurvatureJet cv = curvature_closed(spec, x, y, kc);
    double worst = 0.0;
    for (int k = 0; k < 2; ++k)
      for (int n = 0; n < 2; ++n)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            worst = std::max(worst, std::abs(cv.rho_low[k][n][i][j] - cv.f1 * rc.Lbar_low[k][n][i][j]));
    if (worst >= rep.max_residual) {
      rep.max_residual = worst;
      rep.worst_y = y;
    }
    if (spec.kind == MetricKind::Finsleroid) {
      const MetricJet<double> j = metric_jet(spec.kind, f, y);
      rep.max_f1_cT = std::max(rep.max_f1_cT, std::abs(cv.f1 - f.c * j.Tf));
    }
  }
  rep.relative = rep.max_lbar > 0.0 ? rep.max_residual / rep.max_lbar : rep.max_residual;
  return rep;
}

}  // namespace finsler2d
