#include "finsler2d/riemann.hpp"

#include <cmath>

namespace finsler2d {

using D2 = Dual<double, 2>;

RiemannPointData riemann_at(const ManifoldSpec& spec, const Vec2d& x) {
  const Frame<double> f = frame_at(spec, x);
  RiemannPointData r;
  r.a = f.a;
  r.ainv = f.ainv;
  r.sqrt_det_a = f.sqrt_det;
  r.btilde = f.bt;
  r.btilde_up = f.bt_up;
  r.n = f.n;
  r.n_up = f.n_up;
  r.christoffel = f.gamma;
  r.eps_riem = f.eps;
  return r;
}

RiemannCurvature riemann_curvature(const ManifoldSpec& spec, const Vec2d& x) {
  const Frame<D2> fd = make_frame<D2>(sample_fields(spec, x), spec.orientation);
  const Frame<double> f = frame_at(spec, x);
  RiemannCurvature out;
  out.tensor = riemann_tensor_from(fd);

  // a_tlij = a_lh a_t^h_ij
  Arr4d low{};
  for (int t = 0; t < 2; ++t)
    for (int l = 0; l < 2; ++l)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          low[t][l][i][j] = f.a[l][0] * out.tensor[t][0][i][j] + f.a[l][1] * out.tensor[t][1][i][j];
  double twoR = 0.0;
  for (int t = 0; t < 2; ++t)
    for (int l = 0; l < 2; ++l)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) twoR += f.ainv[t][i] * f.ainv[l][j] * low[t][l][i][j];
  out.R = 0.5 * twoR;

  double fres = 0.0, cres = 0.0;
  for (int t = 0; t < 2; ++t)
    for (int l = 0; l < 2; ++l)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const double fact = -out.R * (f.n[t] * f.bt[l] - f.n[l] * f.bt[t]) * (f.n[j] * f.bt[i] - f.n[i] * f.bt[j]);
          fres = std::max(fres, std::abs(low[t][l][i][j] - fact));
        }
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < 2; ++n)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          double c = 0.0;
          for (int t = 0; t < 2; ++t)
            for (int l = 0; l < 2; ++l) c += f.n_up[t] * f.bt_up[l] * low[t][l][i][j];
          cres = std::max(cres, std::abs(c * (f.bt[k] * f.n[n] - f.n[k] * f.bt[n]) + low[k][n][i][j]));
        }
  out.factorization_residual = fres;
  out.contraction_residual = cres;
  return out;
}

double riemann_angle(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y) {
  if (y[0] == 0.0 && y[1] == 0.0) throw ZeroVector();
  const Frame<double> f = frame_at(spec, x);
  return std::atan2(dot(f.n, y), dot(f.bt, y));
}

FrameDerivatives frame_derivatives(const ManifoldSpec& spec, const Vec2d& x, int k_sign) {
  const Frame<double> f = frame_at(spec, x);
  FrameDerivatives r;
  r.nabla_btilde = f.nabla_bt;
  r.k_sign = k_sign;
  for (int n = 0; n < 2; ++n) {
    r.p[n] = f.c * f.phat[n];
    r.k[n] = k_sign * f.phat[n];
  }
  return r;
}

Vec2d default_k(const ManifoldSpec& spec, const Vec2d& x, int k_sign) {
  return frame_derivatives(spec, x, k_sign).k;
}

}  // namespace finsler2d
