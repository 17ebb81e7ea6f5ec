#pragma once

// Background Riemannian data: metric, orthonormal frame {b̃, n}, Christoffel
// symbols and frame derivatives. Templated on the scalar type so the same code
// yields x-derivatives when instantiated with duals lifted from field samples.

#include <type_traits>

#include "finsler2d/errors.hpp"
#include "finsler2d/manifold.hpp"
#include "finsler2d/tensor.hpp"

namespace finsler2d {

// Sign of the default connection 1-form k_n = σ_k n^h ∇_n b̃_h. The value -1 makes
// the Riemannian limit of the connection torsion free (see the acceptance test).
inline constexpr int kDefaultKSign = -1;

// Value and first x-partials of a field, each of scalar type T.
template <class T>
struct Lifted {
  T v{};
  Vec2<T> d{};
};

// double: value and gradient. Dual<double, N>: x-directions 0 and 1 carry the
// gradient (for the value) and the Hessian rows (for the partials).
template <class T>
Lifted<T> lift(const FieldSample& s) {
  Lifted<T> r;
  if constexpr (std::is_same_v<T, double>) {
    r.v = s.v;
    r.d = s.grad;
  } else {
    r.v = T(s.v);
    r.v.d[0] = s.grad[0];
    r.v.d[1] = s.grad[1];
    for (int i = 0; i < 2; ++i) {
      r.d[i] = T(s.grad[i]);
      r.d[i].d[0] = s.hess[i][0];
      r.d[i].d[1] = s.hess[i][1];
    }
  }
  return r;
}

template <class T>
struct Frame {
  Mat2<T> a{}, ainv{};
  T sqrt_det{};
  Vec2<T> bt{}, bt_up{};  // b̃_i, b̃^i
  Vec2<T> n{}, n_up{};    // n_i, n^i
  Mat2<T> eps{};          // ε^Riem_ij = σ √det(a) γ_ij
  T g{}, c{};
  Vec2<T> dg{}, dc{};
  Arr3<T> da{};        // da[k][i][j] = ∂_k a_ij
  Mat2<T> dbt{};       // dbt[k][i] = ∂_k b̃_i
  Arr3<T> gamma{};     // gamma[k][n][h] = a^k_{nh}
  Mat2<T> nabla_bt{};  // nabla_bt[n][h] = ∇_n b̃_h
  Vec2<T> phat{};      // n^h ∇_n b̃_h
  int orientation = 1;
};

template <class T>
Frame<T> make_frame(const FieldPoint& fp, int orientation) {
  Frame<T> f;
  f.orientation = orientation;
  Lifted<T> la[2][2], lb[2];
  for (int i = 0; i < 2; ++i) {
    lb[i] = lift<T>(fp.bt[i]);
    for (int j = 0; j < 2; ++j) la[i][j] = lift<T>(fp.a[i][j]);
  }
  const Lifted<T> lg = lift<T>(fp.g), lc = lift<T>(fp.c);
  f.g = lg.v;
  f.c = lc.v;
  f.dg = lg.d;
  f.dc = lc.d;
  for (int i = 0; i < 2; ++i) {
    f.bt[i] = lb[i].v;
    for (int j = 0; j < 2; ++j) {
      f.a[i][j] = la[i][j].v;
      for (int k = 0; k < 2; ++k) f.da[k][i][j] = la[i][j].d[k];
    }
    for (int k = 0; k < 2; ++k) f.dbt[k][i] = lb[i].d[k];
  }
  const T d = det(f.a);
  if (!(primal(d) > 0.0) || !(primal(f.a[0][0]) > 0.0)) throw SingularMetric(fp.x);
  f.ainv = inverse(f.a);
  f.sqrt_det = sqrt(d);
  const double s = orientation >= 0 ? 1.0 : -1.0;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) f.eps[i][k] = s * levi(i, k) * f.sqrt_det;
  f.bt_up = contract(f.ainv, f.bt);
  // n_i = -ε^Riem_ik b̃^k
  for (int i = 0; i < 2; ++i) f.n[i] = -(f.eps[i][0] * f.bt_up[0] + f.eps[i][1] * f.bt_up[1]);
  f.n_up = contract(f.ainv, f.n);

  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < 2; ++n)
      for (int h = 0; h < 2; ++h) {
        T acc{};
        for (int j = 0; j < 2; ++j)
          acc += f.ainv[k][j] * (f.da[n][j][h] + f.da[h][j][n] - f.da[j][n][h]);
        f.gamma[k][n][h] = 0.5 * acc;
      }
  for (int n = 0; n < 2; ++n) {
    for (int h = 0; h < 2; ++h)
      f.nabla_bt[n][h] = f.dbt[n][h] - (f.gamma[0][n][h] * f.bt[0] + f.gamma[1][n][h] * f.bt[1]);
    f.phat[n] = f.n_up[0] * f.nabla_bt[n][0] + f.n_up[1] * f.nabla_bt[n][1];
  }
  return f;
}

inline Frame<double> frame_at(const ManifoldSpec& spec, const Vec2d& x) {
  return make_frame<double>(sample_fields(spec, x), spec.orientation);
}

struct RiemannPointData {
  Mat2d a, ainv;
  double sqrt_det_a = 0.0;
  Vec2d btilde, btilde_up, n, n_up;
  Arr3d christoffel;  // [k][n][h] = a^k_{nh}
  Mat2d eps_riem;
};

RiemannPointData riemann_at(const ManifoldSpec& spec, const Vec2d& x);

struct RiemannCurvature {
  Arr4d tensor;  // [k][n][i][j] = a_k^n_{ij}
  double R = 0.0;  // a^{ti} a^{lj} a_{tlij} = 2R
  double factorization_residual = 0.0;  // max |a_tlij + R(n_t b̃_l - n_l b̃_t)(n_j b̃_i - n_i b̃_j)|
  double contraction_residual = 0.0;    // max |n^t b̃^l a_tlij (b̃_k n_n - n_k b̃_n) + a_knij|
};

RiemannCurvature riemann_curvature(const ManifoldSpec& spec, const Vec2d& x);

// Riemannian curvature tensor from a frame whose scalar type carries x-derivatives.
template <class T>
Arr4d riemann_tensor_from(const Frame<T>& f) {
  Arr4d r{};
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < 2; ++n)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          double v = f.gamma[n][j][k].d[i] - f.gamma[n][i][k].d[j];
          for (int m = 0; m < 2; ++m)
            v += primal(f.gamma[m][j][k]) * primal(f.gamma[n][i][m]) -
                 primal(f.gamma[m][i][k]) * primal(f.gamma[n][j][m]);
          r[k][n][i][j] = v;
        }
  return r;
}

// Riemannian angle atan2(n(y), b̃(y)).
double riemann_angle(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y);

struct FrameDerivatives {
  Mat2d nabla_btilde;  // [n][h] = ∇_n b̃_h
  Vec2d p;             // c n^h ∇_n b̃_h
  Vec2d k;             // σ_k n^h ∇_n b̃_h
  int k_sign = kDefaultKSign;
};

FrameDerivatives frame_derivatives(const ManifoldSpec& spec, const Vec2d& x, int k_sign = kDefaultKSign);

// k_n = σ_k n^h ∇_n b̃_h.
Vec2d default_k(const ManifoldSpec& spec, const Vec2d& x, int k_sign = kDefaultKSign);

}  // namespace finsler2d
