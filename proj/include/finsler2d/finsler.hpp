#pragma once

// Pointwise Finsler data for the three metric families behind one template.
// b denotes the axis 1-form b_i y^i with b_i = c b̃_i; the Riemannian family
// uses c = 1 and b = b̃(y).

#include <functional>
#include <numbers>

#include "finsler2d/riemann.hpp"

namespace finsler2d {

struct Primitives {
  double b = 0.0, n = 0.0, S = 0.0, q = 0.0;
  double w_tilde = 0.0;  // n/b, infinite when b = 0
  double w = 0.0;        // q/|b|
  double t = 0.0;        // -b/q for n > 0, b/q for n < 0
};

template <class T>
struct FinsleroidScalars {
  T h{}, G{}, B{}, B1{}, L{}, f{}, J{}, K{}, nu{}, invX{}, eta{}, Tf{}, Mbar{};
};

template <class T>
struct MetricJet {
  T F{};
  T S{}, bt_y{}, n_y{}, b{}, q{};
  Vec2<T> u{};               // a_ij y^j
  Vec2<T> l{}, l_up{};       // l_i, l^i
  Vec2<T> y_lo{};            // y_i = F l_i
  Mat2<T> g{}, g_up{};       // g_ij, g^ij
  T det_ratio{};             // det(g)/det(a)
  Vec2<T> m{}, m_up{};       // m_i, m^i
  Mat2<T> eps{};             // ε_ik
  T I{};                     // main scalar
  T Tf{};                    // T = (1/c) sqrt(det ratio)
  FinsleroidScalars<T> fs{};  // populated for the Finsleroid family
};

namespace detail {

// atan(L/(hb)) on the b >= 0 branch, continued to b < 0 with the +π shift.
template <class T>
T finsleroid_angle(const T& L, const T& hb) {
  return std::numbers::pi / 2 - atan2(hb, L);
}

}  // namespace detail

template <class T>
FinsleroidScalars<T> finsleroid_scalars(const T& g, const T& c, const T& b, const T& q) {
  FinsleroidScalars<T> s;
  s.h = sqrt(1.0 - g * g / 4.0);
  s.G = g / s.h;
  s.B = b * b + g * b * q + q * q;
  s.B1 = b / (c * c) + g * q;
  s.L = q + g * b / 2.0;
  s.f = -atan(s.G / 2.0) + detail::finsleroid_angle(s.L, s.h * b);
  s.J = exp(-s.G * s.f / 2.0);
  s.K = sqrt(s.B) * s.J;
  s.nu = q + (1.0 - c * c) * g * b;
  s.invX = 2.0 + (1.0 - c * c) * s.B / (q * s.nu);
  s.eta = 1.0 / (1.0 + g * c * sqrt(1.0 - c * c));
  s.Tf = sqrt(s.nu / q) * s.K * s.K / (c * s.B);
  const T h3 = s.h * s.h * s.h;
  s.Mbar = -s.f / h3 + s.G * q * q / (2.0 * s.h * s.B) + b * q / (s.h * s.h * s.B);
  return s;
}

// All pointwise metric quantities at (frame, y).
template <class T>
MetricJet<T> metric_jet(MetricKind kind, const Frame<T>& fr, const Vec2<T>& y) {
  if (primal(y[0]) == 0.0 && primal(y[1]) == 0.0) throw ZeroVector();
  MetricJet<T> j;
  const T c = kind == MetricKind::Riemannian ? T(1.0) : fr.c;
  j.u = contract(fr.a, y);
  j.S = sqrt(dot(j.u, y));
  j.bt_y = dot(fr.bt, y);
  j.n_y = dot(fr.n, y);
  j.b = c * j.bt_y;
  j.q = sqrt((1.0 - c * c) * j.bt_y * j.bt_y + j.n_y * j.n_y);
  const T& S = j.S;
  const T& b = j.b;
  const T& n = j.n_y;
  const T& q = j.q;
  Vec2<T> bl, bu;  // b_i, b^i
  for (int i = 0; i < 2; ++i) {
    bl[i] = c * fr.bt[i];
    bu[i] = c * fr.bt_up[i];
  }

  switch (kind) {
    case MetricKind::Riemannian: {
      j.F = S;
      for (int i = 0; i < 2; ++i) {
        j.l[i] = j.u[i] / S;
        j.l_up[i] = y[i] / S;
        j.y_lo[i] = j.u[i];
        j.m[i] = (b * fr.n[i] - n * bl[i]) / S;
        j.m_up[i] = (b * fr.n_up[i] - n * bu[i]) / S;
      }
      j.g = fr.a;
      j.g_up = fr.ainv;
      j.det_ratio = T(1.0);
      j.I = T(0.0);
      j.Tf = T(1.0);
      break;
    }
    case MetricKind::Randers: {
      j.F = S + b;
      const T& F = j.F;
      const T FS = F / S;
      j.det_ratio = FS * FS * FS;
      j.Tf = sqrt(j.det_ratio) / c;
      const T km = sqrt(FS) / (c * S);
      const T ku = sqrt(S / F) / (c * F);
      for (int i = 0; i < 2; ++i) {
        j.l[i] = j.u[i] / S + bl[i];
        j.l_up[i] = y[i] / F;
        j.y_lo[i] = F * j.l[i];
        j.m[i] = km * (b * fr.n[i] - n * bl[i]);
        j.m_up[i] = ku * (-n * bu[i] + (b + c * c * S) * fr.n_up[i]);
      }
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
          j.g[i][k] = j.l[i] * j.l[k] + j.m[i] * j.m[k];
          j.g_up[i][k] = j.l_up[i] * j.l_up[k] + j.m_up[i] * j.m_up[k];
        }
      j.I = -1.5 * c * n / sqrt(S * F);
      break;
    }
    case MetricKind::Finsleroid: {
      const T& g = fr.g;
      j.fs = finsleroid_scalars(g, c, b, q);
      const auto& s = j.fs;
      j.F = s.K;
      const T K2B = s.K * s.K / s.B;
      const T S2 = S * S;
      for (int i = 0; i < 2; ++i) {
        j.y_lo[i] = (j.u[i] + g * q * bl[i]) * K2B;
        j.l[i] = j.y_lo[i] / s.K;
        j.l_up[i] = y[i] / s.K;
      }
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
          const T inner = (g * q * q - b * S2 / q) * bl[i] * bl[k] - (b / q) * j.u[i] * j.u[k] +
                          (S2 / q) * (bl[i] * j.u[k] + bl[k] * j.u[i]);
          j.g[i][k] = (fr.a[i][k] + g / s.B * inner) * K2B;
          const T inv = fr.ainv[i][k] + g / s.nu * (b * bu[i] * bu[k] - bu[i] * y[k] - bu[k] * y[i]) +
                        g / (s.B * s.nu) * (b + g * c * c * q) * y[i] * y[k];
          j.g_up[i][k] = inv / K2B;
        }
      j.det_ratio = s.nu / q * K2B * K2B;
      j.Tf = s.Tf;
      const T sq = sqrt(q / s.nu);
      for (int i = 0; i < 2; ++i) {
        j.m[i] = s.Tf / s.K * (b * fr.n[i] - n * bl[i]);
        j.m_up[i] = c * sq * ((b * fr.n_up[i] - n * bu[i]) / (c * c) + g * q * fr.n_up[i]) / s.K;
      }
      j.I = -g * c * s.invX * n / (2.0 * sqrt(q * s.nu));
      break;
    }
  }
  const T sd = sqrt(j.det_ratio) * fr.sqrt_det;
  const double sigma = fr.orientation >= 0 ? 1.0 : -1.0;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) j.eps[i][k] = sigma * levi(i, k) * sd;
  return j;
}

// Throws DegenerateC / ParamRange when c or g is outside the family's range.
void check_family_params(MetricKind kind, const Frame<double>& f);

// Double-valued jet at (x, y).
MetricJet<double> metric_at(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y);

Primitives primitives(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y);

// Finsleroid scalars and jet; throws ParamRange when g or c is out of range.
std::pair<FinsleroidScalars<double>, MetricJet<double>> finsleroid_jet(const ManifoldSpec& spec, const Vec2d& x,
                                                                       const Vec2d& y);
MetricJet<double> randers_jet(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y);

// F value only; cheaper than the full jet.
double metric_function(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y);

// Hessian of F²/2 by central differences with step 1e-4·|y| (oracle for g_ij).
using FEvaluator = std::function<double(const Vec2d&)>;
Mat2d metric_from_F(const FEvaluator& F, const Vec2d& y, double rel_step = 1e-4);

// Cartan scalars A_i = I m_i, A^i and A^i A_i.
struct CartanData {
  Vec2d A, A_up;
  double AA = 0.0;
  double A_ijk[2][2][2];
};
CartanData cartan(const MetricJet<double>& j);

}  // namespace finsler2d
