#pragma once

// Fixed 2-dimensional index arrays. Storage order always follows the written
// index order of the quantity, e.g. gamma[k][n][h] holds a^k_{nh}.

#include <algorithm>
#include <array>
#include <cmath>

#include "finsler2d/dual.hpp"

namespace finsler2d {

template <class T>
using Vec2 = std::array<T, 2>;
template <class T>
using Mat2 = std::array<std::array<T, 2>, 2>;
template <class T>
using Arr3 = std::array<Mat2<T>, 2>;
template <class T>
using Arr4 = std::array<Arr3<T>, 2>;

using Vec2d = Vec2<double>;
using Mat2d = Mat2<double>;
using Arr3d = Arr3<double>;
using Arr4d = Arr4<double>;

template <class T>
T det(const Mat2<T>& m) {
  return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

template <class T>
Mat2<T> inverse(const Mat2<T>& m) {
  const T inv = T(1.0) / det(m);
  Mat2<T> r;
  r[0][0] = m[1][1] * inv;
  r[0][1] = -m[0][1] * inv;
  r[1][0] = -m[1][0] * inv;
  r[1][1] = m[0][0] * inv;
  return r;
}

// m^{ij} v_j (or m_{ij} v^j).
template <class T>
Vec2<T> contract(const Mat2<T>& m, const Vec2<T>& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

template <class T>
T dot(const Vec2<T>& a, const Vec2<T>& b) {
  return a[0] * b[0] + a[1] * b[1];
}

template <class T>
T quadratic(const Mat2<T>& m, const Vec2<T>& u, const Vec2<T>& v) {
  return dot(u, contract(m, v));
}

// Levi-Civita symbol with gamma_{12} = -gamma_{21} = 1.
constexpr double levi(int i, int k) { return i == k ? 0.0 : (i == 0 ? 1.0 : -1.0); }

inline double max_abs(const Vec2d& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }
inline double max_abs(const Mat2d& m) { return std::max(max_abs(m[0]), max_abs(m[1])); }
inline double max_abs(const Arr3d& a) { return std::max(max_abs(a[0]), max_abs(a[1])); }
inline double max_abs(const Arr4d& a) { return std::max(max_abs(a[0]), max_abs(a[1])); }

inline double norm(const Vec2d& v) { return std::hypot(v[0], v[1]); }

template <class T>
Vec2<double> primal(const Vec2<T>& v) {
  return {primal(v[0]), primal(v[1])};
}
template <class T>
Mat2<double> primal(const Mat2<T>& m) {
  return {primal(m[0]), primal(m[1])};
}

}  // namespace finsler2d
