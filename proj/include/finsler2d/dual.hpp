#pragma once

// Forward-mode dual numbers over a fixed number of directions.
//
// Dual<T, N> carries a value and N directional derivatives. T may itself be a
// Dual, which gives mixed second derivatives by nesting. All pointwise Finsler
// formulas are written as templates over the scalar type, so the same source
// evaluates values (T = double) and exact partials (T = Dual<...>).

#include <array>
#include <cmath>
#include <type_traits>

namespace finsler2d {

template <class T, int N>
struct Dual {
  T v{};
  std::array<T, N> d{};

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value) {}  // NOLINT: implicit lift of constants
  template <class U = T, std::enable_if_t<!std::is_same_v<U, double>, int> = 0>
  constexpr Dual(const T& value) : v(value) {}  // NOLINT

  static Dual variable(const T& value, int direction) {
    Dual r(value);
    r.d[direction] = T(1.0);
    return r;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const T inv = T(1.0) / o.v;
    const T q = v * inv;
    for (int i = 0; i < N; ++i) d[i] = (d[i] - q * o.d[i]) * inv;
    v = q;
    return *this;
  }
  Dual& operator*=(double s) {
    v *= s;
    for (auto& x : d) x *= s;
    return *this;
  }
};

template <class T>
struct is_dual : std::false_type {};
template <class T, int N>
struct is_dual<Dual<T, N>> : std::true_type {};
template <class T>
inline constexpr bool is_dual_v = is_dual<T>::value;

// Innermost double value of a (possibly nested) dual.
inline double primal(double x) { return x; }
template <class T, int N>
double primal(const Dual<T, N>& x) {
  return primal(x.v);
}

template <class T, int N>
Dual<T, N> operator-(const Dual<T, N>& a) {
  Dual<T, N> r;
  r.v = -a.v;
  for (int i = 0; i < N; ++i) r.d[i] = -a.d[i];
  return r;
}
template <class T, int N>
Dual<T, N> operator+(Dual<T, N> a, const Dual<T, N>& b) {
  return a += b;
}
template <class T, int N>
Dual<T, N> operator-(Dual<T, N> a, const Dual<T, N>& b) {
  return a -= b;
}
template <class T, int N>
Dual<T, N> operator*(Dual<T, N> a, const Dual<T, N>& b) {
  return a *= b;
}
template <class T, int N>
Dual<T, N> operator/(Dual<T, N> a, const Dual<T, N>& b) {
  return a /= b;
}

template <class T, int N>
Dual<T, N> operator+(Dual<T, N> a, double s) {
  a.v += s;
  return a;
}
template <class T, int N>
Dual<T, N> operator+(double s, Dual<T, N> a) {
  a.v += s;
  return a;
}
template <class T, int N>
Dual<T, N> operator-(Dual<T, N> a, double s) {
  a.v -= s;
  return a;
}
template <class T, int N>
Dual<T, N> operator-(double s, const Dual<T, N>& a) {
  Dual<T, N> r = -a;
  r.v += s;
  return r;
}
template <class T, int N>
Dual<T, N> operator*(Dual<T, N> a, double s) {
  return a *= s;
}
template <class T, int N>
Dual<T, N> operator*(double s, Dual<T, N> a) {
  return a *= s;
}
template <class T, int N>
Dual<T, N> operator/(Dual<T, N> a, double s) {
  return a *= (1.0 / s);
}
template <class T, int N>
Dual<T, N> operator/(double s, const Dual<T, N>& a) {
  const T inv = T(1.0) / a.v;
  Dual<T, N> r;
  r.v = s * inv;
  const T k = -r.v * inv;
  for (int i = 0; i < N; ++i) r.d[i] = k * a.d[i];
  return r;
}

// Comparisons look at the innermost value only; they drive branch selection.
template <class T, int N>
bool operator<(const Dual<T, N>& a, double s) {
  return primal(a) < s;
}
template <class T, int N>
bool operator>(const Dual<T, N>& a, double s) {
  return primal(a) > s;
}
template <class T, int N>
bool operator<=(const Dual<T, N>& a, double s) {
  return primal(a) <= s;
}
template <class T, int N>
bool operator>=(const Dual<T, N>& a, double s) {
  return primal(a) >= s;
}

namespace detail {
// r = f(a) with f'(a) = slope.
template <class T, int N>
Dual<T, N> chain(const Dual<T, N>& a, const T& value, const T& slope) {
  Dual<T, N> r;
  r.v = value;
  for (int i = 0; i < N; ++i) r.d[i] = slope * a.d[i];
  return r;
}
}  // namespace detail

template <class T, int N>
Dual<T, N> sqrt(const Dual<T, N>& a) {
  using std::sqrt;
  const T s = sqrt(a.v);
  return detail::chain(a, s, T(0.5) / s);
}
template <class T, int N>
Dual<T, N> exp(const Dual<T, N>& a) {
  using std::exp;
  const T e = exp(a.v);
  return detail::chain(a, e, e);
}
template <class T, int N>
Dual<T, N> log(const Dual<T, N>& a) {
  using std::log;
  return detail::chain(a, log(a.v), T(1.0) / a.v);
}
template <class T, int N>
Dual<T, N> sin(const Dual<T, N>& a) {
  using std::cos;
  using std::sin;
  return detail::chain(a, sin(a.v), cos(a.v));
}
template <class T, int N>
Dual<T, N> cos(const Dual<T, N>& a) {
  using std::cos;
  using std::sin;
  return detail::chain(a, cos(a.v), -sin(a.v));
}
template <class T, int N>
Dual<T, N> tan(const Dual<T, N>& a) {
  using std::tan;
  const T t = tan(a.v);
  return detail::chain(a, t, T(1.0) + t * t);
}
template <class T, int N>
Dual<T, N> atan(const Dual<T, N>& a) {
  using std::atan;
  return detail::chain(a, atan(a.v), T(1.0) / (T(1.0) + a.v * a.v));
}
template <class T, int N>
Dual<T, N> atan2(const Dual<T, N>& y, const Dual<T, N>& x) {
  using std::atan2;
  Dual<T, N> r;
  r.v = atan2(y.v, x.v);
  const T inv = T(1.0) / (x.v * x.v + y.v * y.v);
  for (int i = 0; i < N; ++i) r.d[i] = (x.v * y.d[i] - y.v * x.d[i]) * inv;
  return r;
}
template <class T, int N>
Dual<T, N> abs(const Dual<T, N>& a) {
  return primal(a) < 0.0 ? -a : a;
}
template <class T, int N>
Dual<T, N> pow(const Dual<T, N>& a, double p) {
  using std::pow;
  return detail::chain(a, T(pow(a.v, p)), T(p * pow(a.v, p - 1.0)));
}

// Plain-double helpers so templated code can call these unqualified.
using std::abs;
using std::atan;
using std::atan2;
using std::cos;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;
using std::tan;

template <class T>
T square(const T& x) {
  return x * x;
}

// Directional derivative extraction for single-level duals.
template <int N>
double deriv(const Dual<double, N>& x, int direction) {
  return x.d[direction];
}

}  // namespace finsler2d
