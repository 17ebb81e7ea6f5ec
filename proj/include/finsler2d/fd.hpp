#pragma once

// Finite-difference oracles. Values may be doubles or nested std::arrays of
// doubles; the stencils combine them componentwise.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "finsler2d/errors.hpp"
#include "finsler2d/tensor.hpp"

namespace finsler2d {

namespace detail {

inline double lincomb_vec(const std::vector<std::pair<double, const double*>>& terms) {
  double r = 0.0;
  for (const auto& [w, v] : terms) r += w * *v;
  return r;
}

template <class T, std::size_t N>
std::array<T, N> lincomb_vec(const std::vector<std::pair<double, const std::array<T, N>*>>& terms) {
  std::array<T, N> r{};
  for (std::size_t i = 0; i < N; ++i) {
    std::vector<std::pair<double, const T*>> sub;
    sub.reserve(terms.size());
    for (const auto& [w, v] : terms) sub.emplace_back(w, &(*v)[i]);
    r[i] = lincomb_vec(sub);
  }
  return r;
}

inline void check_step(double h, double scale) {
  if (!(h > 0.0) || h < 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(scale)))
    throw StepUnderflow("finite-difference step underflow");
}

}  // namespace detail

// Central difference of a function of one variable at s.
template <class F>
auto fd_central(F&& f, double s, double h) {
  detail::check_step(h, s);
  const auto p = f(s + h), m = f(s - h);
  return detail::lincomb_vec(std::vector{std::pair{0.5 / h, &p}, std::pair{-0.5 / h, &m}});
}

// Fourth-order central stencil.
template <class F>
auto fd_central4(F&& f, double s, double h) {
  detail::check_step(h, s);
  const auto p2 = f(s + 2 * h), p1 = f(s + h), m1 = f(s - h), m2 = f(s - 2 * h);
  const double w = 1.0 / (12.0 * h);
  return detail::lincomb_vec(
      std::vector{std::pair{-w, &p2}, std::pair{8 * w, &p1}, std::pair{-8 * w, &m1}, std::pair{w, &m2}});
}

// ∂f/∂z^axis at z by central differences.
template <class F>
auto fd_partial(F&& f, const Vec2d& z, int axis, double step) {
  return fd_central([&](double s) {
    Vec2d p = z;
    p[axis] = s;
    return f(p);
  }, z[axis], step);
}

// Richardson-extrapolated central difference: (4 D(h/2) - D(h)) / 3.
template <class F>
auto fd_partial_richardson(F&& f, const Vec2d& z, int axis, double step) {
  const auto d1 = fd_partial(f, z, axis, step);
  const auto d2 = fd_partial(f, z, axis, 0.5 * step);
  return detail::lincomb_vec(std::vector{std::pair{4.0 / 3.0, &d2}, std::pair{-1.0 / 3.0, &d1}});
}

template <class F>
auto fd_partial4(F&& f, const Vec2d& z, int axis, double step) {
  return fd_central4([&](double s) {
    Vec2d p = z;
    p[axis] = s;
    return f(p);
  }, z[axis], step);
}

}  // namespace finsler2d
