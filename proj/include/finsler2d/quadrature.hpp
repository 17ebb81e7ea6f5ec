#pragma once

// Globally adaptive Gauss–Kronrod (7/15) quadrature with an absolute tolerance.
// The 15-point rule itself comes from Boost.Math; this layer keeps a heap of
// subintervals and bisects the one with the largest error estimate.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <queue>
#include <vector>

#include "finsler2d/errors.hpp"

namespace finsler2d {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  std::size_t max_subdivisions = std::size_t{1} << 20;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
};

template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  QuadratureResult res;
  if (a == b) return res;
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  struct Piece {
    double a, b, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  auto rule = [&](double lo, double hi) {
    double err = 0.0;
    const double v = GK::integrate(f, lo, hi, 0, 0.0, &err);
    // Boost reports the error of the rule on [-1, 1]; rescale to [lo, hi].
    return Piece{lo, hi, v, err * 0.5 * (hi - lo)};
  };
  std::priority_queue<Piece> heap;
  Piece first = rule(a, b);
  double total = first.value, total_err = first.error;
  heap.push(first);
  std::size_t count = 1;
  while (total_err > opt.abs_tol) {
    if (count >= opt.max_subdivisions) throw QuadratureFailure("quadrature tolerance not met");
    Piece p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) throw QuadratureFailure("quadrature interval underflow");
    Piece l = rule(p.a, mid), r = rule(mid, p.b);
    total += l.value + r.value - p.value;
    total_err += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
    ++count;
    if (!std::isfinite(total)) throw QuadratureFailure("non-finite integrand");
  }
  // Re-sum to avoid drift from incremental updates.
  double sum = 0.0, err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  res.value = sign * sum;
  res.error = err;
  res.intervals = count;
  return res;
}

}  // namespace finsler2d
