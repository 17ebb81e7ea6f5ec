#pragma once

// Parallel transport along base curves: dy^k/dt = N^k_n(x(t), y(t)) ẋ^n(t).

#include <string_view>
#include <vector>

#include "json.hpp"

#include "finsler2d/connection.hpp"

namespace finsler2d {

// x(t), t ∈ [0, 1]: two expressions in t, or a polyline traversed at uniform
// parameter speed per segment.
class Curve {
 public:
  static Curve expressions(Expression x1, Expression x2);
  static Curve parse(std::string_view x1, std::string_view x2);
  static Curve polyline(std::vector<Vec2d> points);
  // {"x1": "...", "x2": "..."} or {"polyline": [[a, b], ...]}
  static Curve from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  Vec2d position(double t) const;
  // side < 0 takes the left limit at polyline corners.
  Vec2d velocity(double t, int side = 1) const;
  bool is_polyline() const { return !points_.empty(); }
  std::size_t segments() const { return points_.empty() ? 0 : points_.size() - 1; }

 private:
  std::array<Expression, 2> x_, dx_;
  std::vector<Vec2d> points_;
};

struct TransportSample {
  double t = 0.0;
  Vec2d x{};
  std::vector<Vec2d> y;
  std::vector<double> F, theta;
};

struct StepStats {
  int steps = 0;
  double h = 0.0;
  long rhs_evaluations = 0;
  int diagnostic_points = 0;
  int cut_crossings = 0;  // located crossings of the θ cut on the negative axis
};

struct TransportOptions {
  ConnectionOptions connection{};
  // Diagnostics (F, θ, inner products) every this many steps; 0 picks about 200 points.
  int diagnostic_stride = 0;
  // Also carry w_a (started at y_{a+1}) along y_a with dw/dt = N^h_ij(y_a) ẋ^i w^j.
  bool linearized = true;
  bool keep_samples = true;
  int order_base_steps = 64;  // transport_report: runs at n, 2n, 4n
};

struct TransportResult {
  std::vector<TransportSample> samples;
  std::vector<Vec2d> y_final;
  std::vector<double> F_drift;      // per vector
  double max_F_drift = 0.0;
  double theta_pair_drift = 0.0;    // max over pairs a < b of |Δθ(t) - Δθ(0)|
  // max |g_ij(x, y_a) y_a^i w_a^j - initial| with w_a the linearized transport of y_{a+1}
  double inner_product_drift = 0.0;
  // max |g_ij(x, y_a) y_a^i y_{a+1}^j - initial| with both vectors transported by the full flow
  double raw_inner_product_change = 0.0;
  StepStats stats;
  double order = 0.0;               // Richardson estimate; NaN when the differences vanish
  std::array<int, 3> order_steps{};
  std::array<double, 2> order_differences{};
};

TransportResult horizontal_lift(const ManifoldSpec& spec, const Curve& curve, const std::vector<Vec2d>& y0,
                                const KChoice& kc, int steps, const TransportOptions& opt = {});

// Joint transport of at least two vectors plus a step-halving order estimate.
TransportResult transport_report(const ManifoldSpec& spec, const Curve& curve, const std::vector<Vec2d>& y0,
                                 const KChoice& kc, int steps, const TransportOptions& opt = {});

}  // namespace finsler2d
