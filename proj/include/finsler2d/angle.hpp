#pragma once

// The angle function θ(x, y) and its companions.
//
// θ is the integral of the exact 1-form (m_k/F) dy^k along the Riemannian unit
// arc u(φ) = cos φ b̃^i + sin φ n^i from φ = 0 to the polar angle of y. Along
// that arc the density m_k u'^k / F(u) depends only on (g, c, φ).

#include <vector>

#include "finsler2d/dual.hpp"
#include "finsler2d/finsler.hpp"
#include "finsler2d/quadrature.hpp"

namespace finsler2d {

enum class ChartId { C1, C2, C3, C4 };
std::string to_string(ChartId id);

struct AngleBounds {
  double theta_I = 0.0;
  double theta_II = 0.0;
  double theta_max = 0.0;
};

// dθ/dφ along the Riemannian unit arc.
template <class T>
T arc_density(MetricKind kind, const T& g, const T& c, double phi) {
  switch (kind) {
    case MetricKind::Riemannian:
      return T(1.0);
    case MetricKind::Randers:
      return 1.0 / sqrt(1.0 + c * std::cos(phi));
    case MetricKind::Finsleroid: {
      const double cp = std::cos(phi), sp = std::sin(phi);
      const T b = c * cp;
      const T q = sqrt((1.0 - c * c) * cp * cp + sp * sp);
      const T nu = q + (1.0 - c * c) * g * b;
      const T B = b * b + g * b * q + q * q;
      return sqrt(nu / q) / B;
    }
  }
  return T(0.0);
}

// Polar angle of y in the a-orthonormal frame {b̃, n}, in (-π, π].
inline double polar_angle(const Frame<double>& f, const Vec2d& y) {
  return std::atan2(dot(f.n, y), dot(f.bt, y));
}

// Unit arc point and its φ-derivative.
inline Vec2d arc_point(const Frame<double>& f, double phi) {
  return {std::cos(phi) * f.bt_up[0] + std::sin(phi) * f.n_up[0], std::cos(phi) * f.bt_up[1] + std::sin(phi) * f.n_up[1]};
}

inline QuadratureOptions oracle_quadrature() { return {1e-13, std::size_t{1} << 20}; }

ChartId chart_of(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y);

double theta(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y, const QuadratureOptions& opt = {});
// branch ≠ 0 continues θ across the cut on the negative axis: θ + branch · θ^max.
double theta_in_frame(MetricKind kind, const Frame<double>& f, const Vec2d& y, const QuadratureOptions& opt = {},
                      int branch = 0);

// Side of the θ cut on the negative axis: 0 for b̃·y >= 0, else the sign of n·y.
int cut_side(const Frame<double>& f, const Vec2d& y);
// Branch that continues θ to y from a direction on side ref_side (0 when no continuation is needed).
int continued_branch(int ref_side, const Frame<double>& f, const Vec2d& y);

// θ^I, θ^II from the integrals over w̃ ∈ (0, ∞) mapped by w̃ = tan u.
AngleBounds theta_bounds(const ManifoldSpec& spec, const Vec2d& x, const QuadratureOptions& opt = {});
// Same bounds from the arc density over [0, π/2] and [π/2, π].
AngleBounds theta_bounds_arc(const ManifoldSpec& spec, const Vec2d& x, const QuadratureOptions& opt = {});

// ∂θ^max/∂x^n from the x-dependence of g and c. The density is even in φ, so θ at the
// cut on the negative axis is ±θ^max/2 and ∂θ/∂x^n jumps by this amount across it.
Vec2d theta_max_dx(MetricKind kind, const Frame<Dual<double, 2>>& f2, const QuadratureOptions& opt = {});

enum class DThetaRoute { Auto, Closed, Arc, FiniteDifference };

// ∂θ/∂x^n. Closed: constant c only (UnsupportedVaryingC otherwise). Arc:
// differentiates the arc integral and its endpoint. FiniteDifference:
// re-quadrature at displaced x with a fourth-order stencil.
Vec2d dtheta_dx(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y, DThetaRoute route = DThetaRoute::Auto,
                const QuadratureOptions& opt = {});

// Same, reusing frames already built at x (frame2 carries x-derivatives).
Vec2d dtheta_dx_at(const ManifoldSpec& spec, const Vec2d& x, const Frame<double>& frame,
                   const Frame<Dual<double, 2>>& frame2, const Vec2d& y, DThetaRoute route,
                   const QuadratureOptions& opt = {});

// ∫_0^{φ(y)} ∂(arc density)/∂g dφ, the g-sensitivity of θ at fixed frame and y.
double theta_g_sensitivity(MetricKind kind, const Frame<double>& f, const Vec2d& y, const QuadratureOptions& opt = {});
double theta_c_sensitivity(MetricKind kind, const Frame<double>& f, const Vec2d& y, const QuadratureOptions& opt = {});

// θ(y2) - θ(y1).
double two_vector_angle(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y1, const Vec2d& y2,
                        const QuadratureOptions& opt = {});

// Area of {y between the rays of y1 and y2 (counter-clockwise in θ), F(y) <= 1}
// in the measure sqrt(det g) dy^1 dy^2, by polar quadrature with a root-found radius.
double sector_area(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y1, const Vec2d& y2,
                   const QuadratureOptions& opt = {});

// Length of the indicatrix F = 1 in the metric g_ij(l).
double indicatrix_arclength(const ManifoldSpec& spec, const Vec2d& x, const QuadratureOptions& opt = {});

struct IndicatrixSample {
  double phi = 0.0;
  Vec2d y{};
  double theta = 0.0;
  double F = 0.0;
};
// Samples l(φ) = u(φ)/F(u(φ)) for φ = -π + 2π(k + 1)/count, k = 0..count-1.
std::vector<IndicatrixSample> indicatrix_sweep(const ManifoldSpec& spec, const Vec2d& x, int count,
                                               const QuadratureOptions& opt = {});

// Metric components in the coordinates (F, θ) of the tangent plane, built from
// finite-difference derivatives of F and θ.
Mat2d coordinate_metric(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y);

// Chart integrals Θ̃(w̃) for y in C1 (Finsleroid and Randers), as printed in
// closed integral form over w̃ ∈ [0, w̃].
double chart_theta_tilde(MetricKind kind, double g, double c, double w_tilde, const QuadratureOptions& opt = {});
// dΘ̃/dw̃ on C1 ∪ C4 and dΘ̂/dt on C2 ∪ C3.
double chart_dtheta_dwtilde(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y);
double chart_dtheta_dt(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y);

}  // namespace finsler2d
