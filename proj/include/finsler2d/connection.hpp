#pragma once

// The angle-preserving connection N^k_n = -l^k ∂F/∂x^n - F m^k (∂θ/∂x^n - k_n)
// and its y-derivative hierarchy.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "finsler2d/angle.hpp"
#include "finsler2d/dual.hpp"

namespace finsler2d {

using D2 = Dual<double, 2>;  // x-directions
using D4 = Dual<double, 4>;  // x-directions 0, 1; y-directions 2, 3

struct KChoice {
  enum class Mode { Frame, Zero, User };
  Mode mode = Mode::Frame;
  int sign = kDefaultKSign;  // Frame: k_n = sign · n^h ∇_n b̃_h
  ScalarField k1, k2;        // User

  static KChoice frame(int sign = kDefaultKSign) {
    KChoice k;
    k.sign = sign;
    return k;
  }
  static KChoice zero() {
    KChoice k;
    k.mode = Mode::Zero;
    return k;
  }
  static KChoice user(Expression e1, Expression e2) {
    KChoice k;
    k.mode = Mode::User;
    k.k1 = ScalarField(std::move(e1));
    k.k2 = ScalarField(std::move(e2));
    return k;
  }
};

std::string to_string(const KChoice& k);
// "frame", "frame(-1)", "frame(+1)", "zero" or "user:<k1>;<k2>" with k1, k2 in x1, x2.
KChoice k_choice_from_string(std::string_view s);

struct KField {
  Vec2d k{};
  Mat2d dk{};  // dk[i][j] = ∂_i k_j
};

KField k_field(const ManifoldSpec& spec, const Vec2d& x, const KChoice& kc);

// Metric jet whose entries carry ∂/∂x^0, ∂/∂x^1 (d[0], d[1]) and ∂/∂y^0, ∂/∂y^1 (d[2], d[3]).
MetricJet<D4> metric_jet_d4(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y);

struct ConnectionJet {
  Vec2d x{}, y{};
  Mat2d N{};        // N[k][n] = N^k_n
  Vec2d P{};        // P̆_n = ∂θ/∂x^n - k_n
  Vec2d k{};        // k_n
  Vec2d dtheta_dx{};
  Vec2d dF_dx{};
  bool full = false;
  Arr3d Nnm{};      // Nnm[k][n][m] = ∂N^k_n/∂y^m
  Arr4d Nnmi{};     // Nnmi[k][n][m][i] = ∂N^k_nm/∂y^i
  Arr3d D{};        // D[k][i][n] = D^k_in = -N^k_in
  double I = 0.0;
  bool axis_note = false;  // |I| < 1e-12: the ln|I| form is not usable
};

struct ConnectionOptions {
  DThetaRoute theta_route = DThetaRoute::Auto;
  QuadratureOptions quadrature{};
  // θ continued across the cut on the negative axis: θ + theta_branch · θ^max(x).
  int theta_branch = 0;
};

// Field samples, frames and k at one point, shared by every y evaluated there.
struct PointContext {
  const ManifoldSpec* spec = nullptr;
  Vec2d x{};
  FieldPoint fields;
  Frame<double> frame;
  Frame<D2> frame2;
  KField k;
};

PointContext point_context(const ManifoldSpec& spec, const Vec2d& x, const KChoice& kc);

ConnectionJet connection_coeffs(const PointContext& pc, const Vec2d& y, const ConnectionOptions& opt = {});
ConnectionJet derivative_coeffs(const PointContext& pc, const Vec2d& y, const ConnectionOptions& opt = {});

// N^k_n and P̆_n only.
ConnectionJet connection_coeffs(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y, const KChoice& kc,
                                const ConnectionOptions& opt = {});
// Adds N^k_nm, N^k_nmi and D^k_in.
ConnectionJet derivative_coeffs(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y, const KChoice& kc,
                                const ConnectionOptions& opt = {});

// ∂K/∂x^n for the Finsleroid with constant c from the ∂* decomposition:
// ∂*_n K + (K/B) g n q p_n + a^k_nj y^j l_k, ∂*_n K = ½ M̄ K g_n.
Vec2d finsleroid_dK_dx(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y);

// Finsleroid route for N^k_n with constant c (k = -C1 p, p_n = c n^h ∇_n b̃_h).
Mat2d finsleroid_connection_closed(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y, const KChoice& kc,
                                   const ConnectionOptions& opt = {});
// C1 for which k = -C1 p; throws ParamRange for user-defined k.
double finsleroid_C1(const ManifoldSpec& spec, const Vec2d& x, const KChoice& kc);
// Z_n with N^k_nmi = (1/K) Z_n m^k m_m m_i.
Vec2d finsleroid_Z(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y, const KChoice& kc,
                   const ConnectionOptions& opt = {});

// d_n W = ∂W/∂x^n + N^k_n ∂W/∂y^k.
Vec2d d_apply(const ConnectionJet& jet, const Vec2d& dW_dx, const Vec2d& dW_dy);

// A tensor field sampled at (x, y) with first partials. pattern[i] is 'u' or
// 'l' for an upper or lower index; components are stored row-major.
struct TensorJet {
  std::string pattern;
  std::vector<double> value;
  std::vector<Vec2d> dx, dy;

  std::size_t rank() const { return pattern.size(); }
  std::size_t size() const { return value.size(); }
};

// Builds a TensorJet from components carrying D4 derivatives.
TensorJet tensor_from_d4(const std::string& pattern, const std::vector<D4>& comps);

using TensorEvaluator = std::function<std::vector<double>(const Vec2d& x, const Vec2d& y)>;
// Partials by fourth-order central differences with steps hx, hy·|y|.
TensorJet tensor_from_fd(const std::string& pattern, const TensorEvaluator& f, const Vec2d& x, const Vec2d& y,
                         double hx = 1e-3, double hy = 1e-3);

// Result of 𝒟_n or 𝒮_h: out[component][n].
using TensorDerivative = std::vector<Vec2d>;

// 𝒟_n w = d_n w + Σ_upper D^a_nh w^..h.. - Σ_lower D^h_nb w_..h.. (requires a full jet).
TensorDerivative covariant_derivative(const ConnectionJet& jet, const TensorJet& w);
// 𝒮_h w = ∂w/∂y^h + Σ_upper C^a_hs w^..s.. - Σ_lower C^s_hb w_..s.., C^n_hk = I m^n m_h m_k / F.
TensorDerivative s_derivative(const MetricJet<double>& mj, const TensorJet& w);

// Named tensor fields with exact x- and y-partials.
TensorJet field_y_lower(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y);   // y_j
TensorJet field_y_upper(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y);   // y^j
TensorJet field_g_lower(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y);   // g_jn
TensorJet field_m_upper(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y);   // m^k
TensorJet field_l_up_m_low(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y);  // l^n m_k

MetricJet<double> primal_jet(const MetricJet<D4>& j);

}  // namespace finsler2d
