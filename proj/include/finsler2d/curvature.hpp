#pragma once

// Curvature tensors of the connection and their Riemannian counterpart.

#include "finsler2d/connection.hpp"

namespace finsler2d {

struct CurvatureJet {
  Mat2d M{};        // M_ij = ∂_i k_j - ∂_j k_i
  Arr3d Mn{};       // Mn[n][i][j] = M^n_ij
  Arr4d E{};        // E[k][n][i][j] = E_k^n_ij
  Arr4d rho{};      // rho[k][n][i][j] = ρ_k^n_ij
  Arr4d rho_low{};  // rho_low[k][n][i][j] = ρ_knij
  double f1 = 0.0;  // sqrt(det g / det a)
  Vec2d T{};        // T_n = n^h ∇_n b̃_h + k_n
};

CurvatureJet curvature_closed(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y, const KChoice& kc);

struct CommutatorOracle {
  Arr3d Mn{};   // from (∂_i N_j - ∂_j N_i - N_i D_j + N_j D_i), x-partials by differences
  Arr4d E{};    // from d_i D_jk - d_j D_ik + D D - D D
  Arr4d E_from_M{};  // -∂M^n_ij/∂y^k of the closed M, by differences
};

CommutatorOracle curvature_commutator_oracle(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y,
                                             const KChoice& kc);

// Both sides of the commutator rule on w^n_k = l^n m_k:
// lhs[n][k][i][j] = (𝒟_i𝒟_j - 𝒟_j𝒟_i) w^n_k by nested differences;
// rhs = M^h_ij 𝒮_h w^n_k - ρ_k^h_ij w^n_h + ρ_h^n_ij w^h_k.
// l^n m_k is itself parallel, so both sides vanish for it; the generic tensor
// b̃^n(x) u_k / S with u_k = a_kj y^j exercises every term.
enum class TestTensor { LUpMLow, Generic };
struct CommutatorAction {
  Arr4d lhs{}, rhs{};
};
CommutatorAction commutator_action(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y, const KChoice& kc,
                                   TestTensor which = TestTensor::LUpMLow);
TensorJet test_tensor(const ManifoldSpec& spec, const Vec2d& x, const Vec2d& y, TestTensor which);

struct RiemannCounterpart {
  Arr3d L{};      // L[k][n][h] = L^k_nh = -a^kj ε^Riem_jh T_n - a^k_nh
  Arr4d Lbar{};   // Lbar[k][n][i][j] = L̄_k^n_ij built from L̄ = -L
  Arr4d Lbar_low{};  // L̄_knij = a_nh L̄_k^h_ij
  Arr4d Lbar_expected{};  // a^nt ε^Riem_tk M_ij
  double lbar_residual = 0.0;  // max |Lbar - Lbar_expected|
};

RiemannCounterpart riemann_counterpart(const ManifoldSpec& spec, const Vec2d& x, const KChoice& kc);

struct FactorizationReport {
  double max_residual = 0.0;   // max |ρ_knij - f1 L̄_knij|
  double max_lbar = 0.0;       // max |L̄_knij|
  double relative = 0.0;       // max_residual / max_lbar (0 when L̄ vanishes)
  double max_f1_cT = 0.0;      // finsleroid: max |f1 - cT|
  Vec2d worst_y{};
};

FactorizationReport factorization_report(const ManifoldSpec& spec, const Vec2d& x, const KChoice& kc,
                                         const std::vector<Vec2d>& ys);

}  // namespace finsler2d
