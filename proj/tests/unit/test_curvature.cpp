#include <gtest/gtest.h>

#include <cmath>

#include "finsler2d/harness.hpp"
#include "helpers.hpp"

using namespace finsler2d;
using testing_support::fixture;

namespace {

double arr_max(const Arr4d& a) {
  double m = 0.0;
  for (const auto& b : a) m = std::max(m, max_abs(b));
  return m;
}

const std::vector<std::string>& curved() {
  static const std::vector<std::string> v{"finsleroid_curved", "finsleroid_varying_c", "randers_curved",
                                          "riemannian_curved", "sphere"};
  return v;
}

}  // namespace

TEST(Curvature, FlatVanishes) {
  const ManifoldSpec s = fixture("flat");
  const CurvatureJet cv = curvature_closed(s, {0.1, 0.2}, {0.3, -1.0}, KChoice::frame());
  EXPECT_EQ(max_abs(cv.M), 0.0);
  EXPECT_EQ(arr_max(cv.rho), 0.0);
  EXPECT_EQ(arr_max(cv.E), 0.0);
}

TEST(Curvature, Antisymmetry) {
  for (const std::string& name : curved()) {
    const ManifoldSpec s = fixture(name);
    for (const SamplePoint& p : draw_samples(s, 1, 20)) {
      const CurvatureJet cv = curvature_closed(s, p.x, p.y, KChoice::frame());
      const double sc = std::max({1.0, arr_max(cv.rho_low), arr_max(cv.E)});
      EXPECT_NEAR(cv.M[0][1] + cv.M[1][0], 0.0, 1e-12);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
              EXPECT_NEAR(cv.E[a][b][i][j] + cv.E[a][b][j][i], 0.0, 1e-12 * sc);
              EXPECT_NEAR(cv.rho[a][b][i][j] + cv.rho[a][b][j][i], 0.0, 1e-12 * sc);
              EXPECT_NEAR(cv.rho_low[a][b][i][j] + cv.rho_low[b][a][i][j], 0.0, 1e-12 * sc) << name;
            }
    }
  }
}

TEST(Curvature, ClosedFormsMatchCommutators) {
  for (const std::string& name : {"finsleroid_curved", "randers_curved", "sphere"}) {
    const ManifoldSpec s = fixture(name);
    for (const SamplePoint& p : draw_samples(s, 2, 2)) {
      const CurvatureJet cv = curvature_closed(s, p.x, p.y, KChoice::frame());
      const CommutatorOracle o = curvature_commutator_oracle(s, p.x, p.y, KChoice::frame());
      const double sM = std::max(1e-12, max_abs(cv.Mn)), sE = std::max(1e-12, arr_max(cv.E));
      for (int n = 0; n < 2; ++n)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            EXPECT_NEAR(o.Mn[n][i][j], cv.Mn[n][i][j], 1e-5 * sM) << name;
            for (int k = 0; k < 2; ++k) {
              EXPECT_NEAR(o.E[k][n][i][j], cv.E[k][n][i][j], 1e-5 * sE) << name;
              EXPECT_NEAR(o.E_from_M[k][n][i][j], cv.E[k][n][i][j], 1e-5 * sE) << name;
            }
          }
    }
  }
}

TEST(Curvature, CommutatorAction) {
  const ManifoldSpec s = fixture("finsleroid_curved");
  const Vec2d x{0.2, -0.3}, y{0.6, 0.9};
  for (TestTensor which : {TestTensor::LUpMLow, TestTensor::Generic}) {
    const CommutatorAction a = commutator_action(s, x, y, KChoice::frame(), which);
    double worst = 0.0;
    for (int k = 0; k < 2; ++k)
      for (int n = 0; n < 2; ++n)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) worst = std::max(worst, std::abs(a.lhs[k][n][i][j] - a.rhs[k][n][i][j]));
    EXPECT_LE(worst, 1e-4 * std::max(1.0, arr_max(a.rhs)));
    if (which == TestTensor::Generic) EXPECT_GT(arr_max(a.rhs), 1e-3);
  }
}

TEST(Curvature, MContractions) {
  for (const std::string& name : curved()) {
    const ManifoldSpec s = fixture(name);
    for (const SamplePoint& p : draw_samples(s, 3, 10)) {
      const CurvatureJet cv = curvature_closed(s, p.x, p.y, KChoice::frame());
      const MetricJet<double> j = metric_at(s, p.x, p.y);
      for (int i = 0; i < 2; ++i)
        for (int jj = 0; jj < 2; ++jj) {
          double lmr = 0.0, yM = 0.0;
          for (int k = 0; k < 2; ++k)
            for (int n = 0; n < 2; ++n) lmr += j.l_up[k] * j.m[n] * cv.rho[k][n][i][jj];
          for (int n = 0; n < 2; ++n) yM += j.y_lo[n] * cv.Mn[n][i][jj];
          EXPECT_NEAR(lmr, -cv.M[i][jj], 1e-10 * std::max(1.0, max_abs(cv.M))) << name;
          EXPECT_NEAR(yM, 0.0, 1e-10 * std::max(1.0, j.F * max_abs(cv.M))) << name;
        }
    }
  }
}

TEST(Curvature, SphereMatchesRiemannCurvature) {
  const ManifoldSpec s = fixture("sphere");
  const Vec2d x{1.2, 0.3};
  const CurvatureJet cv = curvature_closed(s, x, {0.5, 0.7}, KChoice::frame());
  const RiemannCurvature rc = riemann_curvature(s, x);
  const RiemannPointData d = riemann_at(s, x);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double v = 0.0;
      for (int t = 0; t < 2; ++t)
        for (int l = 0; l < 2; ++l) v += d.n_up[t] * d.btilde[l] * rc.tensor[t][l][i][j];
      EXPECT_NEAR(std::abs(cv.M[i][j]), std::abs(v), 1e-6);
    }
  EXPECT_GT(std::abs(cv.M[0][1]), 0.1);
}

TEST(Curvature, CounterpartIsRiemannCurvatureWhenTVanishes) {
  for (const char* name : {"riemannian_curved", "finsleroid_curved", "sphere"}) {
    const ManifoldSpec s = fixture(name);
    const Vec2d x{s.domain.lo[0] + 0.4, 0.2};
    const RiemannCounterpart rp = riemann_counterpart(s, x, KChoice::frame(-1));
    const RiemannCurvature rc = riemann_curvature(s, x);
    for (int k = 0; k < 2; ++k)
      for (int n = 0; n < 2; ++n)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) EXPECT_NEAR(rp.Lbar[k][n][i][j], rc.tensor[k][n][i][j], 1e-6) << name;
    EXPECT_LE(rp.lbar_residual, 1e-9);
  }
}

TEST(Curvature, Factorization) {
  for (const char* name : {"finsleroid_curved", "randers_curved", "finsleroid_varying_c"}) {
    const ManifoldSpec s = fixture(name);
    std::vector<Vec2d> ys;
    for (const SamplePoint& p : draw_samples(s, 4, 50)) ys.push_back(p.y);
    const FactorizationReport r = factorization_report(s, {0.1, -0.2}, KChoice::frame(), ys);
    EXPECT_LE(r.max_residual, 1e-6 * r.max_lbar) << name;
    EXPECT_GT(r.max_lbar, 1e-3) << name;
    if (s.kind == MetricKind::Finsleroid) EXPECT_LE(r.max_f1_cT, 1e-10);
  }
}

TEST(Curvature, F1IsOneAtZeroCharge) {
  const ManifoldSpec s = fixture("finsleroid_curved_zero_charge");
  for (const SamplePoint& p : draw_samples(s, 5, 20))
    EXPECT_NEAR(curvature_closed(s, p.x, p.y, KChoice::frame()).f1, 1.0, 1e-12);
}
