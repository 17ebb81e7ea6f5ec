#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "finsler2d/fd.hpp"
#include "finsler2d/harness.hpp"
#include "helpers.hpp"

using namespace finsler2d;
using testing_support::fixture;

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<std::string>& curved() {
  static const std::vector<std::string> v{"finsleroid_curved", "finsleroid_varying_c", "randers_curved",
                                          "riemannian_curved"};
  return v;
}

ConnectionOptions tight() {
  ConnectionOptions o;
  o.quadrature = oracle_quadrature();
  return o;
}

}  // namespace

TEST(Connection, FlatFixtureHasNoConnection) {
  const ManifoldSpec s = fixture("flat");
  for (const SamplePoint& p : draw_samples(s, 1, 10)) {
    const ConnectionJet cj = derivative_coeffs(s, p.x, p.y, KChoice::frame());
    EXPECT_LE(max_abs(cj.N), 1e-14);
    EXPECT_LE(max_abs(cj.Nnm), 1e-14);
    double m = 0.0;
    for (const auto& a : cj.Nnmi) m = std::max(m, max_abs(a));
    EXPECT_LE(m, 1e-14);
  }
}

TEST(Connection, PreservesF) {
  for (const std::string& name : curved()) {
    const ManifoldSpec s = fixture(name);
    for (const SamplePoint& p : draw_samples(s, 2, 30)) {
      const ConnectionJet cj = connection_coeffs(s, p.x, p.y, KChoice::frame());
      const MetricJet<double> j = metric_at(s, p.x, p.y);
      const Vec2d dF = d_apply(cj, cj.dF_dx, j.l);
      EXPECT_LE(max_abs(dF), 1e-8 * std::max(1.0, j.F)) << name;
    }
  }
}

TEST(Connection, AngleRule) {
  for (const std::string& name : curved()) {
    const ManifoldSpec s = fixture(name);
    for (const SamplePoint& p : draw_samples(s, 3, 10)) {
      const ConnectionJet cj = connection_coeffs(s, p.x, p.y, KChoice::frame(), tight());
      const MetricJet<double> j = metric_at(s, p.x, p.y);
      const Vec2d th = dtheta_dx(s, p.x, p.y, DThetaRoute::FiniteDifference);
      const Vec2d d = d_apply(cj, th, {j.m[0] / j.F, j.m[1] / j.F});
      for (int n = 0; n < 2; ++n) EXPECT_NEAR(d[n], cj.k[n], 1e-7 * std::max(1.0, max_abs(th))) << name;
    }
  }
}

TEST(Connection, TwoVectorAngle) {
  const ManifoldSpec s = fixture("finsleroid_curved");
  const Vec2d x{0.2, -0.1};
  const Vec2d y1{1.0, 0.3}, y2{-0.4, 0.9};
  Vec2d d[2];
  int a = 0;
  for (const Vec2d& y : {y1, y2}) {
    const ConnectionJet cj = connection_coeffs(s, x, y, KChoice::frame(), tight());
    const MetricJet<double> j = metric_at(s, x, y);
    d[a++] = d_apply(cj, dtheta_dx(s, x, y, DThetaRoute::FiniteDifference), {j.m[0] / j.F, j.m[1] / j.F});
  }
  EXPECT_NEAR(d[0][0] - d[1][0], 0.0, 1e-7);
  EXPECT_NEAR(d[0][1] - d[1][1], 0.0, 1e-7);
}

TEST(Connection, DerivativeHierarchy) {
  for (const std::string& name : curved()) {
    const ManifoldSpec s = fixture(name);
    const PointContext pc = point_context(s, {0.3, 0.4}, KChoice::frame());
    for (const SamplePoint& p : draw_samples(s, 4, 5)) {
      const ConnectionJet cj = derivative_coeffs(pc, p.y, tight());
      const MetricJet<double> j = metric_jet(s.kind, pc.frame, p.y);
      auto N = [&](const Vec2d& v) { return connection_coeffs(pc, v, tight()).N; };
      const double h = 1e-3 * norm(p.y);
      for (int m = 0; m < 2; ++m) {
        const Mat2d d = fd_partial4(N, p.y, m, h);
        for (int k = 0; k < 2; ++k)
          for (int n = 0; n < 2; ++n)
            EXPECT_NEAR(cj.Nnm[k][n][m], d[k][n], 1e-5 * std::max(1.0, max_abs(cj.Nnm))) << name;
      }
      for (int k = 0; k < 2; ++k)
        for (int n = 0; n < 2; ++n) {
          // N^k_n = -D^k_nm y^m
          EXPECT_NEAR(cj.N[k][n], -(cj.D[k][n][0] * p.y[0] + cj.D[k][n][1] * p.y[1]),
                      1e-10 * std::max(1.0, max_abs(cj.N)))
              << name;
        }
      for (int n = 0; n < 2; ++n)
        for (int m = 0; m < 2; ++m)
          for (int i = 0; i < 2; ++i) {
            double yl = 0.0, ll = 0.0;
            for (int k = 0; k < 2; ++k) {
              yl += j.y_lo[k] * cj.Nnmi[k][n][m][i];
              ll += j.l[k] * cj.Nnmi[k][n][m][i];
            }
            EXPECT_NEAR(yl, 0.0, 1e-8 * std::max(1.0, j.F)) << name;
            EXPECT_NEAR(ll, 0.0, 1e-9) << name;
          }
    }
  }
}

TEST(Connection, CovariantKernel) {
  for (const std::string& name : curved()) {
    const ManifoldSpec s = fixture(name);
    for (const SamplePoint& p : draw_samples(s, 5, 10)) {
      const ConnectionJet cj = derivative_coeffs(s, p.x, p.y, KChoice::frame());
      const double sc = std::max(1.0, norm(p.y));
      for (const Vec2d& v : covariant_derivative(cj, field_y_lower(s, p.x, p.y))) EXPECT_LE(max_abs(v), 1e-8 * sc) << name;
      for (const Vec2d& v : covariant_derivative(cj, field_g_lower(s, p.x, p.y))) EXPECT_LE(max_abs(v), 1e-7) << name;
      for (const Vec2d& v : covariant_derivative(cj, field_m_upper(s, p.x, p.y))) EXPECT_LE(max_abs(v), 1e-7) << name;
    }
  }
}

TEST(Connection, BranchContinuesAcrossTheCut) {
  const ManifoldSpec s = fixture("finsleroid_curved");
  const PointContext pc = point_context(s, {0.3, 0.2}, KChoice::frame());
  const double e = 1e-7;
  const Vec2d above = arc_point(pc.frame, kPi - e), below = arc_point(pc.frame, -kPi + e);
  ConnectionOptions cont = tight();
  cont.theta_branch = 1;
  const Mat2d Na = connection_coeffs(pc, above, tight()).N;
  const Mat2d Nb = connection_coeffs(pc, below, tight()).N;
  const Mat2d Nc = connection_coeffs(pc, below, cont).N;
  double jump = 0.0, cont_gap = 0.0;
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < 2; ++n) {
      jump = std::max(jump, std::abs(Na[k][n] - Nb[k][n]));
      cont_gap = std::max(cont_gap, std::abs(Na[k][n] - Nc[k][n]));
    }
  EXPECT_GT(jump, 1e-3);  // θ^max varies with g(x)
  EXPECT_LT(cont_gap, 1e-5);
}

TEST(Connection, KChoiceParsing) {
  EXPECT_EQ(k_choice_from_string("frame").mode, KChoice::Mode::Frame);
  EXPECT_EQ(k_choice_from_string("frame").sign, kDefaultKSign);
  EXPECT_EQ(k_choice_from_string("frame(+1)").sign, 1);
  EXPECT_EQ(k_choice_from_string("frame(-1)").sign, -1);
  EXPECT_EQ(k_choice_from_string("zero").mode, KChoice::Mode::Zero);
  const KChoice u = k_choice_from_string("user:0.1*x2;x1");
  EXPECT_EQ(u.mode, KChoice::Mode::User);
  EXPECT_DOUBLE_EQ(u.k1({0.0, 2.0}), 0.2);
  EXPECT_THROW(k_choice_from_string("sideways"), SchemaError);
  EXPECT_THROW(k_choice_from_string("user:x1"), SchemaError);
}

TEST(Connection, UserKEntersTheAngleRule) {
  const ManifoldSpec s = fixture("randers_curved");
  const KChoice kc = k_choice_from_string("user:0.1*x2;-0.2*x1");
  const Vec2d x{0.5, -0.5}, y{0.3, 0.8};
  const ConnectionJet cj = connection_coeffs(s, x, y, kc, tight());
  EXPECT_NEAR(cj.k[0], -0.05, 1e-15);
  EXPECT_NEAR(cj.k[1], -0.1, 1e-15);
  const MetricJet<double> j = metric_at(s, x, y);
  const Vec2d d = d_apply(cj, dtheta_dx(s, x, y, DThetaRoute::FiniteDifference), {j.m[0] / j.F, j.m[1] / j.F});
  EXPECT_NEAR(d[0], -0.05, 1e-7);
  EXPECT_NEAR(d[1], -0.1, 1e-7);
}
