#include <gtest/gtest.h>

#include <cmath>

#include "finsler2d/harness.hpp"
#include "helpers.hpp"

using namespace finsler2d;
using testing_support::base_doc;
using testing_support::fixture;
using testing_support::spec_of;

namespace {

ManifoldSpec fixture_e(double g, const std::string& kind = "finsleroid") {
  auto doc = base_doc(kind);
  doc["g"] = std::to_string(g);
  return spec_of(doc);
}

const Vec2d kX{0.1, -0.3};
const Vec2d kB{0.8, 0.0};  // b^i = c b̃^i

}  // namespace

TEST(Finsler, PrimitivesAlongTheAxis) {
  const Primitives p = primitives(fixture_e(0.5), kX, kB);
  EXPECT_NEAR(p.n, 0.0, 1e-15);
  EXPECT_NEAR(p.b, 0.64, 1e-15);
  EXPECT_NEAR(p.q, 0.48, 1e-15);
  EXPECT_NEAR(p.S, 0.8, 1e-15);
}

TEST(Finsler, PrimitivesAcrossTheAxis) {
  const Primitives p = primitives(fixture_e(0.5), kX, {0.0, 1.0});
  EXPECT_NEAR(p.b, 0.0, 1e-15);
  EXPECT_NEAR(p.n, 1.0, 1e-15);
  EXPECT_NEAR(p.q, 1.0, 1e-15);
  EXPECT_NEAR(p.S, 1.0, 1e-15);
}

TEST(Finsler, QuadraticRelationsAtRandomY) {
  const ManifoldSpec s = fixture("finsleroid_curved");
  for (const SamplePoint& sp : draw_samples(s, 5, 1000)) {
    const Primitives p = primitives(s, sp.x, sp.y);
    const double c = s.c(sp.x);
    const double rhs = (1 - c * c) / (c * c) * p.b * p.b + p.n * p.n;
    EXPECT_NEAR(p.q * p.q, rhs, 1e-12 * std::max(1.0, rhs));
    EXPECT_GT(p.q, 0.0);
  }
}

TEST(Finsler, EtaBOnTheAxis) {
  const auto [fs, j] = finsleroid_jet(fixture_e(1.0), kX, kB);
  EXPECT_NEAR(fs.eta * fs.B, 0.64, 1e-14);
}

TEST(Finsler, FinsleroidScalarIdentities) {
  const ManifoldSpec s = fixture("finsleroid_curved");
  for (const SamplePoint& sp : draw_samples(s, 6, 200)) {
    const auto [fs, j] = finsleroid_jet(s, sp.x, sp.y);
    const double g = s.g(sp.x), c = s.c(sp.x);
    const double sc = std::max(1.0, fs.B);
    EXPECT_GT(fs.B, 0.0);
    EXPECT_GT(fs.nu, 0.0);
    EXPECT_NEAR(fs.L * fs.L + fs.h * fs.h * j.b * j.b, fs.B, 1e-12 * sc);
    EXPECT_NEAR(fs.B - j.b * fs.B1, j.n_y * j.n_y, 1e-12 * sc);
    EXPECT_NEAR(fs.invX, 3 - c * c * j.n_y * j.n_y / (j.q * fs.nu), 1e-12 * std::max(1.0, fs.invX));
    const double dr = (fs.nu / j.q) * std::pow(fs.K * fs.K / fs.B, 2);
    EXPECT_NEAR(j.det_ratio, dr, 1e-12 * std::max(1.0, dr));
    const CartanData cd = cartan(j);
    EXPECT_NEAR(cd.AA, g * g / (4 * std::pow(1 / fs.invX, 2)) * (3 - fs.invX), 1e-10 * std::max(1.0, cd.AA));
  }
}

TEST(Finsler, FrameOfTheTangentPlane) {
  const ManifoldSpec s = fixture("finsleroid_varying_c");
  for (const SamplePoint& sp : draw_samples(s, 7, 100)) {
    const MetricJet<double> j = metric_at(s, sp.x, sp.y);
    double ll = 0.0, mm = 0.0, lm = 0.0;
    for (int i = 0; i < 2; ++i) {
      ll += j.l[i] * j.l_up[i];
      mm += j.m[i] * j.m_up[i];
      lm += j.l_up[i] * j.m[i];
    }
    EXPECT_NEAR(ll, 1.0, 1e-12);
    EXPECT_NEAR(mm, 1.0, 1e-10);
    EXPECT_NEAR(lm, 0.0, 1e-10);
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) {
        EXPECT_NEAR(j.g[i][k], j.l[i] * j.l[k] + j.m[i] * j.m[k], 1e-10 * std::max(1.0, std::abs(j.g[i][k])));
        EXPECT_NEAR(j.g[i][k], j.g[k][i], 1e-15);
        double id = 0.0;
        for (int m = 0; m < 2; ++m) id += j.g_up[i][m] * j.g[m][k];
        EXPECT_NEAR(id, i == k ? 1.0 : 0.0, 1e-10);
      }
  }
}

TEST(Finsler, CartanVectorVanishesOnTheAxis) {
  const ManifoldSpec s = fixture("finsleroid_curved");
  const Frame<double> f = frame_at(s, kX);
  for (double sgn : {1.0, -1.0}) {
    const Vec2d y{sgn * f.c * f.bt_up[0], sgn * f.c * f.bt_up[1]};
    const CartanData cd = cartan(metric_jet(s.kind, f, y));
    EXPECT_NEAR(cd.A[0], 0.0, 1e-12);
    EXPECT_NEAR(cd.A[1], 0.0, 1e-12);
  }
}

TEST(Finsler, ZeroChargeIsRiemannian) {
  const ManifoldSpec s = fixture("finsleroid_curved_zero_charge");
  for (const SamplePoint& sp : draw_samples(s, 8, 200)) {
    const Frame<double> f = frame_at(s, sp.x);
    const MetricJet<double> j = metric_jet(s.kind, f, sp.y);
    EXPECT_NEAR(j.F, j.S, 1e-12 * j.S);
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) EXPECT_NEAR(j.g[i][k], f.a[i][k], 1e-12);
  }
}

TEST(Finsler, Homogeneity) {
  for (const char* name : {"finsleroid_curved", "randers_curved", "riemannian_curved"}) {
    const ManifoldSpec s = fixture(name);
    const Vec2d x{0.3, 0.4}, y{-0.7, 1.3};
    const double F = metric_function(s, x, y);
    for (double lam : {0.5, 2.0, 10.0})
      EXPECT_NEAR(metric_function(s, x, {lam * y[0], lam * y[1]}), lam * F, 1e-12 * lam * F) << name;
  }
}

TEST(Finsler, RandersValues) {
  const ManifoldSpec s = fixture_e(0.0, "randers");
  EXPECT_NEAR(metric_function(s, kX, kB), 0.8 + 0.64, 1e-15);
  const ManifoldSpec r = fixture("randers_curved");
  for (const SamplePoint& sp : draw_samples(r, 9, 200)) {
    const MetricJet<double> j = metric_at(r, sp.x, sp.y);
    EXPECT_NEAR(j.det_ratio, std::pow(j.F / j.S, 3), 1e-8 * j.det_ratio);
    double mm = 0.0;
    for (int i = 0; i < 2; ++i) mm += j.m[i] * j.m_up[i];
    EXPECT_NEAR(mm, 1.0, 1e-10);
  }
}

TEST(Finsler, HessianOracle) {
  const ManifoldSpec r = fixture("riemannian_curved");
  const Vec2d x{0.2, -0.5}, y{1.1, 0.4};
  const Frame<double> f = frame_at(r, x);
  const Mat2d gr = metric_from_F([&](const Vec2d& v) { return metric_function(r, x, v); }, y);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(gr[i][k], f.a[i][k], 1e-6);

  const ManifoldSpec s = fixture("finsleroid_curved");
  for (const SamplePoint& sp : draw_samples(s, 10, 20)) {
    const MetricJet<double> j = metric_at(s, sp.x, sp.y);
    const Mat2d g = metric_from_F([&](const Vec2d& v) { return metric_function(s, sp.x, v); }, sp.y);
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) {
        EXPECT_NEAR(g[i][k], j.g[i][k], 1e-6 * std::max(1.0, std::abs(j.g[i][k])));
        EXPECT_EQ(g[i][k], g[k][i]);
      }
  }
}

TEST(Finsler, ParameterChecks) {
  EXPECT_THROW(metric_at(fixture("flat"), kX, {0.0, 0.0}), ZeroVector);
}
