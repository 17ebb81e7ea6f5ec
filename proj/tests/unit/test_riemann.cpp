#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "finsler2d/connection.hpp"
#include "finsler2d/fd.hpp"
#include "finsler2d/harness.hpp"
#include "helpers.hpp"

using namespace finsler2d;
using testing_support::base_doc;
using testing_support::fixture;
using testing_support::spec_of;

namespace {

constexpr double kPi = std::numbers::pi;

ManifoldSpec polar() {
  auto doc = base_doc("riemannian");
  doc["domain"] = {{"x1", {1, 3}}, {"x2", {-1, 1}}};
  doc["a"] = nlohmann::json::array({nlohmann::json::array({"1", "0"}), nlohmann::json::array({"0", "x1^2"})});
  return spec_of(doc);
}

ManifoldSpec rotating_axis(const std::string& kind = "riemannian") {
  auto doc = base_doc(kind);
  doc["btilde"] = {"cos(x1)", "sin(x1)"};
  return spec_of(doc);
}

}  // namespace

TEST(Riemann, FlatFrame) {
  const RiemannPointData d = riemann_at(fixture("flat"), {0.3, -0.2});
  for (const auto& a : d.christoffel)
    for (const auto& b : a)
      for (double v : b) EXPECT_EQ(v, 0.0);
  EXPECT_NEAR(d.n[0], 0.0, 1e-15);
  EXPECT_NEAR(d.n[1], 1.0, 1e-15);
}

TEST(Riemann, PolarChristoffels) {
  const RiemannPointData d = riemann_at(polar(), {2.0, 0.0});
  EXPECT_NEAR(d.christoffel[0][1][1], -2.0, 1e-14);
  EXPECT_NEAR(d.christoffel[1][0][1], 0.5, 1e-14);
  EXPECT_NEAR(d.christoffel[1][1][0], 0.5, 1e-14);
}

TEST(Riemann, ChristoffelsMatchDifferencesOfMetric) {
  const ManifoldSpec s = fixture("riemannian_curved");
  const Vec2d x{0.3, -0.6};
  const RiemannPointData d = riemann_at(s, x);
  auto a = [&](const Vec2d& p) { return riemann_at(s, p).a; };
  Mat2d da[2];
  for (int k = 0; k < 2; ++k) da[k] = fd_partial4(a, x, k, 1e-3);
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < 2; ++n)
      for (int h = 0; h < 2; ++h) {
        double v = 0.0;
        for (int m = 0; m < 2; ++m) v += 0.5 * d.ainv[k][m] * (da[n][m][h] + da[h][m][n] - da[m][n][h]);
        EXPECT_NEAR(d.christoffel[k][n][h], v, 1e-9);
        EXPECT_DOUBLE_EQ(d.christoffel[k][n][h], d.christoffel[k][h][n]);
      }
}

TEST(Riemann, FrameOrthonormalAtRandomPoints) {
  const ManifoldSpec s = fixture("finsleroid_curved");
  for (const SamplePoint& p : draw_samples(s, 3, 100)) {
    const RiemannPointData d = riemann_at(s, p.x);
    double bb = 0.0, nn = 0.0, bn = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        bb += d.a[i][j] * d.btilde_up[i] * d.btilde_up[j];
        nn += d.a[i][j] * d.n_up[i] * d.n_up[j];
        bn += d.a[i][j] * d.btilde_up[i] * d.n_up[j];
        double id = 0.0;
        for (int m = 0; m < 2; ++m) id += d.ainv[i][m] * d.a[m][j];
        EXPECT_NEAR(id, i == j ? 1.0 : 0.0, 1e-12);
      }
    EXPECT_NEAR(bb, 1.0, 1e-12);
    EXPECT_NEAR(nn, 1.0, 1e-12);
    EXPECT_NEAR(bn, 0.0, 1e-12);
  }
}

TEST(Riemann, FlatCurvatureVanishes) {
  const RiemannCurvature r = riemann_curvature(fixture("flat"), {0.1, 0.2});
  EXPECT_EQ(r.R, 0.0);
}

TEST(Riemann, SphereCurvature) {
  const ManifoldSpec s = fixture("sphere");
  const RiemannCurvature r = riemann_curvature(s, {kPi / 3, 0.0});
  // unit sphere, K = 1; n is raised so the entries are K a_11 and K a_22
  const double s2 = std::sin(kPi / 3) * std::sin(kPi / 3);
  EXPECT_NEAR(std::abs(r.R), 1.0, 1e-10);
  EXPECT_NEAR(std::abs(r.tensor[0][1][0][1]), 1.0, 1e-10);
  EXPECT_NEAR(std::abs(r.tensor[1][0][0][1]), s2, 1e-10);
  EXPECT_NEAR(r.tensor[0][1][0][1], -r.tensor[0][1][1][0], 1e-12);
  EXPECT_LE(r.factorization_residual, 1e-10);
  EXPECT_LE(r.contraction_residual, 1e-9);
}

TEST(Riemann, CurvatureMatchesDifferencesOfChristoffels) {
  const ManifoldSpec s = fixture("riemannian_curved");
  const Vec2d x{-0.4, 0.5};
  const RiemannCurvature r = riemann_curvature(s, x);
  auto G = [&](const Vec2d& p) { return riemann_at(s, p).christoffel; };
  const RiemannPointData d = riemann_at(s, x);
  Arr3d dG[2];
  for (int i = 0; i < 2; ++i) dG[i] = fd_partial4(G, x, i, 1e-3);
  // a_k^n_ij = ∂_i a^n_jk - ∂_j a^n_ik + a^n_ih a^h_jk - a^n_jh a^h_ik
  double worst = 0.0;
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < 2; ++n)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          double v = dG[i][n][j][k] - dG[j][n][i][k];
          for (int h = 0; h < 2; ++h)
            v += d.christoffel[n][i][h] * d.christoffel[h][j][k] - d.christoffel[n][j][h] * d.christoffel[h][i][k];
          worst = std::max(worst, std::abs(v - r.tensor[k][n][i][j]));
        }
  EXPECT_LE(worst, 1e-6);
}

TEST(Riemann, AngleValues) {
  const ManifoldSpec s = fixture("riemannian_curved");
  const Vec2d x{0.2, 0.3};
  const RiemannPointData d = riemann_at(s, x);
  EXPECT_NEAR(riemann_angle(s, x, d.btilde_up), 0.0, 1e-14);
  EXPECT_NEAR(riemann_angle(s, x, d.n_up), kPi / 2, 1e-14);
  EXPECT_NEAR(riemann_angle(s, x, {d.btilde_up[0] + d.n_up[0], d.btilde_up[1] + d.n_up[1]}), kPi / 4, 1e-14);
}

TEST(Riemann, DefaultKForConstantAxisVanishes) {
  const Vec2d k = default_k(fixture("flat"), {0.4, 0.4});
  EXPECT_EQ(k[0], 0.0);
  EXPECT_EQ(k[1], 0.0);
}

TEST(Riemann, DefaultKForRotatingAxis) {
  const ManifoldSpec s = rotating_axis();
  for (int sign : {-1, 1}) {
    const Vec2d k = default_k(s, {0.3, -0.2}, sign);
    EXPECT_NEAR(k[0], sign, 1e-14);
    EXPECT_NEAR(k[1], 0.0, 1e-14);
  }
}

TEST(Riemann, FrameDerivativeIdentities) {
  const ManifoldSpec s = fixture("riemannian_curved");
  const Vec2d x{0.5, 0.1};
  const FrameDerivatives fd = frame_derivatives(s, x);
  const RiemannPointData d = riemann_at(s, x);
  // ∇_i b̃_h = (n^m ∇_i b̃_m) n_h since b̃ has unit length
  for (int i = 0; i < 2; ++i) {
    const double w = d.n_up[0] * fd.nabla_btilde[i][0] + d.n_up[1] * fd.nabla_btilde[i][1];
    for (int h = 0; h < 2; ++h) EXPECT_NEAR(fd.nabla_btilde[i][h], w * d.n[h], 1e-12);
  }
}

TEST(Riemann, RiemannianLimitReproducesChristoffel) {
  for (const char* name : {"riemannian_curved", "sphere"}) {
    const ManifoldSpec s = fixture(name);
    for (const SamplePoint& p : draw_samples(s, 11, 20)) {
      const ConnectionJet cj = connection_coeffs(s, p.x, p.y, KChoice::frame());
      const RiemannPointData d = riemann_at(s, p.x);
      for (int k = 0; k < 2; ++k)
        for (int n = 0; n < 2; ++n) {
          const double ay = d.christoffel[k][n][0] * p.y[0] + d.christoffel[k][n][1] * p.y[1];
          EXPECT_NEAR(cj.N[k][n] + ay, 0.0, 1e-8 * std::max(1.0, norm(p.y))) << name;
        }
    }
  }
}

TEST(Riemann, OppositeKSignBreaksTheLimit) {
  const ManifoldSpec s = rotating_axis();
  const Vec2d x{0.1, 0.1}, y{0.3, 1.0};
  const ConnectionJet good = connection_coeffs(s, x, y, KChoice::frame(kDefaultKSign));
  const ConnectionJet bad = connection_coeffs(s, x, y, KChoice::frame(-kDefaultKSign));
  EXPECT_LE(max_abs(good.N), 1e-12);
  EXPECT_GE(max_abs(bad.N), 0.1);
}
