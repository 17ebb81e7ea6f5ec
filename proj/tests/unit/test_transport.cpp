#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "finsler2d/transport.hpp"
#include "helpers.hpp"

using namespace finsler2d;
using testing_support::fixture;

namespace {

constexpr double kPi = std::numbers::pi;

TransportOptions quiet() {
  TransportOptions o;
  o.keep_samples = false;
  return o;
}

}  // namespace

TEST(Transport, CurveParsing) {
  const Curve c = Curve::parse("t", "0.2*t");
  EXPECT_DOUBLE_EQ(c.position(0.5)[1], 0.1);
  EXPECT_DOUBLE_EQ(c.velocity(0.3)[0], 1.0);
  const Curve p = Curve::from_json(nlohmann::json::parse(R"({"polyline": [[0, 0], [1, 0], [1, 1]]})"));
  EXPECT_TRUE(p.is_polyline());
  EXPECT_DOUBLE_EQ(p.position(0.75)[1], 0.5);
  EXPECT_DOUBLE_EQ(p.velocity(0.5, -1)[0], 2.0);
  EXPECT_DOUBLE_EQ(p.velocity(0.5, 1)[1], 2.0);
  EXPECT_THROW(Curve::polyline({{0, 0}}), SchemaError);
  EXPECT_THROW(Curve::from_json(nlohmann::json::parse(R"({"x1": "t"})")), SchemaError);
}

TEST(Transport, FlatIsIdentity) {
  const ManifoldSpec s = fixture("flat");
  const Curve c = Curve::parse("0.5*cos(3*t)", "0.5*sin(2*t)");
  const std::vector<Vec2d> y0{{1.0, 0.2}, {-0.3, 0.7}};
  const TransportResult r = horizontal_lift(s, c, y0, KChoice::frame(), 200, quiet());
  for (std::size_t a = 0; a < y0.size(); ++a) {
    EXPECT_EQ(r.y_final[a][0], y0[a][0]);
    EXPECT_EQ(r.y_final[a][1], y0[a][1]);
  }
}

TEST(Transport, SphereHolonomy) {
  const ManifoldSpec s = fixture("sphere");
  const double r0 = 0.1, xc = 1.5;
  const Curve c = Curve::parse("1.5 + 0.1*cos(2*pi*t)", "0.1*sin(2*pi*t)");
  const Vec2d x0 = c.position(0.0);
  const Vec2d y0{0.3, 1.0};
  const TransportResult r = horizontal_lift(s, c, {y0}, KChoice::frame(), 2000, quiet());
  double rot = theta(s, x0, r.y_final[0]) - theta(s, x0, y0);
  rot = std::remainder(rot, 2 * kPi);
  // enclosed area ∫∫ sin(x1) dx1 dx2 over the coordinate disc; K = 1
  const double area = kPi * r0 * r0 * std::sin(xc) * (1 - r0 * r0 / 8);
  EXPECT_NEAR(std::abs(rot) / area, 1.0, 0.05);
  EXPECT_LE(r.max_F_drift, 1e-10);
}

TEST(Transport, PreservesF) {
  const ManifoldSpec s = fixture("finsleroid_curved");
  const TransportResult r =
      horizontal_lift(s, Curve::parse("t", "0.2*t"), {{0.7, -1.1}, {0.2, 0.5}}, KChoice::frame(), 10000, quiet());
  EXPECT_LE(r.max_F_drift, 1e-8);
  EXPECT_LE(r.inner_product_drift, 1e-8);
}

TEST(Transport, ProportionalPairKeepsZeroAngle) {
  const ManifoldSpec s = fixture("randers_curved");
  const Vec2d y{0.4, -0.9};
  const TransportResult r = horizontal_lift(s, Curve::parse("-0.5 + t", "0.3*sin(4*t)"), {y, {3 * y[0], 3 * y[1]}},
                                            KChoice::frame(), 1000);
  EXPECT_LE(r.theta_pair_drift, 1e-10);
  for (const TransportSample& smp : r.samples) EXPECT_NEAR(smp.theta[1] - smp.theta[0], 0.0, 1e-10);
}

TEST(Transport, PairAnglePreserved) {
  const ManifoldSpec s = fixture("finsleroid_curved");
  const Vec2d x0{0.0, 0.0};
  const Frame<double> f = frame_at(s, x0);
  // two vectors 0.7 apart in θ
  const Vec2d y1 = arc_point(f, 0.3);
  const double t1 = theta(s, x0, y1);
  Vec2d y2 = arc_point(f, 1.0);
  for (int it = 0; it < 60; ++it) {
    const double e = theta(s, x0, y2) - t1 - 0.7;
    if (std::abs(e) < 1e-14) break;
    const double phi = std::atan2(dot(f.n, y2), dot(f.bt, y2)) - e * 0.8;
    y2 = arc_point(f, phi);
  }
  ASSERT_NEAR(theta(s, x0, y2) - t1, 0.7, 1e-10);
  const TransportResult r =
      horizontal_lift(s, Curve::parse("0.6*t", "-0.5*t*t"), {y1, y2}, KChoice::frame(), 10000, quiet());
  EXPECT_LE(r.theta_pair_drift, 1e-7);
}

TEST(Transport, CrossesTheCut) {
  const ManifoldSpec s = fixture("finsleroid_curved");
  const Frame<double> f = frame_at(s, {-0.8, 0.0});
  // start just above the negative axis so the rotating frame carries the vector across it
  std::vector<Vec2d> ys;
  for (double phi : {3.1, -3.1, 2.0}) ys.push_back(arc_point(f, phi));
  TransportOptions o = quiet();
  const TransportResult r = transport_report(s, Curve::parse("-0.8 + 1.6*t", "0.8*sin(3*t)"), ys, KChoice::frame(),
                                             4000, o);
  EXPECT_GT(r.stats.cut_crossings, 0);
  EXPECT_LE(r.theta_pair_drift, 1e-8);
  EXPECT_LE(r.max_F_drift, 1e-10);
  EXPECT_NEAR(r.order, 4.0, 0.3);
}

TEST(Transport, ConvergenceOrder) {
  for (const char* name : {"finsleroid_curved", "randers_curved", "finsleroid_varying_c"}) {
    const ManifoldSpec s = fixture(name);
    const TransportResult r = transport_report(s, Curve::parse("-0.5 + t", "0.4*cos(3*t)"), {{1.0, 0.5}, {-0.2, 1.0}},
                                               KChoice::frame(), 500, quiet());
    EXPECT_NEAR(r.order, 4.0, 0.3) << name;
    EXPECT_GT(r.order_differences[0], r.order_differences[1]);
  }
}

TEST(Transport, Errors) {
  const ManifoldSpec s = fixture("finsleroid_curved");
  const Curve c = Curve::parse("t", "0");
  EXPECT_THROW(horizontal_lift(s, c, {{1, 0}}, KChoice::frame(), 1), ParamRange);
  EXPECT_THROW(horizontal_lift(s, c, {}, KChoice::frame(), 10), ParamRange);
  EXPECT_THROW(horizontal_lift(s, c, {{0, 0}}, KChoice::frame(), 10), ZeroVector);
  EXPECT_THROW(transport_report(s, c, {{1, 0}}, KChoice::frame(), 10), ParamRange);
  try {
    horizontal_lift(s, Curve::parse("3*t", "0"), {{1, 0}}, KChoice::frame(), 100);
    FAIL() << "expected LeftDomain";
  } catch (const LeftDomain& e) {
    EXPECT_NEAR(e.t(), 1.0 / 3.0, 0.02);
  }
}

TEST(Transport, Samples) {
  const ManifoldSpec s = fixture("randers_curved");
  TransportOptions o;
  o.diagnostic_stride = 10;
  const TransportResult r = horizontal_lift(s, Curve::parse("t", "0.2*t"), {{1, 0}}, KChoice::frame(), 100, o);
  ASSERT_EQ(r.samples.size(), 11u);
  EXPECT_DOUBLE_EQ(r.samples.back().t, 1.0);
  EXPECT_EQ(r.stats.steps, 100);
  EXPECT_GT(r.stats.rhs_evaluations, 0);
}
