#include <gtest/gtest.h>

#include "finsler2d/errors.hpp"
#include "finsler2d/harness.hpp"
#include "helpers.hpp"

using namespace finsler2d;
using testing_support::base_doc;
using testing_support::fixture;
using testing_support::spec_of;

namespace {

std::string invariant_of(const nlohmann::json& doc) {
  try {
    spec_of(doc);
  } catch (const ValidationError& e) {
    return e.invariant();
  }
  return "";
}

}  // namespace

TEST(Manifold, FlatFixtureIsValid) {
  const ManifoldSpec s = fixture("flat");
  EXPECT_EQ(s.kind, MetricKind::Finsleroid);
  EXPECT_TRUE(s.c_is_constant());
  EXPECT_DOUBLE_EQ(s.g({0.3, 0.1}), 0.5);
  EXPECT_DOUBLE_EQ(s.c({0.3, 0.1}), 0.8);
}

TEST(Manifold, EveryFixtureLoads) {
  for (const char* n : {"flat", "finsleroid_curved", "finsleroid_curved_zero_charge", "finsleroid_varying_c",
                        "randers_curved", "riemannian_curved", "sphere"})
    EXPECT_NO_THROW(fixture(n)) << n;
}

TEST(Manifold, RejectsAxisNormOutOfRange) {
  auto doc = base_doc();
  doc["c"] = "1.2";
  EXPECT_EQ(invariant_of(doc), "c-range");
}

TEST(Manifold, RejectsNonUnitAxis) {
  auto doc = base_doc();
  doc["btilde"] = {"2", "0"};
  EXPECT_EQ(invariant_of(doc), "btilde-unit-norm");
}

TEST(Manifold, RejectsChargeOutOfRange) {
  auto doc = base_doc();
  doc["g"] = "2.5";
  EXPECT_EQ(invariant_of(doc), "g-range");
}

TEST(Manifold, RejectsIndefiniteMetric) {
  auto doc = base_doc("riemannian");
  doc["a"] = nlohmann::json::array({nlohmann::json::array({"1", "0"}), nlohmann::json::array({"0", "-1"})});
  EXPECT_EQ(invariant_of(doc), "a-positive-definite");
}

TEST(Manifold, RejectsAsymmetricMetric) {
  auto doc = base_doc("riemannian");
  doc["a"] = nlohmann::json::array({nlohmann::json::array({"1", "0.1"}), nlohmann::json::array({"0", "1"})});
  EXPECT_EQ(invariant_of(doc), "a-symmetric");
}

TEST(Manifold, SchemaErrors) {
  auto doc = base_doc();
  doc.erase("a");
  EXPECT_THROW(spec_of(doc), SchemaError);
  doc = base_doc();
  doc["metric_kind"] = "kropina";
  EXPECT_THROW(spec_of(doc), SchemaError);
  doc = base_doc();
  doc["g"] = "0.5 +";
  EXPECT_THROW(spec_of(doc), SchemaError);
  EXPECT_THROW(load_manifold_text("{not json"), SchemaError);
}

TEST(Manifold, FieldsCarryExactDerivatives) {
  const ManifoldSpec s = fixture("finsleroid_curved");
  const FieldSample g = s.g.sample({0.2, -0.4});
  EXPECT_DOUBLE_EQ(g.v, 0.52);
  EXPECT_DOUBLE_EQ(g.grad[0], 0.1);
  EXPECT_DOUBLE_EQ(g.grad[1], 0.0);
  const FieldSample a22 = s.a22.sample({0.5, 0.4});
  EXPECT_NEAR(a22.grad[0], 0.3 * 0.4 * std::exp(0.3 * 0.2), 1e-14);
  EXPECT_NEAR(a22.hess[0][1], (0.3 + 0.09 * 0.2) * std::exp(0.06), 1e-14);
}

TEST(Manifold, JsonRoundTrip) {
  const ManifoldSpec s = fixture("finsleroid_varying_c");
  const ManifoldSpec r = load_manifold(manifold_to_json(s));
  for (const Vec2d& x : {Vec2d{0.1, 0.2}, Vec2d{-0.7, 0.9}}) {
    EXPECT_NEAR(r.c(x), s.c(x), 1e-15);
    EXPECT_NEAR(r.a22(x), s.a22(x), 1e-15);
    EXPECT_NEAR(r.bt2(x), s.bt2(x), 1e-15);
  }
  EXPECT_EQ(r.kind, s.kind);
}

TEST(Manifold, CorruptedSpecFailsBeforeSuite) {
  auto doc = base_doc();
  doc["btilde"] = {"1.1", "0"};
  EXPECT_THROW(run_identity_suite(spec_of(doc), 42, 5), ValidationError);
}
