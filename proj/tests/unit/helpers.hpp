#pragma once

#include <string>

#include "json.hpp"

#include "finsler2d/manifold.hpp"

namespace testing_support {

inline finsler2d::ManifoldSpec fixture(const std::string& name) {
  return finsler2d::load_manifold_file(std::string(FINSLER2D_FIXTURES) + "/" + name + ".json");
}

// Constant-coefficient spec on [-1, 1]^2 unless the caller overrides fields.
inline nlohmann::json base_doc(const std::string& kind = "finsleroid") {
  return nlohmann::json{{"domain", {{"x1", nlohmann::json::array({-1, 1})}, {"x2", nlohmann::json::array({-1, 1})}}},
                        {"metric_kind", kind},
                        {"a", nlohmann::json::array({nlohmann::json::array({"1", "0"}), nlohmann::json::array({"0", "1"})})},
                        {"btilde", nlohmann::json::array({"1", "0"})},
                        {"g", "0.5"},
                        {"c", "0.8"},
                        {"orientation", 1}};
}

inline finsler2d::ManifoldSpec spec_of(const nlohmann::json& doc) { return finsler2d::load_manifold(doc); }

}  // namespace testing_support
