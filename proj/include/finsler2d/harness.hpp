#pragma once

// Identity catalog, random sampling and the verification runner.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "finsler2d/curvature.hpp"

namespace finsler2d {

inline constexpr const char* kVerifySchema = "finsler2d.verify/1";

enum class ToleranceClass { ClosedForm, FirstOrderFD, NestedFD, Quadrature, Area };

// Closed vs closed 1e-10; vs first-order differences 1e-6; vs nested differences 1e-5;
// quadrature-based 1e-6; area oracle 1e-4.
double tolerance_for(ToleranceClass c);
std::string to_string(ToleranceClass c);

// SplitMix64: state advances by a fixed odd increment, output is a mixed copy of the counter.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

struct SamplePoint {
  Vec2d x{}, y{};
};

// x uniform in the domain box, y uniform in area over the annulus 0.1 <= |y| <= 10.
std::vector<SamplePoint> draw_samples(const ManifoldSpec& spec, std::uint64_t seed, int n);

// residual = diff / max(1, scale)
struct Residual {
  double diff = 0.0;
  double scale = 0.0;
  bool skipped = false;  // sample outside the identity's chart or range
  double value() const { return diff / std::max(1.0, scale); }
};

struct IdentityContext {
  const ManifoldSpec& spec;
  const KChoice& kc;
  Vec2d x, y;
};

enum FamilyMask : unsigned {
  kFinsleroid = 1u,
  kRanders = 2u,
  kRiemannian = 4u,
  kFinslerFamilies = kFinsleroid | kRanders,
  kAllFamilies = kFinsleroid | kRanders | kRiemannian,
};

struct IdentityRecord {
  std::string id;
  std::string source;  // the formula as stated in the source text
  ToleranceClass tolerance_class = ToleranceClass::ClosedForm;
  unsigned families = kAllFamilies;
  bool constant_c_only = false;
  bool frame_k_only = false;  // requires k proportional to p (frame or zero choice)
  int max_samples = 0;        // 0: every drawn sample
  std::function<Residual(const IdentityContext&)> eval;

  double tolerance() const { return tolerance_for(tolerance_class); }
};

const std::vector<IdentityRecord>& identity_catalog();
const IdentityRecord* find_identity(const std::string& id);

struct IdentityResult {
  std::string id, source, status;  // pass | fail | not-applicable | error
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::string tolerance_class;
  Vec2d worst_x{}, worst_y{};
  int evaluated = 0, skipped = 0;
  std::string message;
};

struct VerifyReport {
  std::string schema = kVerifySchema;
  std::uint64_t seed = 0;
  int samples = 0;
  std::string metric_kind;
  std::string k_choice;
  std::vector<IdentityResult> entries;
  bool all_pass = true;
  double seconds = 0.0;

  nlohmann::json to_json() const;
  const IdentityResult* find(const std::string& id) const;
};

struct SuiteOptions {
  KChoice k = KChoice::frame();
  std::vector<std::string> only;  // restrict to these ids when non-empty
};

VerifyReport run_identity_suite(const ManifoldSpec& spec, std::uint64_t seed, int n_samples,
                                const SuiteOptions& opt = {});

// Every in-scope formula of the source text, each pointing at the catalog entry that
// checks it or at the routine that implements it as a definition.
struct CoverageItem {
  std::string topic;
  std::string identity_id;  // empty when covered as a definition
  std::string implemented_by;
};
const std::vector<CoverageItem>& coverage_list();

}  // namespace finsler2d
