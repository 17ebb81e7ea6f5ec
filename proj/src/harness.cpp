#include "finsler2d/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

namespace finsler2d {

double tolerance_for(ToleranceClass c) {
  switch (c) {
    case ToleranceClass::ClosedForm: return 1e-10;
    case ToleranceClass::FirstOrderFD: return 1e-6;
    case ToleranceClass::NestedFD: return 1e-5;
    case ToleranceClass::Quadrature: return 1e-6;
    case ToleranceClass::Area: return 1e-4;
  }
  return 0.0;
}

std::string to_string(ToleranceClass c) {
  switch (c) {
    case ToleranceClass::ClosedForm: return "closed-form";
    case ToleranceClass::FirstOrderFD: return "first-order-fd";
    case ToleranceClass::NestedFD: return "nested-fd";
    case ToleranceClass::Quadrature: return "quadrature";
    case ToleranceClass::Area: return "area";
  }
  return "?";
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::vector<SamplePoint> draw_samples(const ManifoldSpec& spec, std::uint64_t seed, int n) {
  SplitMix64 rng(seed);
  std::vector<SamplePoint> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) {
    SamplePoint s;
    s.x = {rng.uniform(spec.domain.lo[0], spec.domain.hi[0]), rng.uniform(spec.domain.lo[1], spec.domain.hi[1])};
    const double r = std::sqrt(rng.uniform(0.01, 100.0));
    const double a = rng.uniform(-std::numbers::pi, std::numbers::pi);
    s.y = {r * std::cos(a), r * std::sin(a)};
    out.push_back(s);
  }
  return out;
}

const IdentityRecord* find_identity(const std::string& id) {
  for (const IdentityRecord& r : identity_catalog())
    if (r.id == id) return &r;
  return nullptr;
}

namespace {

unsigned family_bit(MetricKind k) {
  switch (k) {
    case MetricKind::Finsleroid: return kFinsleroid;
    case MetricKind::Randers: return kRanders;
    case MetricKind::Riemannian: return kRiemannian;
  }
  return 0;
}

nlohmann::json vec_json(const Vec2d& v) { return nlohmann::json::array({v[0], v[1]}); }

}  // namespace

VerifyReport run_identity_suite(const ManifoldSpec& spec, std::uint64_t seed, int n_samples,
                                const SuiteOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  VerifyReport rep;
  rep.seed = seed;
  rep.samples = n_samples;
  rep.metric_kind = to_string(spec.kind);
  rep.k_choice = to_string(opt.k);
  const std::vector<SamplePoint> pts = draw_samples(spec, seed, n_samples);

  for (const IdentityRecord& rec : identity_catalog()) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), rec.id) == opt.only.end()) continue;
    IdentityResult r;
    r.id = rec.id;
    r.source = rec.source;
    r.tolerance = rec.tolerance();
    r.tolerance_class = to_string(rec.tolerance_class);
    if (!(rec.families & family_bit(spec.kind))) {
      r.status = "not-applicable";
      r.message = "identity is specific to another metric family";
    } else if (rec.constant_c_only && !spec.c_is_constant()) {
      r.status = "not-applicable";
      r.message = "identity assumes a constant axis norm c";
    } else if (rec.frame_k_only && opt.k.mode == KChoice::Mode::User) {
      r.status = "not-applicable";
      r.message = "identity assumes k proportional to p";
    } else {
      const std::size_t count =
          rec.max_samples > 0 ? std::min<std::size_t>(pts.size(), static_cast<std::size_t>(rec.max_samples)) : pts.size();
      try {
        for (std::size_t i = 0; i < count; ++i) {
          const IdentityContext ctx{spec, opt.k, pts[i].x, pts[i].y};
          const Residual res = rec.eval(ctx);
          if (res.skipped) {
            ++r.skipped;
            continue;
          }
          ++r.evaluated;
          const double v = res.value();
          if (!std::isfinite(v) || v >= r.max_residual) {
            r.max_residual = std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
            r.worst_x = pts[i].x;
            r.worst_y = pts[i].y;
          }
        }
        r.status = r.max_residual <= r.tolerance ? "pass" : "fail";
        if (r.evaluated == 0) r.message = "no sample fell inside the identity's chart";
      } catch (const std::exception& e) {
        r.status = "error";
        r.message = e.what();
      }
    }
    if (r.status == "fail" || r.status == "error") rep.all_pass = false;
    rep.entries.push_back(std::move(r));
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

const IdentityResult* VerifyReport::find(const std::string& id) const {
  for (const IdentityResult& e : entries)
    if (e.id == id) return &e;
  return nullptr;
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json j;
  j["schema"] = schema;
  j["seed"] = seed;
  j["samples"] = samples;
  j["metric_kind"] = metric_kind;
  j["k_choice"] = k_choice;
  j["all_pass"] = all_pass;
  j["seconds"] = seconds;
  j["identities"] = nlohmann::json::array();
  for (const IdentityResult& e : entries) {
    nlohmann::json o;
    o["id"] = e.id;
    o["source"] = e.source;
    o["status"] = e.status;
    o["max_residual"] = std::isfinite(e.max_residual) ? nlohmann::json(e.max_residual) : nlohmann::json("inf");
    o["tolerance"] = e.tolerance;
    o["tolerance_class"] = e.tolerance_class;
    o["worst_x"] = vec_json(e.worst_x);
    o["worst_y"] = vec_json(e.worst_y);
    o["evaluated"] = e.evaluated;
    o["skipped"] = e.skipped;
    if (!e.message.empty()) o["message"] = e.message;
    j["identities"].push_back(std::move(o));
  }
  return j;
}

}  // namespace finsler2d
