// Property-based acceptance run. One PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <type_traits>
#include <vector>

#include "finsler2d/harness.hpp"
#include "finsler2d/transport.hpp"

using namespace finsler2d;

namespace {

constexpr double kPi = std::numbers::pi;

ManifoldSpec fixture(const std::string& name) {
  return load_manifold_file(std::string(FINSLER2D_FIXTURES) + "/" + name + ".json");
}

struct Outcome {
  bool ok = true;
  std::string detail;
};

void note(Outcome& o, bool ok, const std::string& what) {
  if (!ok) o.ok = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += what;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// Worst residual over the named catalog entries; errors count as infinite.
double suite_max(const ManifoldSpec& spec, const std::vector<std::string>& ids, std::uint64_t seed, int samples,
                 const KChoice& kc = KChoice::frame(), int* evaluated = nullptr) {
  SuiteOptions opt;
  opt.k = kc;
  opt.only = ids;
  const VerifyReport rep = run_identity_suite(spec, seed, samples, opt);
  double m = 0.0;
  for (const IdentityResult& e : rep.entries) {
    if (e.status == "error") return INFINITY;
    if (e.status == "not-applicable") continue;
    m = std::max(m, e.max_residual);
    if (evaluated) *evaluated += e.evaluated;
  }
  return m;
}

template <class A>
double arr_max(const A& a) {
  if constexpr (std::is_arithmetic_v<A>) {
    return std::abs(a);
  } else {
    double m = 0.0;
    for (const auto& v : a) m = std::max(m, arr_max(v));
    return m;
  }
}

template <class A>
A minus(A a, const A& b) {
  if constexpr (std::is_arithmetic_v<A>) {
    return a - b;
  } else {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = minus(a[i], b[i]);
    return a;
  }
}

const std::vector<std::string> kFinslerFixtures{"finsleroid_curved", "finsleroid_varying_c", "randers_curved"};

// 1. g = 0 reduces K to S and g_ij to a_ij.
Outcome riemannian_degeneration() {
  Outcome o;
  const ManifoldSpec spec = fixture("finsleroid_curved_zero_charge");
  double dK = 0.0, dg = 0.0;
  for (const SamplePoint& p : draw_samples(spec, 1, 1000)) {
    const Frame<double> f = frame_at(spec, p.x);
    const MetricJet<double> j = metric_jet(spec.kind, f, p.y);
    dK = std::max(dK, std::abs(j.F - j.S) / j.S);
    double am = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) am = std::max(am, std::abs(f.a[i][k]));
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) dg = std::max(dg, std::abs(j.g[i][k] - f.a[i][k]) / am);
  }
  note(o, dK <= 1e-12, "K-S " + fmt(dK));
  note(o, dg <= 1e-12, "g-a " + fmt(dg));
  return o;
}

// 2. d_n F = 0, d_n theta = k_n, y_k N^k_nmi = 0.
Outcome connection_axioms() {
  Outcome o;
  for (const std::string& name : kFinslerFixtures) {
    const double r = suite_max(fixture(name),
                               {"connection-preserves-F", "connection-angle-rule", "y-lower-annihilates-N-nmi"}, 2, 500);
    note(o, r <= 1e-7, name + " " + fmt(r));
  }
  return o;
}

// 3. Metricity and the kernel of the covariant derivative.
Outcome metricity() {
  Outcome o;
  for (const std::string& name : kFinslerFixtures) {
    const ManifoldSpec spec = fixture(name);
    const double gy = suite_max(spec, {"metric-compatibility"}, 3, 200);
    const double yl = suite_max(spec, {"covariant-y-lower-vanishes"}, 3, 200);
    const double mu = suite_max(spec, {"covariant-m-upper-vanishes"}, 3, 200);
    note(o, gy <= 1e-7 && yl <= 1e-8 && mu <= 1e-7, name + " g " + fmt(gy) + " y " + fmt(yl) + " m " + fmt(mu));
  }
  return o;
}

// 4. Riemannian family: N^k_n = -a^k_nh y^h with the default k.
Outcome riemannian_limit() {
  Outcome o;
  for (const std::string& name : {"riemannian_curved", "sphere"}) {
    int ev = 0;
    const double r = suite_max(fixture(name), {"riemannian-limit-is-christoffel"}, 4, 500, KChoice::frame(), &ev);
    note(o, r <= 1e-8 && ev > 0, std::string(name) + " " + fmt(r));
  }
  return o;
}

// 5. Closed curvature forms against commutators by differences.
Outcome curvature_forms() {
  Outcome o;
  double rel = 0.0;
  for (const std::string& name : kFinslerFixtures) {
    const ManifoldSpec spec = fixture(name);
    for (const SamplePoint& p : draw_samples(spec, 5, 4)) {
      const CurvatureJet cv = curvature_closed(spec, p.x, p.y, KChoice::frame());
      const CommutatorOracle orc = curvature_commutator_oracle(spec, p.x, p.y, KChoice::frame());
      const double sM = std::max(arr_max(cv.Mn), 1e-300), sE = std::max(arr_max(cv.E), 1e-300);
      rel = std::max({rel, arr_max(minus(orc.Mn, cv.Mn)) / sM, arr_max(minus(orc.E, cv.E)) / sE,
                      arr_max(minus(orc.E_from_M, cv.E)) / sE});
    }
  }
  note(o, rel <= 1e-5, "commutator rel " + fmt(rel));
  double ids = 0.0, skew = 0.0;
  for (const std::string& name : kFinslerFixtures) {
    const ManifoldSpec spec = fixture(name);
    ids = std::max(ids, suite_max(spec, {"curvature-identity-set"}, 5, 200));
    skew = std::max(skew, suite_max(spec, {"rho-skew-symmetry"}, 5, 200));
  }
  note(o, ids <= 1e-6, "identity set " + fmt(ids));
  note(o, skew <= 1e-12, "skew " + fmt(skew));
  return o;
}

// 6. rho_knij = f1 Lbar_knij.
Outcome factorization() {
  Outcome o;
  for (const std::string& name : kFinslerFixtures) {
    const ManifoldSpec spec = fixture(name);
    const std::vector<SamplePoint> xs = draw_samples(spec, 6, 20);
    double rel = 0.0, cT = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      std::vector<Vec2d> ys;
      for (const SamplePoint& p : draw_samples(spec, 600 + i, 50)) ys.push_back(p.y);
      const FactorizationReport r = factorization_report(spec, xs[i].x, KChoice::frame(), ys);
      rel = std::max(rel, r.relative);
      cT = std::max(cT, r.max_f1_cT);
    }
    const bool fin = spec.kind == MetricKind::Finsleroid;
    note(o, rel <= 1e-6 && (!fin || cT <= 1e-10), name + " rel " + fmt(rel) + (fin ? " f1-cT " + fmt(cT) : ""));
  }
  return o;
}

// 7. Sector areas, indicatrix length, and the g = 0 quarter angles.
Outcome angle_area() {
  Outcome o;
  const QuadratureOptions q = oracle_quadrature();
  SplitMix64 rng(7);
  double area = 0.0, arc = 0.0;
  for (const std::string& name : kFinslerFixtures) {
    const ManifoldSpec spec = fixture(name);
    for (const SamplePoint& p : draw_samples(spec, 7, 7)) {
      const double phi = rng.uniform(0.2, 2.5);
      const Vec2d y2{std::cos(phi) * p.y[0] - std::sin(phi) * p.y[1], std::sin(phi) * p.y[0] + std::cos(phi) * p.y[1]};
      double dth = two_vector_angle(spec, p.x, p.y, y2, q);
      if (dth < 0.0) dth += theta_bounds(spec, p.x, q).theta_max;
      const double s = sector_area(spec, p.x, p.y, y2, q);
      area = std::max(area, std::abs(s - 0.5 * dth) / (0.5 * dth));
    }
    for (const SamplePoint& p : draw_samples(spec, 8, 3)) {
      const double L = indicatrix_arclength(spec, p.x, q);
      const double tm = theta_bounds(spec, p.x, q).theta_max;
      arc = std::max(arc, std::abs(L - tm) / tm);
    }
  }
  note(o, area <= 1e-4, "sector " + fmt(area));
  note(o, arc <= 1e-6, "arclength " + fmt(arc));
  const ManifoldSpec zero = fixture("finsleroid_curved_zero_charge");
  double quarter = 0.0;
  for (const SamplePoint& p : draw_samples(zero, 9, 10)) {
    const AngleBounds b = theta_bounds(zero, p.x, q);
    quarter = std::max({quarter, std::abs(b.theta_I - kPi / 2), std::abs(b.theta_II - kPi / 2)});
  }
  note(o, quarter <= 1e-8, "quarter angles " + fmt(quarter));
  return o;
}

// 8. Transport isometry along random curves.
Curve random_curve(const ManifoldSpec& spec, SplitMix64& rng) {
  const DomainBox& d = spec.domain;
  const double w = std::min(d.hi[0] - d.lo[0], d.hi[1] - d.lo[1]);
  const double r = rng.uniform(0.1, 0.3) * w;
  const double cx = rng.uniform(d.lo[0] + r, d.hi[0] - r), cy = rng.uniform(d.lo[1] + r, d.hi[1] - r);
  const double ph = rng.uniform(-kPi, kPi), om = rng.uniform(1.0, 5.0), e = rng.uniform(0.3, 1.0);
  char x1[160], x2[160];
  std::snprintf(x1, sizeof x1, "%.17g + %.17g*cos(%.17g*t + %.17g)", cx, r, om, ph);
  std::snprintf(x2, sizeof x2, "%.17g + %.17g*sin(%.17g*t + %.17g)", cy, e * r, om, ph);
  return Curve::parse(x1, x2);
}

Vec2d random_y(SplitMix64& rng) {
  const double a = rng.uniform(-kPi, kPi), r = rng.uniform(0.5, 2.0);
  return {r * std::cos(a), r * std::sin(a)};
}

Outcome transport_isometry() {
  Outcome o;
  SplitMix64 rng(8);
  double Fd = 0.0, td = 0.0, ipd = 0.0, omin = 1e9, omax = -1e9, land = 0.0;
  for (const std::string& name : kFinslerFixtures) {
    const ManifoldSpec spec = fixture(name);
    for (int c = 0; c < 10; ++c) {
      const Curve curve = random_curve(spec, rng);
      const std::vector<Vec2d> ys{random_y(rng), random_y(rng)};
      TransportOptions opt;
      opt.keep_samples = false;
      const TransportResult r = transport_report(spec, curve, ys, KChoice::frame(), 10000, opt);
      for (std::size_t a = 0; a < ys.size(); ++a) {
        const double F0 = metric_function(spec, curve.position(0.0), ys[a]);
        Fd = std::max(Fd, r.F_drift[a] / std::max(1.0, F0));
      }
      td = std::max(td, r.theta_pair_drift);
      ipd = std::max(ipd, r.inner_product_drift);
      omin = std::min(omin, r.order);
      omax = std::max(omax, r.order);
    }
    const Curve curve = random_curve(spec, rng);
    std::vector<Vec2d> ring;
    for (const IndicatrixSample& s : indicatrix_sweep(spec, curve.position(0.0), 36)) ring.push_back(s.y);
    TransportOptions opt;
    opt.keep_samples = false;
    opt.linearized = false;
    const TransportResult r = horizontal_lift(spec, curve, ring, KChoice::frame(), 2000, opt);
    for (const Vec2d& y : r.y_final) land = std::max(land, std::abs(metric_function(spec, curve.position(1.0), y) - 1.0));
  }
  note(o, Fd <= 1e-7, "F drift " + fmt(Fd));
  note(o, td <= 1e-7, "pair angle drift " + fmt(td));
  note(o, ipd <= 1e-7, "inner product drift " + fmt(ipd));
  note(o, omin >= 3.7 && omax <= 4.3, "order " + fmt(omin) + ".." + fmt(omax));
  note(o, land <= 1e-6, "indicatrix landing " + fmt(land));
  return o;
}

// 9. Full catalog on every fixture.
Outcome catalog() {
  Outcome o;
  for (const std::string& name : {"flat", "finsleroid_curved", "finsleroid_curved_zero_charge", "finsleroid_varying_c",
                                   "randers_curved", "riemannian_curved", "sphere"}) {
    const VerifyReport rep = run_identity_suite(fixture(name), 42, 200);
    int bad = 0;
    std::string first;
    for (const IdentityResult& e : rep.entries)
      if (e.status == "fail" || e.status == "error") {
        if (bad++ == 0) first = e.id;
      }
    note(o, bad == 0, std::string(name) + (bad ? " " + std::to_string(bad) + " failing, e.g. " + first : " ok"));
  }
  return o;
}

// 10. Jets and identities near the axis n = 0.
Outcome regularity() {
  Outcome o;
  int nonfinite = 0, bad = 0;
  double worst = 0.0;
  std::string worst_id;
  SplitMix64 rng(10);
  for (const std::string& name : {"finsleroid_curved", "finsleroid_varying_c", "randers_curved"}) {
    const ManifoldSpec spec = fixture(name);
    const std::vector<SamplePoint> pts = draw_samples(spec, 10, 34);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Frame<double> f = frame_at(spec, pts[i].x);
      const double phi = (i % 2 ? kPi : 0.0) + rng.uniform(-1e-3, 1e-3);
      const double r = rng.uniform(0.3, 3.0);
      const Vec2d a = arc_point(f, phi);
      const Vec2d y{r * a[0], r * a[1]};
      const KChoice kc = KChoice::frame();
      const ConnectionJet cj = derivative_coeffs(spec, pts[i].x, y, kc);
      const CurvatureJet cv = curvature_closed(spec, pts[i].x, y, kc);
      const MetricJet<double> j = metric_jet(spec.kind, f, y);
      const double probe = j.F + j.I + arr_max(cj.Nnm) + arr_max(cj.Nnmi) + arr_max(cv.rho);
      if (!std::isfinite(probe)) ++nonfinite;
      const IdentityContext ctx{spec, kc, pts[i].x, y};
      for (const IdentityRecord& rec : identity_catalog()) {
        if (rec.max_samples > 0 && rec.max_samples < 20 && i % 8 != 0) continue;
        if (rec.constant_c_only && !spec.c_is_constant()) continue;
        if (!(rec.families & (spec.kind == MetricKind::Finsleroid ? kFinsleroid : kRanders))) continue;
        double v;
        try {
          const Residual res = rec.eval(ctx);
          if (res.skipped) continue;
          v = res.value();
        } catch (const std::exception&) {
          v = INFINITY;
        }
        const double rel = v / rec.tolerance();
        if (!(rel <= 1.0)) ++bad;
        if (!(rel <= worst)) {
          worst = rel;
          worst_id = rec.id;
        }
      }
    }
  }
  note(o, nonfinite == 0, "non-finite jets " + std::to_string(nonfinite));
  note(o, bad == 0, "identity failures " + std::to_string(bad) + ", worst " + worst_id + " at " + fmt(worst) + " of tolerance");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"riemannian-degeneration", riemannian_degeneration},
      {"connection-axioms", connection_axioms},
      {"metricity-and-kernel", metricity},
      {"riemannian-limit-torsionless", riemannian_limit},
      {"curvature-closed-forms", curvature_forms},
      {"factorization", factorization},
      {"angle-and-area", angle_area},
      {"transport-isometry", transport_isometry},
      {"identity-catalog", catalog},
      {"axis-regularity", regularity},
  };
  const auto t0 = std::chrono::steady_clock::now();
  bool all = true;
  for (const auto& [name, run] : criteria) {
    const auto t = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("error: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
    std::printf("%s %s (%.1fs) %s\n", o.ok ? "PASS" : "FAIL", name.c_str(), s, o.detail.c_str());
    std::fflush(stdout);
    all = all && o.ok;
  }
  std::printf("total %.1fs\n", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return all ? 0 : 1;
}
