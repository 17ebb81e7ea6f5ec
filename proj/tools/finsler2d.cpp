// finsler2d command line: pointwise evaluation, angles, connection, curvature,
// transport along a curve and the identity suite.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "finsler2d/harness.hpp"
#include "finsler2d/transport.hpp"

using namespace finsler2d;
using nlohmann::json;

namespace {

constexpr const char* kEvalSchema = "finsler2d.eval/1";
constexpr const char* kAngleSchema = "finsler2d.angle/1";
constexpr const char* kConnectionSchema = "finsler2d.connection/1";
constexpr const char* kCurvatureSchema = "finsler2d.curvature/1";
constexpr const char* kTransportSchema = "finsler2d.transport/1";
constexpr const char* kIndicatrixSchema = "finsler2d.indicatrix/1";
constexpr const char* kErrorSchema = "finsler2d.error/1";

struct Args {
  std::string command;
  std::string spec_path;
  std::string x = "0,0";
  std::string y = "1,0";
  std::string y2;
  std::uint64_t seed = 42;
  int samples = 200;
  int steps = 10000;
  std::string out;
  std::string format;
  std::string k = "frame";
  std::vector<std::string> only;
  std::string curve;
  std::string vectors;
  std::string summary;
};

Vec2d parse_pair(const std::string& s, const char* what) {
  std::stringstream ss(s);
  Vec2d v{};
  char comma = 0;
  if (!(ss >> v[0] >> comma >> v[1]) || comma != ',' || !(ss >> std::ws).eof())
    throw SchemaError(std::string(what) + " must be two numbers 'a,b'");
  return v;
}

std::vector<Vec2d> parse_pairs(const std::string& s) {
  std::vector<Vec2d> r;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (!item.empty()) r.push_back(parse_pair(item, "--vectors entry"));
  return r;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
json j2(const Vec2d& v) { return {num(v[0]), num(v[1])}; }
json j2(const Mat2d& m) { return {j2(m[0]), j2(m[1])}; }
json j2(const Arr3d& a) { return {j2(a[0]), j2(a[1])}; }
json j2(const Arr4d& a) { return {j2(a[0]), j2(a[1])}; }

bool finite_all(const json& j) {
  if (j.is_null()) return false;
  if (j.is_number()) return std::isfinite(j.get<double>());
  if (j.is_array() || j.is_object()) {
    for (const auto& e : j)
      if (!finite_all(e)) return false;
  }
  return true;
}

std::ostream& output(const Args& a, std::ofstream& file) {
  if (a.out.empty()) return std::cout;
  file.open(a.out);
  if (!file) throw SchemaError("cannot open output file " + a.out);
  return file;
}

void emit(const Args& a, const json& doc) {
  std::ofstream f;
  output(a, f) << std::setprecision(17) << doc.dump(2) << "\n";
}

json base(const char* schema, const ManifoldSpec& spec, const Vec2d& x) {
  json j;
  j["schema"] = schema;
  j["metric_kind"] = to_string(spec.kind);
  j["x"] = j2(x);
  return j;
}

int cmd_eval(const Args& a, const ManifoldSpec& spec) {
  const Vec2d x = parse_pair(a.x, "--x"), y = parse_pair(a.y, "--y");
  const MetricJet<double> m = metric_at(spec, x, y);
  json j = base(kEvalSchema, spec, x);
  j["y"] = j2(y);
  j["F"] = num(m.F);
  j["S"] = num(m.S);
  j["b"] = num(m.b);
  j["n"] = num(m.n_y);
  j["q"] = num(m.q);
  j["l_lower"] = j2(m.l);
  j["l_upper"] = j2(m.l_up);
  j["y_lower"] = j2(m.y_lo);
  j["g"] = j2(m.g);
  j["g_inverse"] = j2(m.g_up);
  j["det_ratio"] = num(m.det_ratio);
  j["m_lower"] = j2(m.m);
  j["m_upper"] = j2(m.m_up);
  j["I"] = num(m.I);
  j["T"] = num(m.Tf);
  j["theta"] = num(theta(spec, x, y));
  j["chart"] = to_string(chart_of(spec, x, y));
  const bool ok = finite_all(j) && m.g[0][0] > 0.0 && det(m.g) > 0.0;
  j["checks"] = {{"finite_and_positive_definite", ok}};
  emit(a, j);
  return ok ? 0 : 1;
}

int cmd_angle(const Args& a, const ManifoldSpec& spec) {
  const Vec2d x = parse_pair(a.x, "--x"), y = parse_pair(a.y, "--y");
  const AngleBounds bd = theta_bounds(spec, x);
  json j = base(kAngleSchema, spec, x);
  j["y"] = j2(y);
  j["theta"] = num(theta(spec, x, y));
  j["chart"] = to_string(chart_of(spec, x, y));
  j["theta_I"] = num(bd.theta_I);
  j["theta_II"] = num(bd.theta_II);
  j["theta_max"] = num(bd.theta_max);
  j["dtheta_dx"] = j2(dtheta_dx(spec, x, y));
  const double arc = indicatrix_arclength(spec, x);
  j["indicatrix_arclength"] = num(arc);
  bool ok = std::abs(arc - bd.theta_max) <= 1e-6 * bd.theta_max;
  if (!a.y2.empty()) {
    const Vec2d y2 = parse_pair(a.y2, "--y2");
    double dth = two_vector_angle(spec, x, y, y2);
    if (dth < 0.0) dth += bd.theta_max;
    const double area = sector_area(spec, x, y, y2);
    j["y2"] = j2(y2);
    j["delta_theta"] = num(dth);
    j["sector_area"] = num(area);
    ok = ok && std::abs(area - 0.5 * dth) <= 1e-4 * std::max(std::abs(0.5 * dth), 1e-300);
  }
  ok = ok && finite_all(j);
  j["checks"] = {{"arclength_and_area", ok}};
  emit(a, j);
  return ok ? 0 : 1;
}

int cmd_indicatrix(const Args& a, const ManifoldSpec& spec) {
  const Vec2d x = parse_pair(a.x, "--x");
  const int count = a.samples > 0 ? a.samples : 72;
  const std::vector<IndicatrixSample> sw = indicatrix_sweep(spec, x, count);
  bool ok = true;
  for (const auto& s : sw) ok = ok && std::abs(s.F - 1.0) <= 1e-10 && std::isfinite(s.theta);
  std::ofstream f;
  std::ostream& os = output(a, f);
  if (a.format == "json") {
    json j = base(kIndicatrixSchema, spec, x);
    j["samples"] = json::array();
    for (const auto& s : sw) j["samples"].push_back({{"phi", s.phi}, {"y", j2(s.y)}, {"theta", s.theta}, {"F", s.F}});
    os << std::setprecision(17) << j.dump(2) << "\n";
  } else {
    os << std::setprecision(17) << "phi,y1,y2,theta,F\n";
    for (const auto& s : sw) os << s.phi << ',' << s.y[0] << ',' << s.y[1] << ',' << s.theta << ',' << s.F << '\n';
  }
  return ok ? 0 : 1;
}

int cmd_connection(const Args& a, const ManifoldSpec& spec, const KChoice& kc) {
  const Vec2d x = parse_pair(a.x, "--x"), y = parse_pair(a.y, "--y");
  const ConnectionJet cj = derivative_coeffs(spec, x, y, kc);
  json j = base(kConnectionSchema, spec, x);
  j["y"] = j2(y);
  j["k_choice"] = to_string(kc);
  j["N"] = j2(cj.N);
  j["D"] = j2(cj.D);
  j["N_y"] = j2(cj.Nnm);
  j["N_yy"] = j2(cj.Nnmi);
  j["k"] = j2(cj.k);
  j["P"] = j2(cj.P);
  j["I"] = num(cj.I);
  // D^k_12 - D^k_21, reported as is
  j["torsion_12"] = {num(cj.D[0][0][1] - cj.D[0][1][0]), num(cj.D[1][0][1] - cj.D[1][1][0])};
  const MetricJet<D4> j4 = metric_jet_d4(spec, x, y);
  const Vec2d dF = d_apply(cj, {j4.F.d[0], j4.F.d[1]}, {j4.F.d[2], j4.F.d[3]});
  j["d_F"] = j2(dF);
  const bool ok = finite_all(j) && max_abs(dF) <= 1e-7 * std::max({1.0, max_abs(cj.N), j4.F.v});
  j["checks"] = {{"F_preserved", ok}};
  emit(a, j);
  return ok ? 0 : 1;
}

int cmd_curvature(const Args& a, const ManifoldSpec& spec, const KChoice& kc) {
  const Vec2d x = parse_pair(a.x, "--x"), y = parse_pair(a.y, "--y");
  const CurvatureJet cv = curvature_closed(spec, x, y, kc);
  const RiemannCounterpart rc = riemann_counterpart(spec, x, kc);
  std::vector<Vec2d> ys;
  SplitMix64 rng(a.seed);
  for (int i = 0; i < 50; ++i) {
    const double r = std::sqrt(rng.uniform(0.01, 100.0)), t = rng.uniform(-std::numbers::pi, std::numbers::pi);
    ys.push_back({r * std::cos(t), r * std::sin(t)});
  }
  const FactorizationReport fr = factorization_report(spec, x, kc, ys);
  json j = base(kCurvatureSchema, spec, x);
  j["y"] = j2(y);
  j["k_choice"] = to_string(kc);
  j["M"] = j2(cv.M);
  j["M_upper"] = j2(cv.Mn);
  j["E"] = j2(cv.E);
  j["rho"] = j2(cv.rho);
  j["rho_lower"] = j2(cv.rho_low);
  j["f1"] = num(cv.f1);
  j["riemann"] = {{"L", j2(rc.L)}, {"Lbar", j2(rc.Lbar)}, {"Lbar_lower", j2(rc.Lbar_low)},
                  {"lbar_residual", num(rc.lbar_residual)}, {"R", num(riemann_curvature(spec, x).R)}};
  j["factorization"] = {{"max_residual", num(fr.max_residual)}, {"max_Lbar", num(fr.max_lbar)},
                        {"relative", num(fr.relative)}, {"max_f1_minus_cT", num(fr.max_f1_cT)},
                        {"samples", ys.size()}};
  const bool ok = finite_all(j) && fr.max_residual <= 1e-6 * std::max(fr.max_lbar, 1e-300) + 1e-300 &&
                  (spec.kind != MetricKind::Finsleroid || fr.max_f1_cT <= 1e-10);
  j["checks"] = {{"factorization", ok}};
  emit(a, j);
  return ok ? 0 : 1;
}

json read_json_arg(const std::string& s) {
  if (!s.empty() && (s.front() == '{' || s.front() == '[')) return json::parse(s);
  std::ifstream in(s);
  if (!in) throw SchemaError("cannot read " + s);
  return json::parse(in);
}

int cmd_transport(const Args& a, const ManifoldSpec& spec, const KChoice& kc) {
  if (a.curve.empty()) throw SchemaError("transport needs --curve (JSON text or file)");
  const json cj = read_json_arg(a.curve);
  const Curve curve = Curve::from_json(cj.contains("curve") ? cj.at("curve") : cj);
  std::vector<Vec2d> ys;
  if (!a.vectors.empty()) {
    ys = parse_pairs(a.vectors);
  } else if (cj.contains("vectors")) {
    for (const auto& v : cj.at("vectors")) ys.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  } else {
    ys.push_back(parse_pair(a.y, "--y"));
  }
  TransportOptions opt;
  const TransportResult r =
      ys.size() >= 2 ? transport_report(spec, curve, ys, kc, a.steps, opt) : horizontal_lift(spec, curve, ys, kc, a.steps, opt);

  json s;
  s["schema"] = kTransportSchema;
  s["metric_kind"] = to_string(spec.kind);
  s["k_choice"] = to_string(kc);
  s["curve"] = curve.to_json();
  s["steps"] = r.stats.steps;
  s["rhs_evaluations"] = r.stats.rhs_evaluations;
  s["vectors"] = json::array();
  for (const Vec2d& v : ys) s["vectors"].push_back(j2(v));
  s["y_final"] = json::array();
  for (const Vec2d& v : r.y_final) s["y_final"].push_back(j2(v));
  s["F_drift"] = r.F_drift;
  s["max_F_drift"] = num(r.max_F_drift);
  s["theta_pair_drift"] = num(r.theta_pair_drift);
  s["inner_product_drift"] = num(r.inner_product_drift);
  s["raw_inner_product_change"] = num(r.raw_inner_product_change);
  if (ys.size() >= 2) {
    s["order"] = num(r.order);
    s["order_steps"] = r.order_steps;
    s["order_differences"] = {num(r.order_differences[0]), num(r.order_differences[1])};
  }
  const bool ok = r.max_F_drift <= 1e-7 && r.theta_pair_drift <= 1e-7 && r.inner_product_drift <= 1e-7;
  s["checks"] = {{"drift_within_1e-7", ok}};

  std::ofstream f;
  std::ostream& os = output(a, f);
  if (a.format == "json") {
    s["samples"] = json::array();
    for (const auto& smp : r.samples) {
      json e{{"t", smp.t}, {"x", j2(smp.x)}, {"y", json::array()}, {"F", smp.F}, {"theta", smp.theta}};
      for (const Vec2d& v : smp.y) e["y"].push_back(j2(v));
      s["samples"].push_back(std::move(e));
    }
    os << std::setprecision(17) << s.dump(2) << "\n";
  } else {
    os << std::setprecision(17) << "vector,t,x1,x2,y1,y2,F,theta\n";
    for (std::size_t v = 0; v < ys.size(); ++v)
      for (const auto& smp : r.samples)
        os << v << ',' << smp.t << ',' << smp.x[0] << ',' << smp.x[1] << ',' << smp.y[v][0] << ',' << smp.y[v][1]
           << ',' << smp.F[v] << ',' << smp.theta[v] << '\n';
    if (!a.summary.empty()) {
      std::ofstream sf(a.summary);
      sf << std::setprecision(17) << s.dump(2) << "\n";
    } else {
      std::cerr << std::setprecision(17) << s.dump(2) << "\n";
    }
  }
  return ok ? 0 : 1;
}

int cmd_verify(const Args& a, const ManifoldSpec& spec, const KChoice& kc) {
  SuiteOptions opt;
  opt.k = kc;
  opt.only = a.only;
  for (const std::string& id : a.only)
    if (!find_identity(id)) throw SchemaError("unknown identity id '" + id + "'");
  const VerifyReport rep = run_identity_suite(spec, a.seed, a.samples, opt);
  std::ofstream f;
  std::ostream& os = output(a, f);
  if (a.format == "csv") {
    os << std::setprecision(6) << "id,status,max_residual,tolerance,tolerance_class,evaluated,skipped\n";
    for (const auto& e : rep.entries)
      os << e.id << ',' << e.status << ',' << e.max_residual << ',' << e.tolerance << ',' << e.tolerance_class << ','
         << e.evaluated << ',' << e.skipped << '\n';
  } else {
    os << std::setprecision(17) << rep.to_json().dump(2) << "\n";
  }
  int failed = 0;
  for (const auto& e : rep.entries)
    if (e.status == "fail" || e.status == "error") {
      ++failed;
      std::cerr << "FAIL " << e.id << " residual " << e.max_residual << " tolerance " << e.tolerance << " "
                << e.message << "\n";
    }
  std::cerr << rep.entries.size() << " identities, " << failed << " failing, " << rep.seconds << " s\n";
  return rep.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-dimensional Finsler connection and curvature toolkit"};
  app.require_subcommand(1);
  Args a;
  auto common = [&](CLI::App* c, bool point) {
    c->add_option("--spec", a.spec_path, "manifold JSON")->required()->check(CLI::ExistingFile);
    c->add_option("--format", a.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    c->add_option("--out", a.out, "output file (default stdout)");
    c->add_option("--k", a.k, "frame, frame(+1), zero or user:<k1>;<k2>");
    if (point) {
      c->add_option("--x", a.x, "base point a,b");
      c->add_option("--y", a.y, "tangent vector a,b");
    }
  };
  auto* eval = app.add_subcommand("eval", "metric data at (x, y)");
  common(eval, true);
  auto* angle = app.add_subcommand("angle", "angle, bounds and sector area");
  common(angle, true);
  angle->add_option("--y2", a.y2, "second vector for the two-vector angle and sector area");
  auto* ind = app.add_subcommand("indicatrix", "sweep of the indicatrix F = 1");
  common(ind, true);
  ind->add_option("--samples", a.samples, "number of points")->default_val(72);
  auto* conn = app.add_subcommand("connection", "N, D and their y-derivatives at (x, y)");
  common(conn, true);
  auto* curv = app.add_subcommand("curvature", "curvature tensors at (x, y) and the factorization residual");
  common(curv, true);
  curv->add_option("--seed", a.seed, "seed for the factorization sample");
  auto* tr = app.add_subcommand("transport", "horizontal transport along a curve");
  common(tr, true);
  tr->add_option("--curve", a.curve, "curve JSON text or file: {\"x1\",\"x2\"} in t or {\"polyline\"}")->required();
  tr->add_option("--vectors", a.vectors, "initial vectors 'a,b;c,d'");
  tr->add_option("--steps", a.steps, "RK4 steps")->default_val(10000);
  tr->add_option("--summary", a.summary, "file for the JSON summary in csv mode (default stderr)");
  auto* ver = app.add_subcommand("verify", "run the identity catalog");
  common(ver, false);
  ver->add_option("--seed", a.seed, "RNG seed")->default_val(42);
  ver->add_option("--samples", a.samples, "random (x, y) samples")->default_val(200);
  ver->add_option("--only", a.only, "restrict to these identity ids");

  CLI11_PARSE(app, argc, argv);

  try {
    const ManifoldSpec spec = load_manifold_file(a.spec_path);
    const KChoice kc = k_choice_from_string(a.k);
    if (*eval) return cmd_eval(a, spec);
    if (*angle) return cmd_angle(a, spec);
    if (*ind) return cmd_indicatrix(a, spec);
    if (*conn) return cmd_connection(a, spec, kc);
    if (*curv) return cmd_curvature(a, spec, kc);
    if (*tr) return cmd_transport(a, spec, kc);
    if (*ver) return cmd_verify(a, spec, kc);
  } catch (const std::exception& e) {
    json err{{"schema", kErrorSchema}, {"error", e.what()}};
    std::cerr << err.dump() << "\n";
    return 2;
  }
  return 2;
}
