// Python module: thin wrappers returning JSON text, decoded on the Python side.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "finsler2d/harness.hpp"
#include "finsler2d/transport.hpp"

namespace py = pybind11;
using namespace finsler2d;
using nlohmann::json;

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
json j2(const Vec2d& v) { return {num(v[0]), num(v[1])}; }
json j2(const Mat2d& m) { return {j2(m[0]), j2(m[1])}; }
json j2(const Arr3d& a) { return {j2(a[0]), j2(a[1])}; }
json j2(const Arr4d& a) { return {j2(a[0]), j2(a[1])}; }

std::string metric(const ManifoldSpec& s, const Vec2d& x, const Vec2d& y) {
  const MetricJet<double> m = metric_at(s, x, y);
  json j{{"F", num(m.F)},         {"S", num(m.S)},         {"b", num(m.b)},           {"n", num(m.n_y)},
         {"q", num(m.q)},         {"g", j2(m.g)},          {"g_inverse", j2(m.g_up)}, {"l_lower", j2(m.l)},
         {"l_upper", j2(m.l_up)}, {"y_lower", j2(m.y_lo)}, {"m_lower", j2(m.m)},      {"m_upper", j2(m.m_up)},
         {"I", num(m.I)},         {"T", num(m.Tf)},        {"det_ratio", num(m.det_ratio)}};
  return j.dump();
}

std::string bounds(const ManifoldSpec& s, const Vec2d& x) {
  const AngleBounds b = theta_bounds(s, x);
  return json{{"theta_I", b.theta_I}, {"theta_II", b.theta_II}, {"theta_max", b.theta_max}}.dump();
}

std::string indicatrix(const ManifoldSpec& s, const Vec2d& x, int count) {
  json j = json::array();
  for (const auto& e : indicatrix_sweep(s, x, count))
    j.push_back({{"phi", e.phi}, {"y", j2(e.y)}, {"theta", e.theta}, {"F", e.F}});
  return j.dump();
}

std::string connection(const ManifoldSpec& s, const Vec2d& x, const Vec2d& y, const std::string& k) {
  const ConnectionJet c = derivative_coeffs(s, x, y, k_choice_from_string(k));
  return json{{"N", j2(c.N)}, {"D", j2(c.D)}, {"N_y", j2(c.Nnm)}, {"N_yy", j2(c.Nnmi)},
              {"k", j2(c.k)}, {"P", j2(c.P)}, {"I", num(c.I)}}
      .dump();
}

std::string curvature(const ManifoldSpec& s, const Vec2d& x, const Vec2d& y, const std::string& k) {
  const KChoice kc = k_choice_from_string(k);
  const CurvatureJet c = curvature_closed(s, x, y, kc);
  const RiemannCounterpart r = riemann_counterpart(s, x, kc);
  return json{{"M", j2(c.M)},         {"M_upper", j2(c.Mn)},  {"E", j2(c.E)},
              {"rho", j2(c.rho)},     {"rho_lower", j2(c.rho_low)}, {"f1", num(c.f1)},
              {"Lbar_lower", j2(r.Lbar_low)}, {"lbar_residual", num(r.lbar_residual)},
              {"R", num(riemann_curvature(s, x).R)}}
      .dump();
}

std::string transport(const ManifoldSpec& s, const std::string& curve_json, const std::vector<Vec2d>& ys, int steps,
                      const std::string& k, bool report) {
  const Curve curve = Curve::from_json(json::parse(curve_json));
  const KChoice kc = k_choice_from_string(k);
  TransportOptions opt;
  const TransportResult r = report ? transport_report(s, curve, ys, kc, steps, opt)
                                   : horizontal_lift(s, curve, ys, kc, steps, opt);
  json j;
  j["y_final"] = json::array();
  for (const Vec2d& v : r.y_final) j["y_final"].push_back(j2(v));
  j["F_drift"] = r.F_drift;
  j["max_F_drift"] = num(r.max_F_drift);
  j["theta_pair_drift"] = num(r.theta_pair_drift);
  j["inner_product_drift"] = num(r.inner_product_drift);
  j["raw_inner_product_change"] = num(r.raw_inner_product_change);
  j["order"] = num(r.order);
  j["steps"] = r.stats.steps;
  j["samples"] = json::array();
  for (const auto& smp : r.samples) {
    json e{{"t", smp.t}, {"x", j2(smp.x)}, {"y", json::array()}, {"F", smp.F}, {"theta", smp.theta}};
    for (const Vec2d& v : smp.y) e["y"].push_back(j2(v));
    j["samples"].push_back(std::move(e));
  }
  return j.dump();
}

std::string verify(const ManifoldSpec& s, std::uint64_t seed, int samples, const std::string& k,
                   const std::vector<std::string>& only) {
  SuiteOptions opt;
  opt.k = k_choice_from_string(k);
  opt.only = only;
  return run_identity_suite(s, seed, samples, opt).to_json().dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "finsler2d core";
  static py::exception<Error> exc(m, "Finsler2dError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc, e.what());
    } catch (const nlohmann::json::exception& e) {
      py::set_error(exc, e.what());
    }
  });

  py::class_<ManifoldSpec>(m, "Manifold")
      .def_static("from_file", [](const std::string& p) { return load_manifold_file(p); })
      .def_static("from_json", [](const std::string& t) { return load_manifold_text(t); })
      .def_property_readonly("kind", [](const ManifoldSpec& s) { return to_string(s.kind); })
      .def("to_json", [](const ManifoldSpec& s) { return manifold_to_json(s).dump(); });

  m.def("metric", &metric, py::arg("spec"), py::arg("x"), py::arg("y"));
  m.def("theta", [](const ManifoldSpec& s, const Vec2d& x, const Vec2d& y) { return theta(s, x, y); });
  m.def("theta_bounds", &bounds);
  m.def("sector_area", [](const ManifoldSpec& s, const Vec2d& x, const Vec2d& a, const Vec2d& b) {
    return sector_area(s, x, a, b);
  });
  m.def("indicatrix", &indicatrix, py::arg("spec"), py::arg("x"), py::arg("count") = 72);
  m.def("connection", &connection, py::arg("spec"), py::arg("x"), py::arg("y"), py::arg("k") = "frame");
  m.def("curvature", &curvature, py::arg("spec"), py::arg("x"), py::arg("y"), py::arg("k") = "frame");
  m.def("transport", &transport, py::arg("spec"), py::arg("curve"), py::arg("vectors"), py::arg("steps"),
        py::arg("k") = "frame", py::arg("report") = false);
  m.def("verify", &verify, py::arg("spec"), py::arg("seed") = 42, py::arg("samples") = 200, py::arg("k") = "frame",
        py::arg("only") = std::vector<std::string>{});
  m.def("identity_ids", [] {
    std::vector<std::string> ids;
    for (const auto& r : identity_catalog()) ids.push_back(r.id);
    return ids;
  });
}
