// Python bindings. Structured results cross the boundary as JSON text and are
// decoded in the pure-Python layer.
#include "ratnear/counting.hpp"
#include "ratnear/curvature.hpp"
#include "ratnear/error.hpp"
#include "ratnear/harness.hpp"
#include "ratnear/kernels.hpp"
#include "ratnear/legendre.hpp"
#include "ratnear/manifold_io.hpp"
#include "ratnear/matfam.hpp"
#include "ratnear/oscillatory.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ratnear;
using nlohmann::json;

namespace {

Rational delta_at(const std::string& rule, long long Q, double epsilon) { return DeltaRule::parse(rule, epsilon).at(Q); }

CountOptions options(int threads, std::optional<double> scan_cap) {
  CountOptions o;
  o.threads = threads;
  if (scan_cap) o.scan_cap = *scan_cap;
  return o;
}

}  // namespace

PYBIND11_MODULE(_ratnear, m) {
  m.doc() = "rational points near curved manifolds";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "RatnearError");
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<NonPolynomialError>(m, "NonPolynomialError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<OutsideImageError>(m, "OutsideImageError", base.ptr());
  py::register_exception<IllConditionedError>(m, "IllConditionedError", base.ptr());
  py::register_exception<BudgetExceededError>(m, "BudgetExceededError", base.ptr());
  py::register_exception<CurvatureRefusal>(m, "CurvatureRefusal", base.ptr());
  py::register_exception<CertificateFailure>(m, "CertificateFailure", base.ptr());

  py::class_<ManifoldChart>(m, "ManifoldChart")
      .def(py::init([](const std::vector<std::string>& maps, int n, const std::string& eps0,
                       std::optional<std::vector<std::string>> x0) {
             std::vector<SmoothMap> f;
             for (const std::string& s : maps) f.push_back(SmoothMap::parse(s, n));
             std::vector<Rational> base_point;
             if (x0) {
               for (const std::string& s : *x0) base_point.push_back(parse_rational(s));
             } else {
               base_point.assign(static_cast<std::size_t>(n), Rational(0));
             }
             return ManifoldChart(std::move(base_point), parse_rational(eps0), std::move(f));
           }),
           py::arg("maps"), py::arg("n"), py::arg("eps0") = "1/2", py::arg("x0") = py::none())
      .def_property_readonly("n", &ManifoldChart::n)
      .def_property_readonly("R", &ManifoldChart::R)
      .def_property_readonly("eps0", &ManifoldChart::eps0)
      .def_property_readonly("x0", &ManifoldChart::x0)
      .def("value", [](const ManifoldChart& c, int r, const Vector& x) { return c.map(r).value(x); })
      .def("hessian", [](const ManifoldChart& c, int r, const Vector& x) { return c.map(r).hessian(x); })
      .def("to_json", [](const ManifoldChart& c) { return chart_to_json(c).dump(); })
      .def("__repr__", [](const ManifoldChart& c) { return "<ManifoldChart " + chart_to_json(c).dump() + ">"; });

  m.def("chart_from_json", [](const std::string& text) { return chart_from_json(json::parse(text)); });
  m.def("load_chart", [](const std::string& path) { return load_chart(path); });

  m.def(
      "verify_condition1",
      [](const ManifoldChart& c, int t_grid, std::optional<double> x_radius, bool localize) {
        CurvatureReport r = verify_condition1(c, t_grid, x_radius.value_or(c.eps0()));
        if (localize && r.condition1_holds) r = compute_localization(c, r);
        return to_json(r).dump();
      },
      py::arg("chart"), py::arg("t_grid") = 16, py::arg("x_radius") = py::none(), py::arg("localize") = true);

  py::class_<SelbergPair>(m, "SelbergPair")
      .def_property_readonly("delta", &SelbergPair::delta)
      .def_property_readonly("degree", &SelbergPair::degree)
      .def_property_readonly("plus_coeffs", [](const SelbergPair& p) { return p.plus().coeffs; })
      .def_property_readonly("minus_coeffs", [](const SelbergPair& p) { return p.minus().coeffs; })
      .def_property_readonly("bounds", &SelbergPair::bounds)
      .def("plus_at", &SelbergPair::plus_at)
      .def("minus_at", &SelbergPair::minus_at)
      .def("sandwich", [](const SelbergPair& p) {
        const SandwichReport s = check_sandwich(p, selberg_check_grid(p.delta(), p.degree()));
        return py::dict(py::arg("pass") = s.pass, py::arg("worst_lower_violation") = s.worst_lower_violation,
                        py::arg("worst_upper_violation") = s.worst_upper_violation, py::arg("points") = s.points);
      });
  m.def("selberg_pair", &selberg_pair, py::arg("delta"), py::arg("degree"));
  m.def("fejer_eval", &fejer_eval, py::arg("D"), py::arg("theta"));
  m.def("interval_indicator", &interval_indicator, py::arg("delta"), py::arg("theta"));

  m.def(
      "legendre_round_trip",
      [](const ManifoldChart& c, int map_index, std::size_t samples, std::optional<double> radius) {
        Box box = c.domain();
        if (radius) box.radius = *radius;
        const LegendreChart lc(c.map(map_index), box);
        const RoundTripStats s = round_trip(lc, samples);
        return py::dict(py::arg("samples") = s.samples, py::arg("failures") = s.failures,
                        py::arg("max_error") = s.max_error, py::arg("mean_error") = s.mean_error,
                        py::arg("max_residual") = s.max_residual);
      },
      py::arg("chart"), py::arg("map_index") = 0, py::arg("samples") = 1000, py::arg("radius") = py::none());
  m.def(
      "invert_gradient",
      [](const ManifoldChart& c, int map_index, const Vector& y) {
        return LegendreChart(c.map(map_index), c.domain()).invert_gradient(y);
      },
      py::arg("chart"), py::arg("map_index"), py::arg("y"));

  m.def(
      "stationary_phase",
      [](const ManifoldChart& c, long long q, std::vector<long long> j, std::vector<long long> k,
         double weight_radius) {
        const CurvatureReport cur = verify_condition1(c, 16, c.eps0());
        const StationaryPhaseResult r = stationary_phase_leading({c, make_bump(c.x0(), weight_radius), j, k, q}, cur);
        return py::dict(py::arg("quadrature") = r.quadrature, py::arg("leading") = r.leading,
                        py::arg("relative_error") = r.relative_error, py::arg("signature") = r.signature,
                        py::arg("delta") = r.delta, py::arg("lambda") = r.lambda, py::arg("phase") = r.phase,
                        py::arg("stationary_point") = r.stationary_point);
      },
      py::arg("chart"), py::arg("q"), py::arg("j"), py::arg("k"), py::arg("weight_radius"));
  m.def(
      "oscillatory_integral",
      [](const ManifoldChart& c, long long q, std::vector<long long> j, std::vector<long long> k,
         const Vector& center, double radius) {
        return quad_integral({c, make_bump(center, radius), j, k, q});
      },
      py::arg("chart"), py::arg("q"), py::arg("j"), py::arg("k"), py::arg("center"), py::arg("radius"));

  m.def(
      "count_near",
      [](const ManifoldChart& c, long long Q, const std::string& delta, std::optional<Vector> center, double radius,
         int threads, double epsilon, std::optional<double> scan_cap) {
        const Rational d = delta_at(delta, Q, epsilon);
        const CountOptions o = options(threads, scan_cap);
        const CountResult r = center ? count_weighted(c, make_bump(*center, radius), Q, d, o) : count_near(c, Q, d, o);
        return to_json(r).dump();
      },
      py::arg("chart"), py::arg("Q"), py::arg("delta"), py::arg("weight_center") = py::none(),
      py::arg("weight_radius") = 0.0, py::arg("threads") = 0, py::arg("epsilon") = 0.05,
      py::arg("scan_cap") = py::none());
  m.def(
      "count_on",
      [](const ManifoldChart& c, long long Q, int threads) { return to_json(count_on(c, Q, options(threads, {}))).dump(); },
      py::arg("chart"), py::arg("Q"), py::arg("threads") = 0);

  m.def(
      "suslin_family",
      [](int R) {
        std::vector<IntMatrix> out = suslin_family(R).matrices;
        return out;
      },
      py::arg("R"));
  m.def(
      "pencil_certificate",
      [](const std::vector<IntMatrix>& matrices) {
        const PencilCertificate c = pencil_certificate(user_family(matrices));
        return py::dict(py::arg("holds") = c.holds, py::arg("exact") = c.exact, py::arg("samples") = c.samples,
                        py::arg("min_abs_det") = c.min_abs_det);
      },
      py::arg("matrices"));
  m.def(
      "pencil_determinant",
      [](const std::vector<IntMatrix>& matrices, const std::vector<long long>& t) {
        std::vector<BigInt> tb(t.begin(), t.end());
        return determinant(pencil_exact(user_family(matrices), tb)).str();
      },
      py::arg("matrices"), py::arg("t"));
  m.def("radon_hurwitz", &radon_hurwitz, py::arg("n"));
  m.def(
      "tangent_fields", [](int R, const Vector& x) { return tangent_fields(suslin_family(R), x); }, py::arg("R"),
      py::arg("x"));
  m.def(
      "chart_from_suslin", [](int R, const std::string& eps0) { return chart_from_family(suslin_family(R), parse_rational(eps0)); },
      py::arg("R"), py::arg("eps0") = "1/2");

  m.def(
      "run_experiment",
      [](const std::string& config_json, const std::string& base_dir) {
        return record_to_json(run_experiment(config_from_json(json::parse(config_json), base_dir))).dump();
      },
      py::arg("config_json"), py::arg("base_dir") = ".");
  m.def(
      "run_experiment_file", [](const std::string& path) { return record_to_json(run_experiment(load_config(path))).dump(); },
      py::arg("path"));
  m.def(
      "fit_error_envelope",
      [](const std::string& record_json) { return to_json(fit_error_envelope(record_from_json(json::parse(record_json)))).dump(); },
      py::arg("record_json"));
  m.def(
      "fit_synthetic_envelope",
      [](int n, int R, double A, double c, const std::vector<long long>& Q, double a) {
        return to_json(fit_error_envelope(n, R, synthetic_envelope(n, R, A, c, Q, a))).dump();
      },
      py::arg("n"), py::arg("R"), py::arg("A"), py::arg("c"), py::arg("Q"), py::arg("delta_exponent"));
  m.def("dimension_growth_bound", &dimension_growth_bound, py::arg("n"), py::arg("R"));
  m.def(
      "dimension_growth_check",
      [](const ManifoldChart& c, const std::vector<long long>& Q) { return to_json(dimension_growth_check(c, Q)).dump(); },
      py::arg("chart"), py::arg("Q"));
}
