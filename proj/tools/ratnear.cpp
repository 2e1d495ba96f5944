// ratnear command-line front end. Reports are JSON on stdout, tables CSV.
#include "ratnear/counting.hpp"
#include "ratnear/curvature.hpp"
#include "ratnear/error.hpp"
#include "ratnear/harness.hpp"
#include "ratnear/kernels.hpp"
#include "ratnear/legendre.hpp"
#include "ratnear/manifold_io.hpp"
#include "ratnear/matfam.hpp"
#include "ratnear/oscillatory.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace ratnear;
using nlohmann::json;

namespace {

constexpr int kExitError = 1;
constexpr int kExitRefusal = 2;
constexpr int kExitBudget = 3;

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

json vec_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vec_from(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw ParseError("empty list: " + text);
  return out;
}

json matrix_json(const IntMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

struct VerifyArgs {
  std::string manifold;
  int t_grid = 16;
  double x_radius = -1;
  bool no_localize = false;
};

int run_verify(const VerifyArgs& a) {
  const ManifoldChart chart = load_chart(a.manifold);
  CurvatureReport rep = verify_condition1(chart, a.t_grid, a.x_radius > 0 ? a.x_radius : chart.eps0());
  if (!rep.condition1_holds) {
    print(to_json(rep));
    std::cerr << "curvature condition fails\n";
    return kExitRefusal;
  }
  if (!a.no_localize) rep = compute_localization(chart, rep);
  print(to_json(rep));
  return 0;
}

struct SelbergArgs {
  double delta = 0.25;
  int degree = 8;
  std::string csv;
  int samples = 1001;
};

int run_selberg(const SelbergArgs& a) {
  const SelbergPair p = selberg_pair(a.delta, a.degree);
  const SandwichReport s = check_sandwich(p, selberg_check_grid(a.delta, a.degree));
  json coeffs = json::array();
  for (int j = 0; j <= a.degree; ++j) {
    coeffs.push_back({{"j", j}, {"plus", p.plus()[j].real()}, {"minus", p.minus()[j].real()}, {"bound", p.bounds()[j]}});
  }
  print({{"delta", a.delta},
         {"degree", a.degree},
         {"plus_0", p.plus()[0].real()},
         {"minus_0", p.minus()[0].real()},
         {"sandwich_pass", s.pass},
         {"worst_lower_violation", s.worst_lower_violation},
         {"worst_upper_violation", s.worst_upper_violation},
         {"grid_points", s.points},
         {"coefficients", coeffs}});
  if (!a.csv.empty()) {
    std::ofstream out(a.csv);
    if (!out) throw Error("cannot write " + a.csv);
    out << "theta,S_minus,chi,S_plus\n";
    char buf[128];
    for (int i = 0; i < a.samples; ++i) {
      const double th = -0.5 + static_cast<double>(i) / (a.samples - 1);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", th, p.minus_at(th), interval_indicator(a.delta, th),
                    p.plus_at(th));
      out << buf;
    }
  }
  return s.pass ? 0 : kExitError;
}

struct LegendreArgs {
  std::string manifold;
  int map_index = 1;
  std::size_t samples = 1000;
  double radius = -1;
};

int run_legendre(const LegendreArgs& a) {
  const ManifoldChart chart = load_chart(a.manifold);
  if (a.map_index < 1 || a.map_index > chart.R()) throw DomainError("map index out of range");
  Box box = chart.domain();
  if (a.radius > 0) box.radius = a.radius;
  const LegendreChart lc(chart.map(a.map_index - 1), box);
  const RoundTripStats rt = round_trip(lc, a.samples);
  const BiLipschitzReport bl = bilipschitz_ratios(lc, a.samples);
  print({{"map_index", a.map_index},
         {"radius", box.radius},
         {"image_bound", lc.image_bound()},
         {"min_abs_det", lc.min_abs_det()},
         {"round_trip",
          {{"samples", rt.samples},
           {"failures", rt.failures},
           {"max_error", rt.max_error},
           {"mean_error", rt.mean_error},
           {"max_residual", rt.max_residual}}},
         {"bilipschitz",
          {{"pairs", bl.pairs}, {"min_ratio", bl.min_ratio}, {"max_ratio", bl.max_ratio}, {"bounded", bl.bounded}}}});
  return rt.failures == 0 ? 0 : kExitError;
}

struct PhaseArgs {
  std::string manifold;
  std::string lambdas = "100,200,400";
  std::vector<long long> j;
  std::vector<long long> k;
  double weight_radius = -1;
  double tolerance = 1e-10;
};

int run_phase(const PhaseArgs& a) {
  const ManifoldChart chart = load_chart(a.manifold);
  CurvatureReport rep = verify_condition1(chart, 16, chart.eps0());
  if (!rep.condition1_holds) throw CurvatureRefusal("curvature condition fails on this chart");
  std::vector<long long> j = a.j;
  if (j.empty()) {
    j.assign(static_cast<std::size_t>(chart.R()), 0);
    j[0] = 1;
  }
  std::vector<long long> k = a.k;
  if (k.empty()) k.assign(static_cast<std::size_t>(chart.n()), 0);
  const double radius = a.weight_radius > 0 ? a.weight_radius : chart.eps0() / 2;
  QuadratureOptions opts;
  opts.tolerance = a.tolerance;
  std::cout << "lambda,abs_I,leading,rel_err\n";
  char buf[160];
  for (double lambda : parse_list(a.lambdas)) {
    const auto lam = static_cast<long long>(lambda);
    if (lam % j[0] != 0) throw DomainError("lambda must be a multiple of j_1");
    OscillatoryIntegralSpec spec{chart, make_bump(chart.x0(), radius), j, k, lam / j[0]};
    const StationaryPhaseResult r = stationary_phase_leading(spec, rep, opts);
    std::snprintf(buf, sizeof buf, "%lld,%.12g,%.12g,%.6g\n", lam, std::abs(r.quadrature), std::abs(r.leading),
                  r.relative_error);
    std::cout << buf;
  }
  return 0;
}

struct CountArgs {
  std::string manifold;
  long long Q = 10;
  std::string delta = "0";
  bool on = false;
  std::vector<double> center;
  double radius = 0;
  std::string csv;
  int threads = 0;
  double epsilon = 0.05;
};

int run_count(const CountArgs& a) {
  const ManifoldChart chart = load_chart(a.manifold);
  CountOptions opts;
  opts.threads = a.threads;
  CountResult r;
  if (a.on) {
    r = count_on(chart, a.Q, opts);
  } else {
    const Rational delta = DeltaRule::parse(a.delta, a.epsilon).at(a.Q);
    if (!a.center.empty()) {
      r = count_weighted(chart, make_bump(vec_from(a.center), a.radius), a.Q, delta, opts);
    } else {
      r = count_near(chart, a.Q, delta, opts);
    }
  }
  print(to_json(r));
  if (!a.csv.empty()) append_csv(resolve_output(a.csv), {r});
  return 0;
}

struct MatricesArgs {
  int R = 2;
  std::string emit;
  std::string eps0 = "1/2";
};

int run_matrices(const MatricesArgs& a) {
  const MatrixFamily fam = suslin_family(a.R);
  const PencilCertificate cert = pencil_certificate(fam);
  json mats = json::array();
  for (const IntMatrix& m : fam.matrices) mats.push_back(matrix_json(m));
  json out{{"kind", to_string(fam.kind)},
           {"n", fam.n},
           {"R", fam.R()},
           {"radon_hurwitz", radon_hurwitz(fam.n)},
           {"certificate",
            {{"holds", cert.holds}, {"exact", cert.exact}, {"samples", cert.samples}, {"min_abs_det", cert.min_abs_det}}},
           {"matrices", mats}};
  if (!a.emit.empty()) {
    const ManifoldChart chart = chart_from_family(fam, parse_rational(a.eps0));
    const std::filesystem::path target = a.emit;
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    save_chart(chart, target);
    out["manifold"] = chart_to_json(chart);
    out["manifold_file"] = a.emit;
  }
  print(out);
  return 0;
}

int run_experiment_cmd(const std::string& path) {
  const RunRecord rec = run_experiment(load_config(path));
  json rows = json::array();
  for (const CountResult& r : rec.rows) rows.push_back(to_json(r));
  print({{"n", rec.n},
         {"R", rec.R},
         {"mode", to_string(rec.mode)},
         {"curvature", rec.curvature},
         {"fitted_c", rec.fitted_c},
         {"fitted_ratios", rec.fitted_ratios},
         {"rows", rows}});
  return 0;
}

struct ReportArgs {
  std::string run;
  bool envelope = false;
  bool growth = false;
};

int run_report(const ReportArgs& a) {
  const RunRecord rec = load_record(a.run);
  json out{{"n", rec.n}, {"R", rec.R}, {"mode", to_string(rec.mode)}, {"fitted_c", rec.fitted_c}};
  json ratios = json::array();
  for (const CountResult& r : rec.rows) ratios.push_back({{"Q", r.Q}, {"delta", r.delta}, {"ratio", r.ratio}});
  out["ratios"] = ratios;
  bool ok = true;
  if (a.envelope) {
    const EnvelopeFit fit = fit_error_envelope(rec);
    out["envelope"] = to_json(fit);
    ok = ok && fit.bounded;
  }
  if (a.growth) {
    std::vector<long long> Q;
    for (const CountResult& r : rec.rows) Q.push_back(r.Q);
    DimensionGrowthReport g;
    if (rec.mode == ExperimentMode::On) {
      std::vector<double> counts;
      for (const CountResult& r : rec.rows) counts.push_back(r.count);
      g = dimension_growth_from_counts(rec.n, rec.R, Q, counts);
    } else {
      g = dimension_growth_check(chart_from_json(rec.config.at("manifold")), Q);
    }
    out["dimension_growth"] = to_json(g);
    ok = ok && g.pass;
  }
  print(out);
  return ok ? 0 : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ratnear: rational points near curved manifolds"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify-curvature", "check the Hessian-pencil condition and localization radii");
  verify->add_option("--manifold", va.manifold)->required();
  verify->add_option("--t-grid", va.t_grid, "grid points per free coordinate on the t-cube boundary");
  verify->add_option("--x-radius", va.x_radius, "radius of the x box (default eps0)");
  verify->add_flag("--no-localize", va.no_localize);

  SelbergArgs sa;
  auto* selberg = app.add_subcommand("selberg", "Selberg majorant and minorant of an interval indicator");
  selberg->add_option("--delta", sa.delta)->required();
  selberg->add_option("--degree", sa.degree)->required();
  selberg->add_option("--emit-csv", sa.csv, "write theta,S-,chi,S+ samples");
  selberg->add_option("--samples", sa.samples)->check(CLI::Range(2, 10000000));

  LegendreArgs la;
  auto* legendre = app.add_subcommand("legendre-check", "round trip of the gradient inversion for one map");
  legendre->add_option("--manifold", la.manifold)->required();
  legendre->add_option("--map-index", la.map_index, "1-based")->required();
  legendre->add_option("--samples", la.samples);
  legendre->add_option("--radius", la.radius);

  PhaseArgs pa;
  auto* phase = app.add_subcommand("phase-check", "quadrature against the leading stationary-phase term");
  phase->add_option("--manifold", pa.manifold)->required();
  phase->add_option("--lambda-list", pa.lambdas, "comma separated");
  phase->add_option("--j", pa.j)->delimiter(',');
  phase->add_option("--k", pa.k)->delimiter(',');
  phase->add_option("--weight-radius", pa.weight_radius);
  phase->add_option("--tolerance", pa.tolerance);

  CountArgs ca;
  auto* countc = app.add_subcommand("count", "count rational points near the manifold");
  countc->add_option("--manifold", ca.manifold)->required();
  countc->add_option("--Q", ca.Q)->required()->check(CLI::PositiveNumber);
  countc->add_option("--delta", ca.delta, "literal, Q^-a or Q^-a+eps");
  countc->add_option("--epsilon", ca.epsilon);
  countc->add_flag("--on", ca.on, "count points on the manifold (delta = 0, exact)");
  countc->add_option("--weight-center", ca.center)->delimiter(',');
  countc->add_option("--weight-radius", ca.radius);
  countc->add_option("--csv", ca.csv, "append a row to this file");
  countc->add_option("--threads", ca.threads);

  MatricesArgs ma;
  auto* matrices = app.add_subcommand("matrices", "Suslin matrix families");
  matrices->add_option("--suslin", ma.R)->required()->check(CLI::Range(1, 11));
  matrices->add_option("--emit-manifold", ma.emit);
  matrices->add_option("--eps0", ma.eps0);

  std::string config;
  auto* experiment = app.add_subcommand("experiment", "run a Q ladder from a config file");
  experiment->add_option("--config", config)->required();

  ReportArgs ra;
  auto* report = app.add_subcommand("report", "summaries and fits of a persisted run");
  report->add_option("--run", ra.run)->required();
  report->add_flag("--fit-envelope", ra.envelope);
  report->add_flag("--dimension-growth", ra.growth);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  try {
    if (*verify) return run_verify(va);
    if (*selberg) return run_selberg(sa);
    if (*legendre) return run_legendre(la);
    if (*phase) return run_phase(pa);
    if (*countc) return run_count(ca);
    if (*matrices) return run_matrices(ma);
    if (*experiment) return run_experiment_cmd(config);
    if (*report) return run_report(ra);
  } catch (const CurvatureRefusal& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitRefusal;
  } catch (const BudgetExceededError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
