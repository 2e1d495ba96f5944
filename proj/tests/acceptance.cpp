// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include "count_oracle.hpp"
#include "ratnear/counting.hpp"
#include "ratnear/curvature.hpp"
#include "ratnear/error.hpp"
#include "ratnear/harness.hpp"
#include "ratnear/kernels.hpp"
#include "ratnear/legendre.hpp"
#include "ratnear/manifold_io.hpp"
#include "ratnear/matfam.hpp"
#include "ratnear/oscillatory.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace ratnear;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ManifoldChart chart(int n, std::vector<std::string> maps, Rational eps0 = Rational(1, 2)) {
  std::vector<SmoothMap> f;
  for (const std::string& m : maps) f.push_back(SmoothMap::parse(m, n));
  return ManifoldChart(std::vector<Rational>(static_cast<std::size_t>(n), Rational(0)), eps0, std::move(f));
}

Outcome selberg_sandwich() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> delta_dist(0.0, 0.5);
  std::uniform_int_distribution<int> degree_dist(1, 200);
  double worst = 0, worst_mean = 0;
  bool coeff_ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    double delta = 0;
    while (delta == 0) delta = delta_dist(rng);
    if (trial == 0) delta = 0.5;
    const int J = degree_dist(rng);
    const SelbergPair p = selberg_pair(delta, J);
    const SandwichReport s = check_sandwich(p, selberg_check_grid(delta, J), 1e-12);
    worst = std::max({worst, s.worst_lower_violation, s.worst_upper_violation});
    if (!s.pass) coeff_ok = false;
    worst_mean = std::max({worst_mean, std::abs(p.plus()[0].real() - (2 * delta + 1.0 / (J + 1))),
                           std::abs(p.minus()[0].real() - (2 * delta - 1.0 / (J + 1)))});
    for (int j = 0; j <= J; ++j) {
      const double b = 1.0 / (J + 1) + std::min(2 * delta, 1.0 / (std::numbers::pi * j));
      if (std::abs(p.plus()[j]) > b || std::abs(p.minus()[j]) > b) coeff_ok = false;
    }
  }
  return {coeff_ok && worst <= 1e-12 && worst_mean <= 1e-12,
          "worst violation " + fmt("%.2e", worst) + ", mean error " + fmt("%.2e", worst_mean)};
}

Outcome fejer_majorization() {
  bool ok = true;
  std::string detail;
  for (double T : {2.0, 10.0, 100.0, 1000.0}) {
    const FejerMajorantReport r = fejer_majorizes_indicator(static_cast<int>(std::floor(T / 2)), T);
    ok = ok && r.pass && r.worst_margin >= 0;
    detail += (detail.empty() ? "" : ", ") + std::string("T=") + fmt("%g", T) + " margin " + fmt("%.3e", r.worst_margin);
  }
  return {ok, detail};
}

Outcome matrix_identities() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long long> coeff(-50, 50);
  std::size_t checked = 0;
  for (int R = 2; R <= 6; ++R) {
    const MatrixFamily f = suslin_family(R);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<long long> t(static_cast<std::size_t>(R));
      for (auto& v : t) v = coeff(rng);
      if (!square_identity_holds(f, t)) return {false, "square identity fails at R=" + std::to_string(R)};
      std::vector<BigInt> tb(t.begin(), t.end());
      BigInt s = 0;
      for (long long v : t) s += BigInt(v) * v;
      const BigInt det = determinant(pencil_exact(f, tb));
      if (det * det != boost::multiprecision::pow(s, 1u << (R - 1)))
        return {false, "determinant identity fails at R=" + std::to_string(R)};
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " exact pencils"};
}

Outcome curvature_machinery() {
  const ManifoldChart s = chart_from_family(suslin_family(2));
  const CurvatureReport good = verify_condition1(s, 16, s.eps0());
  const ManifoldChart bad_chart = chart(2, {"x1^2/2 + x2^2/2", "x1*x2"});
  const CurvatureReport bad = verify_condition1(bad_chart, 16, bad_chart.eps0());
  const double a = std::abs(bad.min_witness_t[0]);
  const double b = std::abs(bad.min_witness_t[1]);
  const bool near_diag = std::abs(a - b) <= 1e-6 && linf_norm(bad.min_witness_t) == 1.0;
  return {good.condition1_holds && std::abs(good.c1 - 1.0) <= 1e-6 && !bad.condition1_holds && near_diag,
          "c1 " + fmt("%.9f", good.c1) + ", rejected witness t=(" + fmt("%.4f", bad.min_witness_t[0]) + ", " +
              fmt("%.4f", bad.min_witness_t[1]) + ")"};
}

Outcome legendre_identities() {
  const std::vector<std::string> maps{
      "(x1^2 + x2^2 + x3^2)/2",
      "x1^2/2 + 3*x2^2/5 + 2*x3^2/3 + x1*x2/10",
      "(x1^2 - x2^2 + x3^2)/2 + x1*x3/5",
      "(x1^2 + x2^2 + x3^2)/2 + (x1^4 + x2^3*x3)/20",
      "x1^2/2 - x2^2/2 + 3*x3^2/5 + (x1^3 + x2^4)/50 + x1*x2*x3/20",
  };
  double worst_ff = 0, worst_inv = 0, worst_h = 0;
  for (const std::string& text : maps) {
    const SmoothMap f = SmoothMap::parse(text, 3);
    const LegendreChart inner(f, Box{Vector::Zero(3), 1.0});
    const LegendreChart outer(inner.conjugate(), Box{f.gradient(Vector::Zero(3)), 0.4});
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        for (int k = 0; k < 10; ++k) {
          Vector x(3);
          x << -0.2 + 0.4 * i / 9, -0.2 + 0.4 * j / 9, -0.2 + 0.4 * k / 9;
          const Vector y = f.gradient(x);
          worst_inv = std::max(worst_inv, linf_norm(inner.invert_gradient(y) - x));
          const Matrix prod = inner.hessian(y) * f.hessian(x);
          worst_h = std::max(worst_h, (prod - Matrix::Identity(3, 3)).norm());
          worst_ff = std::max(worst_ff, std::abs(outer.value(x) - f.value(x)));
        }
      }
    }
  }
  return {worst_ff <= 1e-8 && worst_inv <= 1e-8 && worst_h <= 1e-6,
          "|F**-F| " + fmt("%.2e", worst_ff) + ", |inv-id| " + fmt("%.2e", worst_inv) + ", |HH-I| " +
              fmt("%.2e", worst_h)};
}

Outcome stationary_phase() {
  const ManifoldChart c = chart(2, {"(x1^2 + x2^2)/2"});
  const CurvatureReport cur = verify_condition1(c, 8, 0.5);
  const WeightFunction w = make_bump(Vector::Zero(2), 0.5);
  std::vector<double> errs;
  for (long long lambda : {100, 200, 400}) {
    errs.push_back(stationary_phase_leading({c, w, {1}, {0, 0}, lambda}, cur).relative_error);
  }
  const double r1 = errs[0] / errs[1];
  const double r2 = errs[1] / errs[2];
  const bool ratios_ok = r1 >= 1.6 && r1 <= 2.6 && r2 >= 1.6 && r2 <= 2.6;

  const ManifoldChart lin = chart(1, {"x1/10"}, Rational(1));
  QuadratureOptions o;
  o.tolerance = 1e-16;
  const DecayReport d = nonstationary_decay({lin, make_bump(Vector::Zero(1), 1.0), {1}, {0}, 1}, {2, 3, 4, 5, 6},
                                            {16, 32, 64, 128, 256, 512, 1024}, o);
  bool decay_ok = d.gradient_bounded_below && !d.all_zero;
  for (bool p : d.ell_pass) decay_ok = decay_ok && p;
  return {ratios_ok && decay_ok, "error ratios " + fmt("%.3f", r1) + ", " + fmt("%.3f", r2) + "; decay slope " +
                                     fmt("%.2f", d.slope) + " (need <= -5)"};
}

Outcome counting_oracle() {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> num(-6, 6), den(1, 6), deg(1, 3), nd(1, 3), rd(1, 2);
  std::size_t compared = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = nd(rng);
    const int R = rd(rng);
    std::vector<SmoothMap> maps;
    for (int r = 0; r < R; ++r) {
      std::string text = "0";
      for (int term = 0; term < 4; ++term) {
        text += " + (" + std::to_string(num(rng)) + "/" + std::to_string(den(rng)) + ")";
        const int d = deg(rng);
        for (int k = 0; k < d; ++k) text += "*x" + std::to_string(1 + static_cast<int>(rng() % n));
      }
      maps.push_back(SmoothMap::parse(text, n));
    }
    std::vector<Rational> x0;
    for (int i = 0; i < n; ++i) x0.emplace_back(num(rng), 12);
    const ManifoldChart c(x0, Rational(den(rng), 8), maps);
    const long long Q = n == 3 ? 12 : 30;
    Vector center(n);
    for (int i = 0; i < n; ++i) center[i] = to_double(x0[static_cast<std::size_t>(i)]);
    const WeightFunction w = make_bump(center, to_double(c.eps0_exact()) / 2);
    for (const Rational& delta : {Rational(0), Rational(1, 10), Rational(1, 2)}) {
      const CountResult r = count_near(c, Q, delta);
      const oracle::Tally t = oracle::count(c, Q, delta);
      if (r.hits != t.hits || r.points_scanned != t.scanned) return {false, "unweighted mismatch on chart " + std::to_string(trial)};
      const CountResult rw = count_weighted(c, w, Q, delta);
      const oracle::Tally tw = oracle::count(c, Q, delta, &w);
      if (rw.hits != tw.hits || std::abs(rw.count - tw.weighted) > 1e-12 * std::max(1.0, std::abs(tw.weighted)))
        return {false, "weighted mismatch on chart " + std::to_string(trial)};
      compared += 2;
    }
  }
  return {true, std::to_string(compared) + " counts identical"};
}

RunRecord ladder(const ManifoldChart& c) {
  ExperimentConfig cfg;
  cfg.manifold = chart_to_json(c);
  cfg.manifold_source = "inline";
  cfg.Q = {100, 200, 400, 800, 1600};
  cfg.delta = DeltaRule::parse("Q^-1/4");
  cfg.weight_center = Vector::Zero(2);
  cfg.weight_radius = 0.2;
  return run_experiment(cfg);
}

bool trend_ok(const RunRecord& r, double lo, double hi, std::string& detail) {
  int steps = 0;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    detail += (i ? " " : "") + fmt("%.4f", r.rows[i].ratio);
    if (i > 0 && std::abs(r.rows[i].ratio - 1) <= std::abs(r.rows[i - 1].ratio - 1)) ++steps;
  }
  const double last = r.rows.back().ratio;
  detail += " (" + std::to_string(steps) + "/4 steps toward 1)";
  return last >= lo && last <= hi && steps >= 3;
}

RunRecord run_suslin, run_curve;

Outcome main_asymptotic() {
  run_suslin = ladder(chart_from_family(suslin_family(2)));
  run_curve = ladder(chart(2, {"(x1^2 + x2^2)/2"}));
  std::string a = "R=2: ", b = "; R=1: ";
  const bool ok_a = trend_ok(run_suslin, 0.5, 1.5, a);
  const bool ok_b = trend_ok(run_curve, 0.7, 1.3, b);
  return {ok_a && ok_b, a + b};
}

Outcome envelope_sanity() {
  if (run_suslin.rows.empty()) return {false, "no ladder records"};
  const EnvelopeFit fs = fit_error_envelope(run_suslin);
  const EnvelopeFit fc = fit_error_envelope(run_curve);
  const std::vector<long long> Q{100, 200, 400, 800, 1600};
  const EnvelopeFit s2 = fit_error_envelope(2, 2, synthetic_envelope(2, 2, 2.5, 0.6, Q, 0.25));
  const EnvelopeFit s3 = fit_error_envelope(4, 3, synthetic_envelope(4, 3, 0.3, 1.7, Q, 0.2));
  const auto within = [](double got, double want) { return std::abs(got - want) <= 0.05 * std::abs(want); };
  const bool synth = within(s2.A, 2.5) && within(s2.c, 0.6) && within(s3.A, 0.3) && within(s3.c, 1.7);
  return {fs.bounded && fc.bounded && synth, "envelope ratios " + fmt("%.3f", fs.envelope_ratio) + " (R=2), " +
                                                 fmt("%.3f", fc.envelope_ratio) + " (R=1); synthetic " +
                                                 (synth ? "recovered" : "not recovered")};
}

Outcome radon_hurwitz_consistency() {
  for (int R = 2; R <= 8; ++R) {
    if (radon_hurwitz(1LL << (R - 1)) < R) return {false, "rho(2^" + std::to_string(R - 1) + ") < R"};
  }
  for (long long odd : {1LL, 3LL, 5LL, 7LL, 9LL, 15LL, 101LL, 999LL}) {
    if (radon_hurwitz(odd) != 1) return {false, "rho(" + std::to_string(odd) + ") != 1"};
  }
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g;
  double worst_dot = 0;
  for (int R = 2; R <= 5; ++R) {
    const MatrixFamily f = suslin_family(R);
    for (int k = 0; k < 1000; ++k) {
      Vector x(f.n);
      for (int i = 0; i < f.n; ++i) x[i] = g(rng);
      x.normalize();
      const auto fields = tangent_fields(f, x);
      if (fields.size() != static_cast<std::size_t>(R - 1)) return {false, "wrong number of fields"};
      Matrix cols(f.n, R - 1);
      for (int r = 0; r < R - 1; ++r) {
        cols.col(r) = fields[static_cast<std::size_t>(r)];
        worst_dot = std::max(worst_dot, std::abs(fields[static_cast<std::size_t>(r)].dot(x)));
      }
      if (numerical_rank(cols) != R - 1) return {false, "rank deficient fields at R=" + std::to_string(R)};
    }
  }
  return {worst_dot <= 1e-10, "4000 points, worst |v.x| " + fmt("%.1e", worst_dot)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "Selberg sandwich", 10, selberg_sandwich},
      {2, "Fejer majorization", 5, fejer_majorization},
      {3, "matrix identities", 30, matrix_identities},
      {4, "curvature condition", 20, curvature_machinery},
      {5, "Legendre identities", 30, legendre_identities},
      {6, "stationary phase and decay", 120, stationary_phase},
      {7, "counting oracle equivalence", 60, counting_oracle},
      {8, "main asymptotic ladders", 600, main_asymptotic},
      {9, "envelope sanity", 60, envelope_sanity},
      {10, "Radon-Hurwitz and tangent fields", 30, radon_hurwitz_consistency},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_seconds) {
      out.pass = false;
      out.detail += "; over the " + fmt("%.0f", c.limit_seconds) + " s limit";
    }
    if (!out.pass) ++failures;
    std::printf("%s %2d %s: %s [%.2f s]\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
