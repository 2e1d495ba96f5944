#include "ratnear/harness.hpp"

#include "ratnear/error.hpp"
#include "ratnear/manifold_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

namespace ratnear {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

}  // namespace

DeltaRule DeltaRule::parse(const std::string& input, double epsilon) {
  DeltaRule rule;
  rule.text = trim(input);
  rule.epsilon = epsilon;
  std::string s = rule.text;
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.rfind("Q^", 0) == 0) {
    rule.kind = Kind::Power;
    std::string rest = s.substr(2);
    for (const std::string suffix : {"+eps", "*Q^eps", "*Q^epsilon", "+epsilon"}) {
      if (rest.size() > suffix.size() && rest.compare(rest.size() - suffix.size(), suffix.size(), suffix) == 0) {
        rule.plus_epsilon = true;
        rest.resize(rest.size() - suffix.size());
        break;
      }
    }
    if (rest.size() >= 2 && rest.front() == '(' && rest.back() == ')') rest = rest.substr(1, rest.size() - 2);
    if (rest.empty() || rest.front() != '-') throw ParseError("delta rule needs a negative exponent: " + rule.text);
    rule.exponent = to_double(parse_rational(rest.substr(1)));
    if (!(rule.exponent > 0 && rule.exponent <= 1)) throw DomainError("delta exponent must lie in (0, 1]");
    return rule;
  }
  rule.literal = parse_rational(s);
  if (rule.literal < 0 || rule.literal > Rational(1, 2)) throw DomainError("delta must lie in [0, 1/2]");
  return rule;
}

Rational DeltaRule::at(long long Q) const {
  if (kind == Kind::Literal) return literal;
  const double e = -exponent + (plus_epsilon ? epsilon : 0.0);
  const double d = std::pow(static_cast<double>(Q), e);
  if (!(d >= 0 && d <= 0.5)) throw DomainError("delta rule " + text + " leaves [0, 1/2] at Q = " + std::to_string(Q));
  return delta_from_double(d);
}

std::string to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::Near:
      return "near";
    case ExperimentMode::On:
      return "on";
    case ExperimentMode::Base:
      break;
  }
  return "base";
}

ExperimentMode parse_mode(const std::string& text) {
  if (text == "near") return ExperimentMode::Near;
  if (text == "on") return ExperimentMode::On;
  if (text == "base") return ExperimentMode::Base;
  throw ParseError("unknown mode: " + text);
}

ExperimentConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  ExperimentConfig c;
  try {
    if (j.contains("schema") && j["schema"] != "ratnear.experiment/1") throw ParseError("unknown experiment schema");
    const json& m = j.at("manifold");
    if (m.is_string()) {
      std::filesystem::path p = m.get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      std::ifstream in(p);
      if (!in) throw ParseError("cannot read manifold file " + p.string());
      c.manifold = json::parse(in);
      c.manifold_source = m.get<std::string>();
    } else {
      c.manifold = m;
      c.manifold_source = "inline";
    }
    c.Q = j.at("Q").get<std::vector<long long>>();
    const double eps = j.value("epsilon", 0.05);
    const json& d = j.at("delta");
    c.delta = DeltaRule::parse(d.is_string() ? d.get<std::string>() : d.dump(), eps);
    if (j.contains("weight") && !j["weight"].is_null()) {
      c.weight_center = vector_from_json(j["weight"].at("center"));
      c.weight_radius = j["weight"].at("radius").get<double>();
    }
    c.mode = parse_mode(j.value("mode", std::string("near")));
    c.require_curvature = j.value("require_curvature", true);
    c.t_grid = j.value("t_grid", 16);
    c.threads = j.value("threads", 0);
    c.scan_cap = j.value("scan_cap", 1e11);
    if (j.contains("output")) {
      c.record_path = j["output"].value("record", std::string());
      c.csv_path = j["output"].value("csv", std::string());
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad experiment config: ") + e.what());
  }
  if (c.Q.empty()) throw DomainError("Q ladder is empty");
  for (std::size_t i = 0; i < c.Q.size(); ++i) {
    if (c.Q[i] < 1) throw DomainError("Q values must be positive");
    if (i > 0 && c.Q[i] <= c.Q[i - 1]) throw DomainError("Q ladder must be strictly increasing");
  }
  if (c.mode == ExperimentMode::Base && !c.weighted()) throw DomainError("base mode needs a weight");
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j{{"schema", "ratnear.experiment/1"},
         {"manifold", c.manifold},
         {"manifold_source", c.manifold_source},
         {"Q", c.Q},
         {"delta", c.delta.text},
         {"epsilon", c.delta.epsilon},
         {"mode", to_string(c.mode)},
         {"require_curvature", c.require_curvature},
         {"t_grid", c.t_grid},
         {"threads", c.threads},
         {"scan_cap", c.scan_cap},
         {"output", {{"record", c.record_path}, {"csv", c.csv_path}}}};
  j["weight"] = c.weighted() ? json{{"center", vector_json(*c.weight_center)}, {"radius", c.weight_radius}} : json();
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j, path.parent_path());
}

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p = path;
  if (p.is_relative()) {
    if (const char* dir = std::getenv("RATNEAR_RESULTS_DIR"); dir && *dir) p = std::filesystem::path(dir) / p;
  }
  return p;
}

std::string csv_row(const CountResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g,%.17g,%.17g", r.Q, r.delta, r.count, r.N0, r.main_term,
                r.ratio);
  return buf;
}

void append_csv(const std::filesystem::path& path, const std::vector<CountResult>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot write " + path.string());
  if (fresh) out << kCsvHeader << "\n";
  for (const CountResult& r : rows) out << csv_row(r) << "\n";
}

RunRecord run_experiment(const ExperimentConfig& config) {
  RunRecord rec;
  rec.started = utc_now();
  rec.config = config_to_json(config);
  rec.mode = config.mode;
  const ManifoldChart chart = chart_from_json(config.manifold);
  rec.n = chart.n();
  rec.R = chart.R();

  CountOptions opts;
  opts.threads = config.threads;
  opts.scan_cap = config.scan_cap;
  if (config.require_curvature && config.mode != ExperimentMode::Base) {
    CurvatureReport rep = verify_condition1(chart, config.t_grid, chart.eps0());
    if (!rep.condition1_holds) {
      std::ostringstream msg;
      msg << "curvature condition fails: min |det| = " << rep.c1 << " at t = (";
      for (Eigen::Index i = 0; i < rep.min_witness_t.size(); ++i) msg << (i ? ", " : "") << rep.min_witness_t[i];
      msg << ")";
      throw CurvatureRefusal(msg.str());
    }
    rep = compute_localization(chart, rep);
    rec.curvature = to_json(rep);
    opts.support_radius = rep.kappa;
  }

  std::optional<WeightFunction> w;
  if (config.weighted()) w = make_bump(*config.weight_center, config.weight_radius);

  for (long long Q : config.Q) {
    switch (config.mode) {
      case ExperimentMode::Near: {
        const Rational delta = config.delta.at(Q);
        rec.rows.push_back(w ? count_weighted(chart, *w, Q, delta, opts) : count_near(chart, Q, delta, opts));
        break;
      }
      case ExperimentMode::On:
        rec.rows.push_back(count_on(chart, Q, opts));
        break;
      case ExperimentMode::Base: {
        const auto start = std::chrono::steady_clock::now();
        const BaseCount b = base_count_sigma(*w, Q);
        CountResult r;
        r.Q = Q;
        r.weighted = true;
        r.count = b.N0;
        r.N0 = b.N0;
        r.main_term = b.prediction * std::pow(static_cast<double>(Q), rec.n + 1);
        r.ratio = b.prediction > 0 ? b.sigma_hat / b.prediction : 0;
        r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rec.rows.push_back(r);
        break;
      }
    }
  }

  if (config.mode == ExperimentMode::Near) {
    std::vector<double> scaled;
    double logsum = 0;
    for (const CountResult& r : rec.rows) {
      const double denom = std::pow(r.delta, rec.R) * std::pow(static_cast<double>(r.Q), rec.n + 1);
      scaled.push_back(denom > 0 ? r.count / denom : 0);
    }
    std::size_t used = 0;
    for (double s : scaled) {
      if (s > 0) {
        logsum += std::log(s);
        ++used;
      }
    }
    if (used > 0) {
      rec.fitted_c = std::exp(logsum / static_cast<double>(used));
      for (double s : scaled) rec.fitted_ratios.push_back(s / rec.fitted_c);
    }
  }
  rec.finished = utc_now();

  if (!config.record_path.empty()) write_text(resolve_output(config.record_path), record_to_json(rec).dump(2) + "\n");
  if (!config.csv_path.empty()) append_csv(resolve_output(config.csv_path), rec.rows);
  return rec;
}

json to_json(const CountResult& r) {
  return {{"Q", r.Q},
          {"delta", r.delta},
          {"weighted", r.weighted},
          {"count", r.count},
          {"hits", r.hits},
          {"N0", r.N0},
          {"main_term", r.main_term},
          {"ratio", r.ratio},
          {"points_scanned", r.points_scanned},
          {"near_threshold_warnings", r.near_threshold_warnings},
          {"exact", r.exact},
          {"wall_time", r.wall_time}};
}

CountResult count_result_from_json(const json& j) {
  CountResult r;
  r.Q = j.at("Q").get<long long>();
  r.delta = j.at("delta").get<double>();
  r.weighted = j.value("weighted", false);
  r.count = j.at("count").get<double>();
  r.hits = j.value("hits", std::uint64_t{0});
  r.N0 = j.at("N0").get<double>();
  r.main_term = j.at("main_term").get<double>();
  r.ratio = j.at("ratio").get<double>();
  r.points_scanned = j.value("points_scanned", std::uint64_t{0});
  r.near_threshold_warnings = j.value("near_threshold_warnings", std::uint64_t{0});
  r.exact = j.value("exact", true);
  r.wall_time = j.value("wall_time", 0.0);
  return r;
}

json to_json(const CurvatureReport& r) {
  return {{"condition1_holds", r.condition1_holds},
          {"c1", r.c1},
          {"c2", r.c2},
          {"tau", r.tau},
          {"kappa", r.kappa},
          {"rho", r.rho},
          {"rho_prime", r.rho_prime},
          {"localized", r.localized},
          {"t_grid_density", r.t_grid_density},
          {"x_grid_density", r.x_grid_density},
          {"x_radius", r.x_radius},
          {"samples", r.samples},
          {"min_witness", {{"t", vector_json(r.min_witness_t)}, {"x", vector_json(r.min_witness_x)}, {"det", r.min_witness_det}}},
          {"signature", r.signature},
          {"signature_constant", r.signature_constant}};
}

json record_to_json(const RunRecord& rec) {
  json rows = json::array();
  for (const CountResult& r : rec.rows) rows.push_back(to_json(r));
  return {{"schema", "ratnear.run/1"},
          {"version", rec.version},
          {"config", rec.config},
          {"n", rec.n},
          {"R", rec.R},
          {"mode", to_string(rec.mode)},
          {"curvature", rec.curvature},
          {"rows", rows},
          {"fitted_c", rec.fitted_c},
          {"fitted_ratios", rec.fitted_ratios},
          {"started", rec.started},
          {"finished", rec.finished}};
}

RunRecord record_from_json(const json& j) {
  RunRecord rec;
  try {
    if (j.value("schema", std::string()) != "ratnear.run/1") throw ParseError("not a run record");
    rec.version = j.value("version", std::string());
    rec.config = j.value("config", json());
    rec.n = j.at("n").get<int>();
    rec.R = j.at("R").get<int>();
    rec.mode = parse_mode(j.value("mode", std::string("near")));
    rec.curvature = j.value("curvature", json());
    for (const json& r : j.at("rows")) rec.rows.push_back(count_result_from_json(r));
    rec.fitted_c = j.value("fitted_c", 0.0);
    rec.fitted_ratios = j.value("fitted_ratios", std::vector<double>{});
    rec.started = j.value("started", std::string());
    rec.finished = j.value("finished", std::string());
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad run record: ") + e.what());
  }
  return rec;
}

RunRecord load_record(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path.string());
  try {
    return record_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("least squares needs two or more points");
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw DomainError("least squares needs distinct abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

namespace {

double envelope_abscissa(int n, long long Q) {
  const double l = std::log(static_cast<double>(Q));
  return n == 2 ? std::sqrt(l) : std::log(l);
}

}  // namespace

EnvelopeFit fit_error_envelope(int n, int R, const std::vector<EnvelopePoint>& points) {
  if (n < 2) throw DomainError("the error envelope needs n >= 2");
  if (points.size() < 4) throw DomainError("the envelope fit needs at least 4 rungs");
  EnvelopeFit fit;
  fit.form = n == 2 ? "A*exp(c*sqrt(log Q))" : "A*(log Q)^c";
  fit.delta_exponent = static_cast<double>((R - 1) * (n - 2)) / n;
  std::vector<double> xs, ys;
  for (const EnvelopePoint& p : points) {
    const double scale = std::pow(p.delta, fit.delta_exponent) * std::pow(static_cast<double>(p.Q), n);
    const double e = std::abs(p.count - p.main_term) / scale;
    fit.residuals.push_back(e);
    if (e > 0 && std::isfinite(e)) {
      xs.push_back(envelope_abscissa(n, p.Q));
      ys.push_back(std::log(e));
    }
  }
  if (xs.size() < 2) throw DomainError("degenerate envelope fit: residuals vanish");
  const LineFit lf = least_squares(xs, ys);
  fit.A = std::exp(lf.intercept);
  fit.c = lf.slope;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double f = fit.A * std::exp(fit.c * envelope_abscissa(n, points[i].Q));
    fit.fitted.push_back(f);
    if (fit.residuals[i] > 0) {
      lo = std::min(lo, fit.residuals[i] / f);
      hi = std::max(hi, fit.residuals[i] / f);
    }
  }
  fit.envelope_ratio = hi / lo;
  fit.bounded = std::isfinite(fit.envelope_ratio) && fit.envelope_ratio <= 10;
  return fit;
}

EnvelopeFit fit_error_envelope(const RunRecord& record) {
  std::vector<EnvelopePoint> pts;
  for (const CountResult& r : record.rows) pts.push_back({r.Q, r.delta, r.count, r.main_term});
  return fit_error_envelope(record.n, record.R, pts);
}

std::vector<EnvelopePoint> synthetic_envelope(int n, int R, double A, double c, const std::vector<long long>& Q,
                                              double a) {
  std::vector<EnvelopePoint> out;
  const double de = static_cast<double>((R - 1) * (n - 2)) / n;
  for (long long q : Q) {
    const double qd = static_cast<double>(q);
    const double delta = std::pow(qd, -a);
    const double main = std::pow(2 * delta, R) * std::pow(qd, n + 1);
    const double e = A * std::exp(c * envelope_abscissa(n, q));
    out.push_back({q, delta, main + e * std::pow(delta, de) * std::pow(qd, n), main});
  }
  return out;
}

double dimension_growth_bound(int n, int R) {
  return n - static_cast<double>((n - 2) * (R - 1)) / (n + 2 * (R - 1));
}

DimensionGrowthReport dimension_growth_from_counts(int n, int R, const std::vector<long long>& Q,
                                                   const std::vector<double>& counts) {
  DimensionGrowthReport rep;
  rep.n = n;
  rep.R = R;
  rep.Q = Q;
  rep.counts = counts;
  rep.vacuous = n <= 2;
  rep.bound_exponent = rep.vacuous ? n : dimension_growth_bound(n, R);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < Q.size(); ++i) {
    if (counts[i] > 0) {
      xs.push_back(std::log(static_cast<double>(Q[i])));
      ys.push_back(std::log(counts[i]));
    }
  }
  rep.fitted_exponent = least_squares(xs, ys).slope;
  rep.pass = rep.vacuous || rep.fitted_exponent <= rep.bound_exponent + 0.15;
  return rep;
}

DimensionGrowthReport dimension_growth_check(const ManifoldChart& chart, const std::vector<long long>& Q,
                                             const CountOptions& options) {
  std::vector<double> counts;
  for (long long q : Q) counts.push_back(static_cast<double>(count_on(chart, q, options).hits));
  return dimension_growth_from_counts(chart.n(), chart.R(), Q, counts);
}

json to_json(const EnvelopeFit& f) {
  return {{"form", f.form},
          {"A", f.A},
          {"c", f.c},
          {"envelope_ratio", f.envelope_ratio},
          {"bounded", f.bounded},
          {"delta_exponent", f.delta_exponent},
          {"residuals", f.residuals},
          {"fitted", f.fitted}};
}

json to_json(const DimensionGrowthReport& r) {
  return {{"n", r.n},
          {"R", r.R},
          {"bound_exponent", r.bound_exponent},
          {"fitted_exponent", r.fitted_exponent},
          {"vacuous", r.vacuous},
          {"pass", r.pass},
          {"Q", r.Q},
          {"counts", r.counts}};
}

}  // namespace ratnear
