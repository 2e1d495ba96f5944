#pragma once

#include "ratnear/counting.hpp"
#include "ratnear/curvature.hpp"
#include "ratnear/funcspace.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ratnear {

inline constexpr const char* kVersion = "0.1.0";

/// "0.1", "1/8", "Q^-1/4", "Q^-0.25", "Q^-1/2+eps". The exponent a of Q^-a
/// must lie in (0, 1]; "+eps" adds the configured epsilon to -a.
struct DeltaRule {
  enum class Kind { Literal, Power };
  Kind kind = Kind::Literal;
  Rational literal = 0;
  double exponent = 0;  // a in Q^-a
  bool plus_epsilon = false;
  double epsilon = 0.05;
  std::string text;

  static DeltaRule parse(const std::string& text, double epsilon = 0.05);
  /// Exact rational of the double value; DomainError if outside [0, 1/2].
  Rational at(long long Q) const;
};

enum class ExperimentMode { Near, On, Base };

std::string to_string(ExperimentMode mode);
ExperimentMode parse_mode(const std::string& text);

struct ExperimentConfig {
  nlohmann::json manifold;  // inline chart JSON, resolved from a path on load
  std::string manifold_source;
  std::vector<long long> Q;
  DeltaRule delta;
  std::optional<Vector> weight_center;
  double weight_radius = 0;
  ExperimentMode mode = ExperimentMode::Near;
  bool require_curvature = true;
  int t_grid = 16;
  int threads = 0;
  double scan_cap = 1e11;
  std::string record_path;
  std::string csv_path;

  bool weighted() const { return weight_center.has_value(); }
};

/// Schema "ratnear.experiment/1". A "manifold" given as a string is a path
/// relative to base_dir.
ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = ".");
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

struct RunRecord {
  nlohmann::json config;
  int n = 0;
  int R = 0;
  ExperimentMode mode = ExperimentMode::Near;
  nlohmann::json curvature;  // null when not verified
  std::vector<CountResult> rows;
  std::vector<double> fitted_ratios;  // count / (c delta^R Q^{n+1})
  double fitted_c = 0;
  std::string started;
  std::string finished;
  std::string version = kVersion;
};

/// Verifies the curvature condition (unless disabled), runs the ladder and
/// persists the record and CSV rows when paths are configured. Relative
/// output paths resolve against $RATNEAR_RESULTS_DIR when it is set.
RunRecord run_experiment(const ExperimentConfig& config);

nlohmann::json record_to_json(const RunRecord& record);
RunRecord record_from_json(const nlohmann::json& j);
RunRecord load_record(const std::filesystem::path& path);

std::filesystem::path resolve_output(const std::string& path);

inline constexpr const char* kCsvHeader = "Q,delta,count,N0,main_term,ratio";
std::string csv_row(const CountResult& r);
/// Appends rows, writing the header first when the file is new or empty.
void append_csv(const std::filesystem::path& path, const std::vector<CountResult>& rows);

/// Residuals e = |count - main_term| / (delta^{(R-1)(n-2)/n} Q^n) fitted by
/// log e = log A + c sqrt(log Q) for n = 2, log e = log A + c log log Q for
/// n >= 3. Envelope ratio is max/min of e / fit over the rungs.
struct EnvelopeFit {
  std::string form;
  double A = 0;
  double c = 0;
  double envelope_ratio = 0;
  bool bounded = false;  // envelope_ratio <= 10
  double delta_exponent = 0;  // (R-1)(n-2)/n
  std::vector<double> residuals;
  std::vector<double> fitted;
};

struct EnvelopePoint {
  long long Q = 0;
  double delta = 0;
  double count = 0;
  double main_term = 0;
};

EnvelopeFit fit_error_envelope(int n, int R, const std::vector<EnvelopePoint>& points);
EnvelopeFit fit_error_envelope(const RunRecord& record);

/// Points whose deviation lies exactly on A * E_n(Q) * delta^{...} Q^n.
std::vector<EnvelopePoint> synthetic_envelope(int n, int R, double A, double c, const std::vector<long long>& Q,
                                              double delta_exponent_a);

struct DimensionGrowthReport {
  int n = 0;
  int R = 0;
  double bound_exponent = 0;  // n - (n-2)(R-1)/(n+2(R-1))
  double fitted_exponent = 0;  // slope of log count against log Q
  bool vacuous = false;  // n = 2
  bool pass = false;  // fitted <= bound + 0.15
  std::vector<long long> Q;
  std::vector<double> counts;
};

double dimension_growth_bound(int n, int R);
DimensionGrowthReport dimension_growth_check(const ManifoldChart& chart, const std::vector<long long>& Q,
                                             const CountOptions& options = {});
DimensionGrowthReport dimension_growth_from_counts(int n, int R, const std::vector<long long>& Q,
                                                   const std::vector<double>& counts);

nlohmann::json to_json(const CountResult& r);
CountResult count_result_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CurvatureReport& r);
nlohmann::json to_json(const EnvelopeFit& f);
nlohmann::json to_json(const DimensionGrowthReport& r);

/// Least squares y = intercept + slope x.
struct LineFit {
  double slope = 0;
  double intercept = 0;
};
LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ratnear
