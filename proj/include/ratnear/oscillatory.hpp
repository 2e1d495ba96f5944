#pragma once

#include "ratnear/curvature.hpp"
#include "ratnear/funcspace.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace ratnear {

using Complex = std::complex<double>;

/// I(q; j; k) = int w(x) e(sum_r q j_r f_r(x) - q k.x) dx, e(t) = exp(2 pi i t).
struct OscillatoryIntegralSpec {
  ManifoldChart chart;
  WeightFunction weight;
  std::vector<long long> j;  // one per map
  std::vector<long long> k;  // one per coordinate
  long long q = 1;

  /// q * j_1.
  double lambda() const;
  /// j_1 >= 1 and 0 <= j_r <= j_1.
  bool in_normalized_cone() const;
};

struct QuadratureOptions {
  int points = 20;
  int check_points = 14;
  int min_panels = 8;
  double tolerance = 1e-8;  // absolute, on |I_points - I_check_points|
  double lambda_cap = 1e4;
  double node_budget = 2e8;  // nodes of one tensor rule
  int max_refinements = 4;
  int threads = 0;  // 0: hardware concurrency
};

struct QuadratureResult {
  Complex value;
  double error_estimate = 0;
  std::vector<int> panels;  // per axis
  double nodes = 0;
};

/// Tensor Gauss-Legendre panels over supp w with at least one panel per
/// oscillation on each axis; panels double until the error estimate meets
/// the tolerance. Throws BudgetExceededError past the lambda cap or budget.
QuadratureResult quad_integral_detailed(const OscillatoryIntegralSpec& spec, const QuadratureOptions& options = {});
Complex quad_integral(const OscillatoryIntegralSpec& spec, const QuadratureOptions& options = {});

struct StationaryPhaseResult {
  Complex quadrature;
  Complex leading;
  std::optional<Vector> stationary_point;  // empty: none in the chart domain
  int signature = 0;
  double delta = 0;  // |det H_{F_j}| at the stationary point
  double lambda = 0;
  double phase = 0;         // -F_j^*(k/j_1)
  double phase_direct = 0;  // F_j(x) - (k/j_1).x
  double relative_error = 0;
};

/// F_j = f_1 + sum_{r >= 2} (j_r/j_1) f_r.
SmoothMap normalized_phase(const OscillatoryIntegralSpec& spec);

/// Leading stationary-phase term w(x) Delta^{-1/2} lambda^{-n/2} e(lambda phi + sigma/8)
/// at the solution of grad F_j(x) = k/j_1 in the chart domain, compared
/// with quadrature. Requires the normalized cone and condition1_holds.
StationaryPhaseResult stationary_phase_leading(const OscillatoryIntegralSpec& spec, const CurvatureReport& curvature,
                                               const QuadratureOptions& options = {});

struct DecayReport {
  std::vector<double> lambdas;
  std::vector<double> magnitudes;
  double slope = 0;  // least squares slope of log|I| against log lambda
  double intercept = 0;
  std::vector<int> ells;
  std::vector<double> c_ell;  // max |I| lambda^{ell - 1}
  std::vector<bool> ell_pass;  // slope <= -(ell - 1)
  double min_phase_gradient = 0;
  bool gradient_bounded_below = false;
  bool all_zero = false;
};

/// Evaluates I at q = lambda / j_1 for each lambda (which must be a
/// multiple of j_1) and fits the decay. A phase with a critical point in
/// supp w is flagged through gradient_bounded_below rather than rejected.
DecayReport nonstationary_decay(const OscillatoryIntegralSpec& spec, const std::vector<int>& ells,
                                const std::vector<double>& lambdas, const QuadratureOptions& options = {});

}  // namespace ratnear
