#pragma once

#include "ratnear/funcspace.hpp"

#include <cstdint>
#include <optional>

namespace ratnear {

/// Pairs (a, q), 1 <= q <= Q, a in Z^n with a/q in the closed chart box, such
/// that ||q f_r(a/q)|| <= delta for every r. Weighted queries sum w(a/q).
struct CountQuery {
  long long Q = 1;
  Rational delta = 0;  // in [0, 1/2]
  std::optional<WeightFunction> weight;

  bool weighted() const { return weight.has_value(); }
};

struct CountOptions {
  int threads = 0;  // 0: hardware concurrency
  double scan_cap = 1e11;
  /// When set, weighted queries require supp w inside B_radius(x0);
  /// otherwise inside the chart box.
  std::optional<double> support_radius;
};

struct CountResult {
  long long Q = 0;
  double delta = 0;
  bool weighted = false;
  double count = 0;  // hits, or the weighted sum
  std::uint64_t hits = 0;  // qualifying pairs among the scanned ones
  double N0 = 0;  // sum of w(a/q) over scanned pairs; their number if unweighted
  double main_term = 0;  // (2 delta)^R N0
  double ratio = 0;
  std::uint64_t points_scanned = 0;
  std::uint64_t near_threshold_warnings = 0;
  bool exact = true;  // every height test decided in exact arithmetic
  double wall_time = 0;
};

CountResult count(const ManifoldChart& chart, const CountQuery& query, const CountOptions& options = {});

CountResult count_near(const ManifoldChart& chart, long long Q, const Rational& delta, const CountOptions& options = {});
CountResult count_weighted(const ManifoldChart& chart, const WeightFunction& w, long long Q, const Rational& delta,
                           const CountOptions& options = {});
/// delta = 0 decided exactly; throws NonPolynomialError unless every map is
/// a polynomial with rational coefficients.
CountResult count_on(const ManifoldChart& chart, long long Q, const CountOptions& options = {});

struct BaseCount {
  double N0 = 0;  // sum over q <= Q, a in Z^n of w(a/q)
  double sigma_hat = 0;  // N0 / Q^{n+1}
  double prediction = 0;  // int w / (n + 1)
  double relative_gap = 0;
};

BaseCount base_count_sigma(const WeightFunction& w, long long Q);

/// Exact rational of a double delta, checked to lie in [0, 1/2].
Rational delta_from_double(double delta);

}  // namespace ratnear
