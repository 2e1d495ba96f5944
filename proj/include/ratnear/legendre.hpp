#pragma once

#include "ratnear/funcspace.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace ratnear {

/// A C^2 function given by callables. Lets transforms be chained (F**).
struct DifferentiableFunction {
  int arity = 0;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<Matrix(const Vector&)> hessian;
};

DifferentiableFunction as_function(const SmoothMap& map);

struct LegendreOptions {
  double tolerance = 1e-11;  // on |grad F(x) - y|_inf
  int max_iterations = 50;
  int max_halvings = 30;
  int cache_density = 9;  // per axis, capped by cache_limit
  std::size_t cache_limit = 729;
  double max_condition = 1e12;
  double degeneracy_tolerance = 1e-8;  // min |det| relative to max |det| on U
};

enum class InversionStatus { Converged, OutsideImage, NotConverged };

struct Inversion {
  InversionStatus status = InversionStatus::NotConverged;
  Vector x;
  double residual = 0;
  int iterations = 0;
};

/// Inverse of grad F on a box U where det H_F does not vanish. The preimage
/// cache is filled at construction and never changes, so queries are
/// reentrant and independent of call order.
class LegendreChart {
 public:
  LegendreChart(DifferentiableFunction f, Box domain, LegendreOptions options = {});
  LegendreChart(const SmoothMap& f, Box domain, LegendreOptions options = {});

  int dimension() const noexcept { return domain_.dimension(); }
  const Box& domain() const noexcept { return domain_; }
  const DifferentiableFunction& source() const noexcept { return f_; }
  const LegendreOptions& options() const noexcept { return options_; }
  /// Bounding box of the sampled image grad F(U): lower and upper corners.
  const Vector& image_lower() const noexcept { return lower_; }
  const Vector& image_upper() const noexcept { return upper_; }
  /// Smallest L with the sampled image inside [-L, L]^n.
  double image_bound() const;
  double min_abs_det() const noexcept { return min_det_; }

  Inversion try_invert_gradient(const Vector& y) const;
  /// Throws OutsideImageError or ConvergenceError.
  Vector invert_gradient(const Vector& y) const;
  /// F*(y) = x.y - F(x).
  double value(const Vector& y) const;
  /// H_F(x)^-1 at the preimage x.
  Matrix hessian(const Vector& y) const;

  /// F* as a function of y, with gradient (grad F)^-1 and Hessian H_F^-1.
  DifferentiableFunction conjugate() const;

 private:
  Vector nearest_cached(const Vector& y) const;

  DifferentiableFunction f_;
  Box domain_;
  LegendreOptions options_;
  std::vector<Vector> cache_x_;
  std::vector<Vector> cache_y_;
  Vector lower_;
  Vector upper_;
  double min_det_ = 0;
};

struct RoundTripStats {
  std::size_t samples = 0;
  std::size_t failures = 0;
  double max_error = 0;  // relative to diam U
  double mean_error = 0;
  double max_residual = 0;
};

RoundTripStats round_trip(const LegendreChart& chart, std::size_t samples, std::uint64_t seed = 1);

/// Range of |x - y| / |grad F(x) - grad F(y)| over random pairs in U.
struct BiLipschitzReport {
  std::size_t pairs = 0;
  double min_ratio = 0;
  double max_ratio = 0;
  bool bounded = false;
};

BiLipschitzReport bilipschitz_ratios(const LegendreChart& chart, std::size_t pairs, std::uint64_t seed = 2);

}  // namespace ratnear
