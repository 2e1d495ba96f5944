#pragma once

#include "ratnear/expr.hpp"
#include "ratnear/rational.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ratnear {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Smoothness metadata attached to maps built from closed-form expressions.
inline constexpr int kAnalyticSmoothness = 64;

/// Closed L-infinity box [center - radius, center + radius]^n.
struct Box {
  Vector center;
  double radius = 0;

  int dimension() const { return static_cast<int>(center.size()); }
  bool contains(const Vector& x) const;           // closed
  bool contains_strictly(const Vector& x) const;  // open
};

double linf_norm(const Vector& v);

/// A C^l map R^n -> R given by a closed-form expression, with symbolic
/// gradient and Hessian. Immutable; copies share state.
class SmoothMap {
 public:
  SmoothMap(Expr expression, int arity, int smoothness = kAnalyticSmoothness);

  static SmoothMap parse(std::string_view text, int arity, int smoothness = kAnalyticSmoothness);

  /// sum_i coefficients[i] * maps[i]; all maps must share an arity.
  static SmoothMap linear_combination(std::span<const SmoothMap> maps, std::span<const Rational> coefficients);

  int arity() const noexcept;
  int smoothness() const noexcept;
  const Expr& expression() const noexcept;
  std::string to_string() const;

  /// True iff the expression is a polynomial with rational coefficients.
  bool is_exact_rational() const noexcept;
  /// The expanded polynomial when is_exact_rational().
  const std::optional<Polynomial>& polynomial() const noexcept;
  /// Polynomial of total degree <= 2, so the Hessian does not depend on x.
  bool has_constant_hessian() const noexcept;

  double value(const Vector& x) const;
  double value(const double* x) const;  // unchecked arity
  Rational value_exact(std::span<const Rational> x) const;
  Vector gradient(const Vector& x) const;
  Matrix hessian(const Vector& x) const;

  const Expr& partial(int i) const;
  const Expr& second_partial(int i, int j) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Central finite differences with step 1e-5 * max(1, |x_i|).
Vector finite_difference_gradient(const std::function<double(const Vector&)>& f, const Vector& x);
Matrix finite_difference_hessian(const std::function<double(const Vector&)>& f, const Vector& x);

/// Graph chart x -> (x, f_1(x), ..., f_R(x)) over the closed box of radius
/// eps0 around x0. Center and radius are kept exactly for lattice bounds.
class ManifoldChart {
 public:
  ManifoldChart(std::vector<Rational> x0, Rational eps0, std::vector<SmoothMap> maps);

  int n() const noexcept { return static_cast<int>(x0_.size()); }
  int R() const noexcept { return static_cast<int>(maps_.size()); }
  int M() const noexcept { return n() + R(); }

  const std::vector<Rational>& x0_exact() const noexcept { return x0_; }
  const Rational& eps0_exact() const noexcept { return eps0_; }
  Vector x0() const;
  double eps0() const { return to_double(eps0_); }
  Box domain() const { return Box{x0(), eps0()}; }

  const std::vector<SmoothMap>& maps() const noexcept { return maps_; }
  const SmoothMap& map(int r) const { return maps_.at(static_cast<std::size_t>(r)); }

  bool is_exact_rational() const;
  /// Smallest smoothness over the maps.
  int smoothness() const;
  /// l > max{n + 1, n/2 + 4}, the smoothness the main asymptotic assumes.
  bool meets_smoothness_requirement() const;

  ManifoldChart with_maps(std::vector<SmoothMap> maps) const { return {x0_, eps0_, std::move(maps)}; }
  ManifoldChart with_eps0(Rational eps0) const { return {x0_, std::move(eps0), maps_}; }

 private:
  std::vector<Rational> x0_;
  Rational eps0_;
  std::vector<SmoothMap> maps_;
};

/// Product mollifier w(x) = amplitude * prod_i g((x_i - c_i)/radius),
/// g(u) = exp(-1/(1 - u^2)) on |u| < 1 and 0 elsewhere.
class WeightFunction {
 public:
  WeightFunction(Vector center, double radius, double amplitude = 1.0);

  int dimension() const { return static_cast<int>(center_.size()); }
  const Vector& center() const noexcept { return center_; }
  double support_radius() const noexcept { return radius_; }
  double amplitude() const noexcept { return amplitude_; }
  Box support() const { return Box{center_, radius_}; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  /// Factor of one coordinate (amplitude excluded).
  double axis_factor(int axis, double x) const;

  /// The integral over R^n, by panel Gauss-Legendre quadrature of g.
  double integral() const;

  WeightFunction scaled(double factor) const;

  static double profile(double u);
  static double profile_derivative(double u);
  static double profile_integral();  // int_{-1}^{1} g(u) du

 private:
  Vector center_;
  double radius_;
  double amplitude_;
};

/// radius > 0, else DomainError.
WeightFunction make_bump(const Vector& center, double radius);

}  // namespace ratnear
