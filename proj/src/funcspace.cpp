#include "ratnear/funcspace.hpp"

#include "ratnear/error.hpp"
#include "ratnear/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace ratnear {

bool Box::contains(const Vector& x) const {
  if (x.size() != center.size()) throw DimensionError("box membership test with wrong dimension");
  return linf_norm(x - center) <= radius;
}

bool Box::contains_strictly(const Vector& x) const {
  if (x.size() != center.size()) throw DimensionError("box membership test with wrong dimension");
  return linf_norm(x - center) < radius;
}

double linf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------------------

struct SmoothMap::Impl {
  int arity;
  int smoothness;
  Expr value;
  std::vector<Expr> gradient;
  std::vector<Expr> hessian;  // row-major, symmetric by construction
  CompiledExpr value_code;
  std::vector<CompiledExpr> gradient_code;
  std::vector<CompiledExpr> hessian_code;
  std::optional<Polynomial> polynomial;
};

SmoothMap::SmoothMap(Expr expression, int arity, int smoothness) {
  if (arity < 1) throw DomainError("map arity must be positive");
  if (smoothness < 1) throw DomainError("smoothness must be positive");
  if (max_variable_index(expression) >= arity) throw DimensionError("expression uses a variable beyond its arity");
  auto impl = std::make_shared<Impl>();
  impl->arity = arity;
  impl->smoothness = smoothness;
  impl->value = std::move(expression);
  impl->value_code = CompiledExpr(impl->value, arity);
  const auto n = static_cast<std::size_t>(arity);
  impl->gradient.reserve(n);
  for (int i = 0; i < arity; ++i) impl->gradient.push_back(derivative(impl->value, i));
  impl->hessian.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      impl->hessian[i * n + j] = derivative(impl->gradient[i], static_cast<int>(j));
      impl->hessian[j * n + i] = impl->hessian[i * n + j];
    }
  }
  for (const Expr& g : impl->gradient) impl->gradient_code.emplace_back(g, arity);
  for (const Expr& h : impl->hessian) impl->hessian_code.emplace_back(h, arity);
  impl->polynomial = to_polynomial(impl->value, arity);
  impl_ = std::move(impl);
}

SmoothMap SmoothMap::parse(std::string_view text, int arity, int smoothness) {
  return SmoothMap(parse_expression(text, arity), arity, smoothness);
}

SmoothMap SmoothMap::linear_combination(std::span<const SmoothMap> maps, std::span<const Rational> coefficients) {
  if (maps.empty()) throw DomainError("linear combination of no maps");
  if (maps.size() != coefficients.size()) throw DimensionError("coefficient count differs from map count");
  const int arity = maps.front().arity();
  int smoothness = maps.front().smoothness();
  Expr sum = Expr::constant(0);
  for (std::size_t r = 0; r < maps.size(); ++r) {
    if (maps[r].arity() != arity) throw DimensionError("maps in a linear combination must share an arity");
    smoothness = std::min(smoothness, maps[r].smoothness());
    sum = sum + Expr::constant(coefficients[r]) * maps[r].expression();
  }
  return SmoothMap(sum, arity, smoothness);
}

int SmoothMap::arity() const noexcept { return impl_->arity; }
int SmoothMap::smoothness() const noexcept { return impl_->smoothness; }
const Expr& SmoothMap::expression() const noexcept { return impl_->value; }
std::string SmoothMap::to_string() const { return ratnear::to_string(impl_->value); }
bool SmoothMap::is_exact_rational() const noexcept { return impl_->polynomial.has_value(); }
const std::optional<Polynomial>& SmoothMap::polynomial() const noexcept { return impl_->polynomial; }

bool SmoothMap::has_constant_hessian() const noexcept {
  return impl_->polynomial.has_value() && impl_->polynomial->degree() <= 2;
}

double SmoothMap::value(const Vector& x) const {
  if (x.size() != impl_->arity) throw DimensionError("point has dimension " + std::to_string(x.size()) + ", map expects " + std::to_string(impl_->arity));
  return impl_->value_code(x.data());
}

double SmoothMap::value(const double* x) const { return impl_->value_code(x); }

Rational SmoothMap::value_exact(std::span<const Rational> x) const {
  if (x.size() != static_cast<std::size_t>(impl_->arity)) throw DimensionError("point has wrong dimension");
  if (!impl_->polynomial) throw NonPolynomialError("map is not a polynomial with rational coefficients");
  return impl_->polynomial->evaluate(x);
}

Vector SmoothMap::gradient(const Vector& x) const {
  if (x.size() != impl_->arity) throw DimensionError("point has wrong dimension");
  Vector g(impl_->arity);
  for (int i = 0; i < impl_->arity; ++i) g[i] = impl_->gradient_code[static_cast<std::size_t>(i)](x.data());
  return g;
}

Matrix SmoothMap::hessian(const Vector& x) const {
  if (x.size() != impl_->arity) throw DimensionError("point has wrong dimension");
  if (impl_->smoothness < 2) throw NonDifferentiableError("map is declared less than twice differentiable");
  const int n = impl_->arity;
  Matrix h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      h(i, j) = impl_->hessian_code[static_cast<std::size_t>(i * n + j)](x.data());
      h(j, i) = h(i, j);
    }
  }
  return h;
}

const Expr& SmoothMap::partial(int i) const { return impl_->gradient.at(static_cast<std::size_t>(i)); }

const Expr& SmoothMap::second_partial(int i, int j) const {
  return impl_->hessian.at(static_cast<std::size_t>(i * impl_->arity + j));
}

// ---------------------------------------------------------------------------

namespace {

double fd_step(double xi) { return 1e-5 * std::max(1.0, std::abs(xi)); }

}  // namespace

Vector finite_difference_gradient(const std::function<double(const Vector&)>& f, const Vector& x) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = fd_step(x[i]);
    Vector xp = x;
    Vector xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2 * h);
  }
  return g;
}

Matrix finite_difference_hessian(const std::function<double(const Vector&)>& f, const Vector& x) {
  const Eigen::Index n = x.size();
  Matrix h(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double hi = fd_step(x[i]);
      const double hj = fd_step(x[j]);
      auto at = [&](double si, double sj) {
        Vector y = x;
        y[i] += si * hi;
        y[j] += sj * hj;
        return f(y);
      };
      h(i, j) = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * hi * hj);
      h(j, i) = h(i, j);
    }
  }
  return h;
}

// ---------------------------------------------------------------------------

ManifoldChart::ManifoldChart(std::vector<Rational> x0, Rational eps0, std::vector<SmoothMap> maps)
    : x0_(std::move(x0)), eps0_(std::move(eps0)), maps_(std::move(maps)) {
  if (x0_.empty()) throw DomainError("chart dimension n must be at least 1");
  if (maps_.empty()) throw DomainError("chart codimension R must be at least 1");
  if (eps0_ <= 0) throw DomainError("chart radius eps0 must be positive");
  for (const SmoothMap& f : maps_) {
    if (f.arity() != n()) throw DimensionError("all chart maps must have arity n = " + std::to_string(n()));
  }
}

Vector ManifoldChart::x0() const {
  Vector v(n());
  for (int i = 0; i < n(); ++i) v[i] = to_double(x0_[static_cast<std::size_t>(i)]);
  return v;
}

bool ManifoldChart::is_exact_rational() const {
  return std::all_of(maps_.begin(), maps_.end(), [](const SmoothMap& f) { return f.is_exact_rational(); });
}

int ManifoldChart::smoothness() const {
  int s = maps_.front().smoothness();
  for (const SmoothMap& f : maps_) s = std::min(s, f.smoothness());
  return s;
}

bool ManifoldChart::meets_smoothness_requirement() const {
  const double l = smoothness();
  return l > std::max<double>(n() + 1, n() / 2.0 + 4);
}

// ---------------------------------------------------------------------------

WeightFunction::WeightFunction(Vector center, double radius, double amplitude)
    : center_(std::move(center)), radius_(radius), amplitude_(amplitude) {
  if (!(radius_ > 0)) throw DomainError("weight support radius must be positive");
  if (!(amplitude_ >= 0)) throw DomainError("weight amplitude must be non-negative");
  if (center_.size() < 1) throw DimensionError("weight center must have dimension >= 1");
}

double WeightFunction::profile(double u) {
  const double s = 1.0 - u * u;
  if (s <= 0) return 0.0;
  return std::exp(-1.0 / s);
}

double WeightFunction::profile_derivative(double u) {
  const double s = 1.0 - u * u;
  if (s <= 0) return 0.0;
  return std::exp(-1.0 / s) * (-2.0 * u / (s * s));
}

double WeightFunction::profile_integral() {
  static const double value = integrate_1d(&WeightFunction::profile, -1.0, 1.0, 64, 20);
  return value;
}

double WeightFunction::axis_factor(int axis, double x) const {
  return profile((x - center_[axis]) / radius_);
}

double WeightFunction::value(const Vector& x) const {
  if (x.size() != center_.size()) throw DimensionError("weight evaluated at point of wrong dimension");
  double w = amplitude_;
  for (int i = 0; i < dimension() && w != 0.0; ++i) w *= axis_factor(i, x[i]);
  return w;
}

Vector WeightFunction::gradient(const Vector& x) const {
  if (x.size() != center_.size()) throw DimensionError("weight evaluated at point of wrong dimension");
  const int n = dimension();
  Vector g(n);
  for (int i = 0; i < n; ++i) {
    double d = amplitude_ * profile_derivative((x[i] - center_[i]) / radius_) / radius_;
    for (int k = 0; k < n; ++k) {
      if (k != i) d *= axis_factor(k, x[k]);
    }
    g[i] = d;
  }
  return g;
}

double WeightFunction::integral() const {
  return amplitude_ * std::pow(radius_ * profile_integral(), dimension());
}

WeightFunction WeightFunction::scaled(double factor) const {
  return WeightFunction(center_, radius_, amplitude_ * factor);
}

WeightFunction make_bump(const Vector& center, double radius) {
  if (!(radius > 0)) throw DomainError("bump radius must be positive");
  return WeightFunction(center, radius, 1.0);
}

}  // namespace ratnear
