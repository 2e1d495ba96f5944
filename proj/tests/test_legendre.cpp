#include "doctest.h"

#include "ratnear/error.hpp"
#include "ratnear/legendre.hpp"

#include <cmath>
#include <random>

using namespace ratnear;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Box unit_box(int n, double r = 1.0) { return Box{Vector::Zero(n), r}; }

}  // namespace

TEST_CASE("identity gradient") {
  const LegendreChart c(SmoothMap::parse("(x1^2 + x2^2)/2", 2), unit_box(2));
  const Vector y = vec({0.3, -0.7});
  CHECK(linf_norm(c.invert_gradient(y) - y) <= 1e-14);
  CHECK(c.value(y) == doctest::Approx(y.squaredNorm() / 2).epsilon(1e-14));
  CHECK((c.hessian(y) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(c.image_bound() == doctest::Approx(1.0));
}

TEST_CASE("quadratic forms against a linear solve") {
  Matrix a(3, 3);
  a << 2, 1, 0, 1, -1, 0.5, 0, 0.5, 3;
  const SmoothMap f = SmoothMap::parse("x1^2 + x1*x2 - x2^2/2 + x2*x3/2 + 3*x3^2/2", 3);
  const LegendreChart c(f, unit_box(3));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int k = 0; k < 30; ++k) {
    const Vector x = vec({u(rng), u(rng), u(rng)});
    const Vector y = a * x;
    const Vector solved = a.lu().solve(y);
    CHECK(linf_norm(c.invert_gradient(y) - solved) <= 1e-12);
    CHECK(c.value(y) == doctest::Approx(y.dot(solved) / 2).epsilon(1e-12));
    CHECK((c.hessian(y) - a.inverse()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("quartic perturbation converges") {
  const SmoothMap f = SmoothMap::parse("(x1^2 - x2^2)/2 + 0.01*x1^4", 2);
  const LegendreChart c(f, unit_box(2, 0.5));
  for (double a : {-0.4, -0.1, 0.2, 0.45}) {
    for (double b : {-0.3, 0.0, 0.35}) {
      const Vector x = vec({a, b});
      const Vector y = f.gradient(x);
      const Inversion inv = c.try_invert_gradient(y);
      REQUIRE(inv.status == InversionStatus::Converged);
      CHECK(inv.residual <= 1e-10);
      CHECK(linf_norm(inv.x - x) <= 1e-10);
      CHECK((c.hessian(y) * f.hessian(x) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-6);
    }
  }
}

TEST_CASE("points outside the image") {
  const LegendreChart c(SmoothMap::parse("(x1^2 + x2^2)/2", 2), unit_box(2, 0.5));
  CHECK(c.try_invert_gradient(vec({0.7, 0})).status == InversionStatus::OutsideImage);
  CHECK_THROWS_AS(c.invert_gradient(vec({0.7, 0})), OutsideImageError);
  CHECK_THROWS_AS(c.invert_gradient(vec({0.5, 0})), OutsideImageError);  // boundary hit
  CHECK_THROWS_AS(c.invert_gradient(vec({0.1})), DimensionError);
}

TEST_CASE("non-convergence reports the best residual") {
  // grad = exp(x) never reaches a negative target
  const LegendreChart c(SmoothMap::parse("exp(x1)", 1), unit_box(1));
  const Inversion inv = c.try_invert_gradient(vec({-1}));
  CHECK(inv.status == InversionStatus::NotConverged);
  CHECK(inv.residual >= 1.0);
  try {
    c.invert_gradient(vec({-1}));
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.best_residual() == doctest::Approx(inv.residual));
  }
}

TEST_CASE("degenerate Hessian is rejected at construction") {
  CHECK_THROWS_AS(LegendreChart(SmoothMap::parse("x1^2 + x2", 2), unit_box(2)), DomainError);
  CHECK_THROWS_AS(LegendreChart(SmoothMap::parse("x1^3", 1), unit_box(1)), DomainError);
}

TEST_CASE("ill-conditioned Hessian") {
  const LegendreChart c(SmoothMap::parse("x1^2/2 + 1e-13*x2^2/2", 2), unit_box(2),
                        LegendreOptions{.degeneracy_tolerance = 0});
  CHECK_THROWS_AS(c.hessian(vec({0.1, 0})), IllConditionedError);
}

TEST_CASE("round trip over the domain") {
  const SmoothMap f = SmoothMap::parse("x1^2 - x2^2/2 + x1*x2/3 + x1^3/10 + exp(x2)/5", 2);
  const LegendreChart c(f, unit_box(2, 0.6));
  const RoundTripStats s = round_trip(c, 500);
  CHECK(s.failures == 0);
  CHECK(s.max_error <= 1e-8);
}

TEST_CASE("double transform recovers the function") {
  const SmoothMap f = SmoothMap::parse("(x1^2 - x2^2)/2 + 0.01*x1^4 + x1*x2/5", 2);
  const LegendreChart inner(f, unit_box(2, 1.0));
  const Vector y0 = f.gradient(Vector::Zero(2));
  const LegendreChart outer(inner.conjugate(), Box{y0, 0.5});
  double worst = 0;
  for (int i = 0; i < 32; ++i) {
    for (int j = 0; j < 32; ++j) {
      const Vector x = vec({-0.3 + 0.6 * i / 31, -0.3 + 0.6 * j / 31});
      worst = std::max(worst, std::abs(outer.value(x) - f.value(x)));
    }
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("gradient map is bi-Lipschitz") {
  const LegendreChart c(SmoothMap::parse("(x1^2 - x2^2)/2 + 0.01*x1^4", 2), unit_box(2, 0.5));
  const BiLipschitzReport r = bilipschitz_ratios(c, 1000);
  CHECK(r.bounded);
  CHECK(r.pairs == 1000);
  // grad is diag(1 + 0.04 x^2, -1) up to the x^4 term: ratios stay near 1
  CHECK(r.min_ratio >= 0.9);
  CHECK(r.max_ratio <= 1.0 + 1e-12);
}

TEST_CASE("queries do not depend on order") {
  const SmoothMap f = SmoothMap::parse("x1^2 + x2^2/2 + x1^3/7", 2);
  const LegendreChart c(f, unit_box(2, 0.5));
  const Vector y = f.gradient(vec({0.2, -0.1}));
  const Vector first = c.invert_gradient(y);
  c.invert_gradient(f.gradient(vec({-0.4, 0.4})));
  CHECK((c.invert_gradient(y) - first).cwiseAbs().maxCoeff() == 0.0);
}
