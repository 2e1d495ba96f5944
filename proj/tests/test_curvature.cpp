#include "doctest.h"

#include "ratnear/curvature.hpp"
#include "ratnear/error.hpp"

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

ManifoldChart chart2(std::vector<const char*> maps, Rational eps0 = Rational(1, 2)) {
  std::vector<SmoothMap> f;
  for (const char* m : maps) f.push_back(SmoothMap::parse(m, 2));
  return ManifoldChart({Rational(0), Rational(0)}, eps0, std::move(f));
}

ManifoldChart suslin2() { return chart2({"(x1^2 - x2^2)/2", "x1*x2"}); }

}  // namespace

TEST_CASE("pencil determinant examples") {
  const ManifoldChart c = suslin2();
  const Vector x = vec({0.1, -0.3});
  CHECK(pencil_hessian_det(c, vec({1, 0}), x) == doctest::Approx(-1.0));
  CHECK(pencil_hessian_det(c, vec({0, 1}), x) == doctest::Approx(-1.0));
  CHECK(pencil_hessian_det(c, vec({3, 4}), x) == doctest::Approx(-25.0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 100; ++k) {
    const double t1 = u(rng);
    const double t2 = u(rng);
    CHECK(pencil_hessian_det(c, vec({t1, t2}), x) == doctest::Approx(-(t1 * t1 + t2 * t2)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(pencil_hessian_det(c, vec({1, 0, 0}), x), DimensionError);
  CHECK_THROWS_AS(pencil_hessian_det(c, vec({1, 0}), vec({0})), DimensionError);
}

TEST_CASE("cube boundary grid") {
  const auto grid = cube_boundary_grid(2, 8);
  CHECK(grid.size() == 4 * 8);
  for (const Vector& t : grid) CHECK(linf_norm(t) == 1.0);
  CHECK(grid.front()[0] == 1.0);
  CHECK(grid.front()[1] == 1.0);
  const auto one = cube_boundary_grid(1, 8);
  REQUIRE(one.size() == 2);
  CHECK(one[0][0] == 1.0);
  CHECK(one[1][0] == -1.0);
}

TEST_CASE("Suslin chart satisfies the condition") {
  const CurvatureReport r = verify_condition1(suslin2(), 16, 0.3);
  CHECK(r.condition1_holds);
  // |det| = t1^2 + t2^2 on max|t_r| = 1 ranges over [1, 2]
  CHECK(r.c1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.c2 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.c1 <= r.c2);
  CHECK(std::abs(r.min_witness_t[0] * r.min_witness_t[1]) <= 1e-12);
  CHECK(r.signature_constant);
  CHECK(r.signature == 0);
}

TEST_CASE("degenerate pencil is reported with a witness") {
  const CurvatureReport r = verify_condition1(chart2({"x1^2/2 + x2^2/2", "x1*x2"}), 8, 0.2);
  CHECK_FALSE(r.condition1_holds);
  CHECK(std::abs(r.min_witness_det) <= 1e-12);
  CHECK(std::abs(r.min_witness_t[0]) == doctest::Approx(std::abs(r.min_witness_t[1])));
  CHECK(linf_norm(r.min_witness_t) == 1.0);
  CHECK_THROWS_AS(compute_localization(chart2({"x1^2/2 + x2^2/2", "x1*x2"}), r), CurvatureRefusal);
}

TEST_CASE("single map reduces to the Hessian at the base point") {
  const CurvatureReport good = verify_condition1(chart2({"x1^2/2 + x2^2 + x1^3"}), 8, 0.0);
  CHECK(good.condition1_holds);
  CHECK(good.c1 == doctest::Approx(2.0));
  CHECK(good.signature == 2);
  const CurvatureReport bad = verify_condition1(chart2({"x1^2/2 + x1*x2^2"}), 8, 0.0);
  CHECK_FALSE(bad.condition1_holds);
}

TEST_CASE("grid density precondition") {
  CHECK_THROWS_AS(verify_condition1(suslin2(), 7, 0.1), DomainError);
}

TEST_CASE("scaling of the pencil determinant") {
  const ManifoldChart q = suslin2();
  const ManifoldChart c = chart2({"exp(x1)*cos(x2)", "x1^2*x2 + x2^2 + x1^2"});
  const Vector x = vec({0.2, 0.1});
  const Vector t = vec({0.75, -0.5});
  for (double lambda : {-3.0, -1.0, 0.5, 2.0, 8.0}) {
    CHECK(pencil_hessian_det(q, lambda * t, x) == lambda * lambda * pencil_hessian_det(q, t, x));
    const double expect = lambda * lambda * pencil_hessian_det(c, t, x);
    CHECK(std::abs(pencil_hessian_det(c, lambda * t, x) - expect) <= 1e-9 * std::max(1.0, std::abs(expect)));
  }
}

TEST_CASE("permuting and negating maps leaves the verdict unchanged") {
  const std::vector<std::pair<const char*, const char*>> pairs{
      {"(x1^2 - x2^2)/2", "x1*x2"}, {"x1^2/2 + x2^2/2", "x1*x2"}, {"x1^2 + x1^3/5 - x2^2", "x1*x2 + x2^3/7"}};
  for (auto [a, b] : pairs) {
    const std::string na = std::string("-(") + a + ")";
    const CurvatureReport base = verify_condition1(chart2({a, b}), 12, 0.1);
    const CurvatureReport swapped = verify_condition1(chart2({b, a}), 12, 0.1);
    const CurvatureReport negated = verify_condition1(chart2({na.c_str(), b}), 12, 0.1);
    CHECK(base.condition1_holds == swapped.condition1_holds);
    CHECK(base.condition1_holds == negated.condition1_holds);
    CHECK(swapped.c1 == doctest::Approx(base.c1).epsilon(1e-6));
    CHECK(negated.c1 == doctest::Approx(base.c1).epsilon(1e-6));
  }
}

TEST_CASE("signature is constant on each component") {
  const CurvatureReport r = verify_condition1(chart2({"x1^2 + x2^2/2 + x1^3/10 + x2^4/20"}), 8, 0.3);
  CHECK(r.condition1_holds);
  CHECK(r.signature_constant);
  CHECK(r.signature == 2);
  const CurvatureReport s = verify_condition1(chart2({"x1^2 - x2^2 + x1*x2^2", "x1*x2 + x1^3/9"}), 10, 0.1);
  CHECK(s.condition1_holds);
  CHECK(s.signature_constant);
  for (const Vector& t : cube_boundary_grid(2, 10)) {
    CHECK(signature(pencil_hessian(suslin2(), t, vec({0, 0}))).value == 0);
  }
}

TEST_CASE("quadratic pencil keeps tau at eps0") {
  const ManifoldChart c = suslin2();
  const CurvatureReport r = compute_localization(c, verify_condition1(c, 16, 0.5));
  CHECK(r.localized);
  CHECK(r.tau == 0.5);
  CHECK(r.kappa == 0.25);
  CHECK(r.kappa < r.tau);
  CHECK(r.rho_prime == doctest::Approx(0.125));
  CHECK(r.rho > 0);
}

TEST_CASE("boundary separation against the linear closed form") {
  // grad G_t(x) = A_t x with A_t = [[t1, t2], [t2, -t1]], so every pair of
  // boundary points is at least (tau - kappa)/||A_t^{-1}||_inf apart
  const ManifoldChart c = suslin2();
  const CurvatureReport r = compute_localization(c, verify_condition1(c, 16, 0.5));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 20; ++k) {
    Vector t = vec({u(rng), u(rng)});
    t /= linf_norm(t);
    Matrix a(2, 2);
    a << t[0], t[1], t[1], -t[0];
    const double inv_norm = a.inverse().cwiseAbs().rowwise().sum().maxCoeff();
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    const double d = boundary_image_distance(c, t, r.tau, r.kappa, 1000);
    CHECK(d >= (r.tau - r.kappa) / inv_norm * (1 - 1e-12));
    CHECK(d <= norm * (r.tau - r.kappa) + 1e-12);
    CHECK(d >= 2 * r.rho * (1 - 1e-12) - 1e-3);
  }
  // max over the cube boundary of (|t1| + |t2|)/(t1^2 + t2^2) is (1 + sqrt 2)/2
  CHECK(2 * r.rho >= (r.tau - r.kappa) * 2 / (1 + std::sqrt(2.0)) * (1 - 1e-9));
}

TEST_CASE("tau shrinks when the determinant degrades") {
  std::vector<SmoothMap> f{SmoothMap::parse("x1^2/2 + x1^3/3", 1)};
  const ManifoldChart c({Rational(0)}, Rational(1), std::move(f));
  // det = 1 + 2x; c1 on the base point alone is 1, margin 1/2 holds for x >= -1/4
  const CurvatureReport r = compute_localization(c, verify_condition1(c, 8, 0.0));
  CHECK(r.tau < 1.0);
  CHECK(r.tau == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(r.kappa == doctest::Approx(r.tau / 2));
  CHECK(r.rho > 0);
}
