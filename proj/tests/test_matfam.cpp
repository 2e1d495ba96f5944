#include "doctest.h"

#include "ratnear/curvature.hpp"
#include "ratnear/error.hpp"
#include "ratnear/matfam.hpp"

#include <random>

using namespace ratnear;

namespace {

std::vector<long long> random_t(std::mt19937_64& rng, int R) {
  std::uniform_int_distribution<long long> d(-40, 40);
  std::vector<long long> t(static_cast<std::size_t>(R));
  for (auto& v : t) v = d(rng);
  return t;
}

Vector random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = g(rng);
  return x / x.norm();
}

}  // namespace

TEST_CASE("two-dimensional Suslin family") {
  const MatrixFamily f = suslin_family(2);
  REQUIRE(f.R() == 2);
  CHECK(f.n == 2);
  IntMatrix a1(2, 2), a2(2, 2);
  a1 << 0, 1, 1, 0;
  a2 << 1, 0, 0, -1;
  CHECK(f.matrices[0] == a1);
  CHECK(f.matrices[1] == a2);
  const std::vector<long long> t{3, 4};
  CHECK(determinant(pencil(f, t)) == -25);
  CHECK(pencil(f, std::vector<long long>{1, 0}) == a1);
  CHECK(pencil(f, std::vector<long long>{0, 0}) == IntMatrix::Zero(2, 2));
  CHECK_THROWS_AS(suslin_family(1), DomainError);
  CHECK_THROWS_AS(suslin_family(12), DomainError);
  CHECK_THROWS_AS(pencil(f, std::vector<long long>{1}), DimensionError);
}

TEST_CASE("square identity for R = 3 at t = (1, 1, 1)") {
  const MatrixFamily f = suslin_family(3);
  const IntMatrix p = pencil(f, std::vector<long long>{1, 1, 1});
  CHECK(*checked_product(p, p) == 3 * IntMatrix::Identity(4, 4));
  for (const IntMatrix& a : f.matrices) CHECK(a == a.transpose());
}

TEST_CASE("square and determinant identities") {
  std::mt19937_64 rng(5);
  for (int R = 2; R <= 8; ++R) {
    const MatrixFamily f = suslin_family(R);
    CHECK(f.n == (1 << (R - 1)));
    for (int k = 0; k < 100; ++k) CHECK(square_identity_holds(f, random_t(rng, R)));
  }
  for (int R = 2; R <= 5; ++R) {
    const MatrixFamily f = suslin_family(R);
    for (int k = 0; k < 100; ++k) {
      const auto t = random_t(rng, R);
      BigInt s = 0;
      for (long long v : t) s += BigInt(v) * v;
      const BigInt d = determinant(pencil(f, t));
      CHECK(d * d == boost::multiprecision::pow(s, static_cast<unsigned>(f.n)));
    }
  }
}

TEST_CASE("square identity rejects a non-Clifford family") {
  IntMatrix a(2, 2), b(2, 2);
  a << 1, 0, 0, 1;
  b << 0, 1, 1, 0;
  const MatrixFamily f = user_family({a, b});
  CHECK_FALSE(square_identity_holds(f, std::vector<long long>{1, 1}));
  const PencilCertificate c = pencil_certificate(f);
  CHECK_FALSE(c.holds);
  CHECK_FALSE(c.exact);
  CHECK(pencil_certificate(suslin_family(4)).exact);
}

TEST_CASE("Bareiss determinant against small closed forms") {
  IntMatrix m(3, 3);
  m << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  CHECK(determinant(m) == 4);
  IntMatrix z(3, 3);
  z << 0, 1, 2, 0, 3, 4, 0, 5, 6;
  CHECK(determinant(z) == 0);
  IntMatrix p(2, 2);
  p << 0, 1, 1, 0;
  CHECK(determinant(p) == -1);
  // Vandermonde on 1..5: prod_{i<j} (j - i) = 288
  IntMatrix v(5, 5);
  for (int i = 0; i < 5; ++i) {
    long long x = 1;
    for (int j = 0; j < 5; ++j, x *= (i + 1)) v(i, j) = x;
  }
  CHECK(determinant(v) == 288);
  CHECK_THROWS_AS(determinant(IntMatrix(2, 3)), DimensionError);
}

TEST_CASE("overflow promotes to big integers") {
  const MatrixFamily f = suslin_family(3);
  const long long big = 3000000000LL;
  CHECK(square_identity_holds(f, std::vector<long long>{big, -big, big}));
  const long long top = std::numeric_limits<long long>::max();
  CHECK(square_identity_holds(f, std::vector<long long>{top, top, -top}));
  const IntMatrix id = IntMatrix::Identity(2, 2);
  CHECK_THROWS_AS(pencil(user_family({id, id}), std::vector<long long>{top, 1}), std::overflow_error);
}

TEST_CASE("realification") {
  GaussianMatrix m{IntMatrix::Zero(2, 2), IntMatrix::Zero(2, 2)};
  m.im << 0, 1, -1, 0;
  const GaussianInt dm = determinant(m);
  CHECK(dm.re == -1);
  CHECK(dm.im == 0);
  const IntMatrix r = realify_hermitian(m);
  CHECK(r == r.transpose());
  CHECK(determinant(r) == 1);

  GaussianMatrix s{IntMatrix::Zero(2, 2), IntMatrix::Zero(2, 2)};
  s.re << 2, 1, 1, 3;
  const IntMatrix rs = realify_hermitian(s);
  CHECK(rs.topRightCorner(2, 2) == IntMatrix::Zero(2, 2));
  CHECK(determinant(rs) == 25);

  GaussianMatrix bad{IntMatrix::Identity(2, 2), IntMatrix::Zero(2, 2)};
  bad.im(0, 1) = 1;
  CHECK_THROWS_AS(realify_hermitian(bad), DomainError);
  ComplexMatrix cbad = ComplexMatrix::Identity(2, 2);
  cbad(0, 1) = {0, 1};
  CHECK_THROWS_AS(realify_hermitian(cbad), DomainError);
}

TEST_CASE("realified determinant is the squared modulus") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long long> e(-5, 5);
  for (int n : {1, 2, 3, 4}) {
    for (int k = 0; k < 20; ++k) {
      GaussianMatrix m{IntMatrix::Zero(n, n), IntMatrix::Zero(n, n)};
      for (int i = 0; i < n; ++i) {
        m.re(i, i) = e(rng);
        for (int j = i + 1; j < n; ++j) {
          m.re(i, j) = m.re(j, i) = e(rng);
          m.im(i, j) = e(rng);
          m.im(j, i) = -m.im(i, j);
        }
      }
      const GaussianInt d = determinant(m);
      CHECK(d.im == 0);
      CHECK(determinant(realify_hermitian(m)) == d.re * d.re + d.im * d.im);
      ComplexMatrix c(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) c(i, j) = {static_cast<double>(m.re(i, j)), static_cast<double>(m.im(i, j))};
      }
      const double det = realify_hermitian(c).determinant();
      const double expect = static_cast<double>(d.re * d.re);
      CHECK(std::abs(det - expect) <= 1e-9 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST_CASE("realified Hermitian pencil stays nonsingular") {
  // Pauli-type Hermitian family: sigma_x, sigma_y, sigma_z anticommute
  GaussianMatrix sx{IntMatrix::Zero(2, 2), IntMatrix::Zero(2, 2)};
  sx.re << 0, 1, 1, 0;
  GaussianMatrix sy{IntMatrix::Zero(2, 2), IntMatrix::Zero(2, 2)};
  sy.im << 0, -1, 1, 0;
  GaussianMatrix sz{IntMatrix::Zero(2, 2), IntMatrix::Zero(2, 2)};
  sz.re << 1, 0, 0, -1;
  const MatrixFamily f = realify_family({sx, sy, sz});
  CHECK(f.kind == FamilyKind::Realified);
  CHECK(f.n == 4);
  const PencilCertificate c = pencil_certificate(f, 500);
  CHECK(c.holds);
  CHECK(c.min_abs_det >= 1.0 - 1e-9);
}

TEST_CASE("Radon-Hurwitz numbers") {
  for (long long n : {1, 3, 5, 7, 9, 15, 101}) CHECK(radon_hurwitz(n) == 1);
  CHECK(radon_hurwitz(2) == 2);
  CHECK(radon_hurwitz(4) == 4);
  CHECK(radon_hurwitz(8) == 8);
  CHECK(radon_hurwitz(16) == 9);
  CHECK(radon_hurwitz(12) == 4);
  for (int R = 2; R <= 8; ++R) CHECK(radon_hurwitz(1LL << (R - 1)) >= R);
  CHECK_THROWS_AS(radon_hurwitz(0), DomainError);
}

TEST_CASE("odd dimension forces a singular pencil") {
  IntMatrix a = IntMatrix::Identity(3, 3);
  IntMatrix b(3, 3);
  b << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  const PencilCertificate c = pencil_certificate(user_family({a, b}), 2000);
  CHECK(c.min_abs_det < 1e-2);
}

TEST_CASE("tangent fields") {
  const MatrixFamily f2 = suslin_family(2);
  Vector e1(2);
  e1 << 1, 0;
  const auto v = tangent_fields(f2, e1);
  REQUIRE(v.size() == 1);
  CHECK(v[0].norm() > 0.5);
  CHECK(std::abs(v[0].dot(e1)) <= 1e-15);

  std::mt19937_64 rng(21);
  for (int R = 2; R <= 5; ++R) {
    const MatrixFamily f = suslin_family(R);
    for (int k = 0; k < 1000; ++k) {
      const Vector x = random_unit(rng, f.n);
      const auto fields = tangent_fields(f, x);
      CHECK(fields.size() == static_cast<std::size_t>(R - 1));
      Matrix cols(f.n, R);
      for (int r = 0; r < R; ++r) cols.col(r) = f.matrices[static_cast<std::size_t>(r)].cast<double>() * x;
      CHECK(numerical_rank(cols) == R);
      for (const Vector& w : fields) CHECK(std::abs(w.dot(x)) <= 1e-10);
    }
  }
  IntMatrix zero = IntMatrix::Zero(2, 2);
  IntMatrix id = IntMatrix::Identity(2, 2);
  CHECK_THROWS_AS(tangent_fields(user_family({zero, id}), e1), CertificateFailure);
  CHECK_THROWS_AS(tangent_fields(user_family({id, id}), e1), CertificateFailure);
}

TEST_CASE("charts from families") {
  const ManifoldChart c = chart_from_family(suslin_family(2));
  Vector x(2);
  x << 0.3, -0.7;
  CHECK(c.map(0).value(x) == doctest::Approx(0.3 * -0.7));
  CHECK(c.map(1).value(x) == doctest::Approx((0.09 - 0.49) / 2));
  CHECK(c.map(0).has_constant_hessian());
  const CurvatureReport r = verify_condition1(c, 16, 0.5);
  CHECK(r.condition1_holds);
  CHECK(r.c1 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(compute_localization(c, r).tau == c.eps0());

  const ManifoldChart c3 = chart_from_family(suslin_family(3), Rational(1, 4));
  CHECK(c3.n() == 4);
  CHECK(c3.R() == 3);
  const CurvatureReport r3 = verify_condition1(c3, 8, 0.25);
  CHECK(r3.condition1_holds);
  // |det| = (sum t^2)^2 on max |t_r| = 1 is at least 1
  CHECK(r3.c1 == doctest::Approx(1.0).epsilon(1e-6));
  for (int k = 0; k < 20; ++k) {
    Vector t = Vector::Random(3);
    const double s = t.squaredNorm();
    CHECK(std::abs(pencil_hessian_det(c3, t, Vector::Zero(4))) == doctest::Approx(s * s).epsilon(1e-12));
  }
}
