#pragma once

#include "ratnear/funcspace.hpp"
#include "ratnear/rational.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ratnear {

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Row-major matrix of big integers for exact identities.
struct BigMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<BigInt> data;

  BigMatrix() = default;
  BigMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c)) {}
  explicit BigMatrix(const IntMatrix& m);

  BigInt& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)]; }
  const BigInt& operator()(int i, int j) const {
    return data[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)];
  }
  bool operator==(const BigMatrix&) const = default;
};

BigMatrix operator*(const BigMatrix& a, const BigMatrix& b);

/// Fraction-free Gaussian elimination.
BigInt determinant(const BigMatrix& m);
BigInt determinant(const IntMatrix& m);

/// a * b in 64-bit arithmetic, or nullopt on overflow.
std::optional<IntMatrix> checked_product(const IntMatrix& a, const IntMatrix& b);

enum class FamilyKind { Suslin, Realified, User };

std::string to_string(FamilyKind kind);

/// Integer symmetric n x n matrices A_1..A_R.
struct MatrixFamily {
  FamilyKind kind = FamilyKind::User;
  int n = 0;
  std::vector<IntMatrix> matrices;

  int R() const { return static_cast<int>(matrices.size()); }
};

/// Checks sizes and symmetry.
MatrixFamily user_family(std::vector<IntMatrix> matrices);

/// A_2(t) = [[t2, t1], [t1, -t2]], A_R(t) = [[t_R I, A_{R-1}], [A_{R-1}, -t_R I]];
/// the matrices are the coefficients of t_1..t_R. Dimension 2^{R-1}.
MatrixFamily suslin_family(int R, int max_dimension = 1024);

/// sum_r t_r A_r.
IntMatrix pencil(const MatrixFamily& family, std::span<const long long> t);  // throws std::overflow_error
BigMatrix pencil_exact(const MatrixFamily& family, std::span<const BigInt> t);
Matrix pencil(const MatrixFamily& family, const Vector& t);

/// pencil(t)^2 == (sum t_r^2) I, exactly.
bool square_identity_holds(const MatrixFamily& family, std::span<const long long> t);

struct PencilCertificate {
  bool holds = false;
  bool exact = false;  // from the square identity rather than sampling
  std::size_t samples = 0;
  Vector witness_t;  // smallest |det| found
  double min_abs_det = 0;
};

/// Families satisfying A_r^2 = I, A_r A_s = -A_s A_r are certified exactly
/// (the pencil squares to |t|^2 I); other families by a grid and random
/// samples on the cube boundary max |t_r| = 1, with |det| > 1e-8 max |det|.
PencilCertificate pencil_certificate(const MatrixFamily& family, std::size_t samples = 200, std::uint64_t seed = 17);

/// Complex matrix with Gaussian-integer entries.
struct GaussianMatrix {
  IntMatrix re;
  IntMatrix im;
};

struct GaussianInt {
  BigInt re = 0;
  BigInt im = 0;
  bool operator==(const GaussianInt&) const = default;
};

GaussianInt determinant(const GaussianMatrix& m);

/// [[P, -K], [K, P]] for M = P + iK. Throws DomainError unless M is Hermitian
/// (exactly for Gaussian-integer input, to 1e-12 relative otherwise).
Matrix realify_hermitian(const ComplexMatrix& m);
IntMatrix realify_hermitian(const GaussianMatrix& m);

/// Realifies each matrix of a Hermitian family.
MatrixFamily realify_family(const std::vector<GaussianMatrix>& hermitian);

/// Write n = m 2^{4a+b}, m odd, 0 <= b <= 3; returns 8a + 2^b.
int radon_hurwitz(long long n);

/// v_r(x) = B_r x - (x . B_r x) x with B_r = A_r A_1^{-1}, r = 2..R, for unit x.
/// Throws CertificateFailure when A_1 is singular or the fields lose rank.
std::vector<Vector> tangent_fields(const MatrixFamily& family, const Vector& x);

/// Numerical rank with threshold 1e-10 relative to the largest singular value.
int numerical_rank(const Matrix& m);

/// f_r(x) = x^T A_r x / 2 around x0 = 0.
ManifoldChart chart_from_family(const MatrixFamily& family, const Rational& eps0 = Rational(1, 2));

}  // namespace ratnear
