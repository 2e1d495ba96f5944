#include "ratnear/matfam.hpp"

#include "ratnear/curvature.hpp"
#include "ratnear/error.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ratnear {

BigMatrix::BigMatrix(const IntMatrix& m) : BigMatrix(static_cast<int>(m.rows()), static_cast<int>(m.cols())) {
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) (*this)(i, j) = m(i, j);
  }
}

BigMatrix operator*(const BigMatrix& a, const BigMatrix& b) {
  if (a.cols != b.rows) throw DimensionError("matrix product size mismatch");
  BigMatrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = 0; k < a.cols; ++k) {
      const BigInt& x = a(i, k);
      if (x == 0) continue;
      for (int j = 0; j < b.cols; ++j) c(i, j) += x * b(k, j);
    }
  }
  return c;
}

BigInt determinant(const BigMatrix& input) {
  if (input.rows != input.cols) throw DimensionError("determinant of a non-square matrix");
  const int n = input.rows;
  if (n == 0) return 1;
  BigMatrix m = input;
  BigInt prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    int p = k;
    while (p < n && m(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(m(p, j), m(k, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

BigInt determinant(const IntMatrix& m) { return determinant(BigMatrix(m)); }

std::optional<IntMatrix> checked_product(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product size mismatch");
  IntMatrix c = IntMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      const long long x = a(i, k);
      if (x == 0) continue;
      for (Eigen::Index j = 0; j < b.cols(); ++j) {
        long long p;
        if (__builtin_mul_overflow(x, b(k, j), &p) || __builtin_add_overflow(c(i, j), p, &c(i, j))) {
          return std::nullopt;
        }
      }
    }
  }
  return c;
}

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Suslin:
      return "suslin";
    case FamilyKind::Realified:
      return "realified";
    case FamilyKind::User:
      break;
  }
  return "user";
}

MatrixFamily user_family(std::vector<IntMatrix> matrices) {
  if (matrices.empty()) throw DomainError("a family needs at least one matrix");
  const auto n = matrices.front().rows();
  for (const IntMatrix& a : matrices) {
    if (a.rows() != n || a.cols() != n) throw DimensionError("family matrices must share one square size");
    if (a != a.transpose()) throw DomainError("family matrices must be symmetric");
  }
  return {FamilyKind::User, static_cast<int>(n), std::move(matrices)};
}

MatrixFamily suslin_family(int R, int max_dimension) {
  if (R < 2) throw DomainError("suslin families need R >= 2");
  if (R - 1 >= 62 || (1LL << (R - 1)) > max_dimension) throw DomainError("family dimension exceeds the cap");
  std::vector<IntMatrix> m(2, IntMatrix::Zero(2, 2));
  m[0] << 0, 1, 1, 0;
  m[1] << 1, 0, 0, -1;
  for (int level = 3; level <= R; ++level) {
    const auto h = m.front().rows();
    std::vector<IntMatrix> next;
    for (const IntMatrix& a : m) {
      IntMatrix b = IntMatrix::Zero(2 * h, 2 * h);
      b.topRightCorner(h, h) = a;
      b.bottomLeftCorner(h, h) = a;
      next.push_back(std::move(b));
    }
    IntMatrix top = IntMatrix::Zero(2 * h, 2 * h);
    top.topLeftCorner(h, h) = IntMatrix::Identity(h, h);
    top.bottomRightCorner(h, h) = -IntMatrix::Identity(h, h);
    next.push_back(std::move(top));
    m = std::move(next);
  }
  const int n = static_cast<int>(m.front().rows());
  return {FamilyKind::Suslin, n, std::move(m)};
}

IntMatrix pencil(const MatrixFamily& family, std::span<const long long> t) {
  if (static_cast<int>(t.size()) != family.R()) throw DimensionError("t needs one entry per matrix");
  IntMatrix s = IntMatrix::Zero(family.n, family.n);
  for (int r = 0; r < family.R(); ++r) {
    const IntMatrix& a = family.matrices[static_cast<std::size_t>(r)];
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      long long p;
      if (__builtin_mul_overflow(a.data()[i], t[static_cast<std::size_t>(r)], &p) ||
          __builtin_add_overflow(s.data()[i], p, &s.data()[i])) {
        throw std::overflow_error("pencil entry overflows 64 bits");
      }
    }
  }
  return s;
}

BigMatrix pencil_exact(const MatrixFamily& family, std::span<const BigInt> t) {
  if (static_cast<int>(t.size()) != family.R()) throw DimensionError("t needs one entry per matrix");
  BigMatrix s(family.n, family.n);
  for (int r = 0; r < family.R(); ++r) {
    const IntMatrix& a = family.matrices[static_cast<std::size_t>(r)];
    for (int i = 0; i < family.n; ++i) {
      for (int j = 0; j < family.n; ++j) {
        if (a(i, j) != 0) s(i, j) += a(i, j) * t[static_cast<std::size_t>(r)];
      }
    }
  }
  return s;
}

Matrix pencil(const MatrixFamily& family, const Vector& t) {
  if (t.size() != family.R()) throw DimensionError("t needs one entry per matrix");
  Matrix s = Matrix::Zero(family.n, family.n);
  for (int r = 0; r < family.R(); ++r) s += t[r] * family.matrices[static_cast<std::size_t>(r)].cast<double>();
  return s;
}

bool square_identity_holds(const MatrixFamily& family, std::span<const long long> t) {
  std::vector<BigInt> bt(t.begin(), t.end());
  BigInt s = 0;
  for (const BigInt& v : bt) s += v * v;
  try {
    const IntMatrix p = pencil(family, t);
    if (auto sq = checked_product(p, p); sq && s <= BigInt(std::numeric_limits<long long>::max())) {
      return *sq == static_cast<long long>(s) * IntMatrix::Identity(family.n, family.n);
    }
  } catch (const std::overflow_error&) {
  }
  const BigMatrix p = pencil_exact(family, bt);
  const BigMatrix sq = p * p;
  for (int i = 0; i < family.n; ++i) {
    for (int j = 0; j < family.n; ++j) {
      if (sq(i, j) != (i == j ? s : BigInt(0))) return false;
    }
  }
  return true;
}

namespace {

// A_r^2 = I and A_r A_s = -A_s A_r, so (sum t_r A_r)^2 = |t|^2 I identically.
bool clifford_relations(const MatrixFamily& family) {
  const IntMatrix id = IntMatrix::Identity(family.n, family.n);
  for (int r = 0; r < family.R(); ++r) {
    for (int s = r; s < family.R(); ++s) {
      const auto ab = checked_product(family.matrices[static_cast<std::size_t>(r)], family.matrices[static_cast<std::size_t>(s)]);
      const auto ba = checked_product(family.matrices[static_cast<std::size_t>(s)], family.matrices[static_cast<std::size_t>(r)]);
      if (!ab || !ba) return false;
      if (r == s ? *ab != id : IntMatrix(*ab + *ba) != IntMatrix::Zero(family.n, family.n)) return false;
    }
  }
  return true;
}

}  // namespace

PencilCertificate pencil_certificate(const MatrixFamily& family, std::size_t samples, std::uint64_t seed) {
  PencilCertificate cert;
  const int R = family.R();
  if (clifford_relations(family)) {
    cert.holds = true;
    cert.exact = true;
    cert.min_abs_det = 1;  // |det| = |t|_2^n >= 1 on max |t_r| = 1
    cert.witness_t = Vector::Zero(R);
    cert.witness_t[0] = 1;
    return cert;
  }
  std::vector<Vector> ts = cube_boundary_grid(R, 17);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> face(0, 2 * R - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    Vector t(R);
    for (int r = 0; r < R; ++r) t[r] = unit(rng);
    const int f = face(rng);
    t[f / 2] = f % 2 == 0 ? 1.0 : -1.0;
    ts.push_back(std::move(t));
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0;
  for (const Vector& t : ts) {
    const double d = std::abs(pencil(family, t).determinant());
    if (d < lo) {
      lo = d;
      cert.witness_t = t;
    }
    hi = std::max(hi, d);
    ++cert.samples;
  }
  cert.min_abs_det = lo;
  cert.holds = lo > 1e-8 * hi;
  return cert;
}

namespace {

GaussianInt mul(const GaussianInt& a, const GaussianInt& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

GaussianInt sub(const GaussianInt& a, const GaussianInt& b) { return {a.re - b.re, a.im - b.im}; }

GaussianInt exact_div(const GaussianInt& a, const GaussianInt& b) {
  const BigInt norm = b.re * b.re + b.im * b.im;
  const BigInt re = a.re * b.re + a.im * b.im;
  const BigInt im = a.im * b.re - a.re * b.im;
  if (re % norm != 0 || im % norm != 0) throw std::logic_error("inexact Gaussian division");
  return {re / norm, im / norm};
}

bool is_zero(const GaussianInt& a) { return a.re == 0 && a.im == 0; }

}  // namespace

GaussianInt determinant(const GaussianMatrix& gm) {
  const auto n = gm.re.rows();
  if (gm.re.cols() != n || gm.im.rows() != n || gm.im.cols() != n) throw DimensionError("determinant of a non-square matrix");
  if (n == 0) return {1, 0};
  std::vector<std::vector<GaussianInt>> m(static_cast<std::size_t>(n), std::vector<GaussianInt>(static_cast<std::size_t>(n)));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = {gm.re(i, j), gm.im(i, j)};
  }
  const auto un = static_cast<std::size_t>(n);
  GaussianInt prev{1, 0};
  int sign = 1;
  for (std::size_t k = 0; k + 1 < un; ++k) {
    std::size_t p = k;
    while (p < un && is_zero(m[p][k])) ++p;
    if (p == un) return {0, 0};
    if (p != k) {
      std::swap(m[p], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < un; ++i) {
      for (std::size_t j = k + 1; j < un; ++j) {
        m[i][j] = exact_div(sub(mul(m[i][j], m[k][k]), mul(m[i][k], m[k][j])), prev);
      }
    }
    prev = m[k][k];
  }
  GaussianInt d = m[un - 1][un - 1];
  if (sign < 0) d = {-d.re, -d.im};
  return d;
}

Matrix realify_hermitian(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("realification needs a square matrix");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw DomainError("matrix is not Hermitian");
  const Matrix p = (m.real() + m.real().transpose()) / 2;
  const Matrix k = (m.imag() - m.imag().transpose()) / 2;
  const auto n = m.rows();
  Matrix out(2 * n, 2 * n);
  out << p, -k, k, p;
  return out;
}

IntMatrix realify_hermitian(const GaussianMatrix& m) {
  if (m.re.rows() != m.re.cols() || m.im.rows() != m.re.rows() || m.im.cols() != m.re.cols()) {
    throw DimensionError("realification needs square parts of equal size");
  }
  if (m.re != m.re.transpose() || m.im != IntMatrix(-m.im.transpose())) throw DomainError("matrix is not Hermitian");
  const auto n = m.re.rows();
  IntMatrix out(2 * n, 2 * n);
  out << m.re, -m.im, m.im, m.re;
  return out;
}

MatrixFamily realify_family(const std::vector<GaussianMatrix>& hermitian) {
  std::vector<IntMatrix> out;
  for (const GaussianMatrix& m : hermitian) out.push_back(realify_hermitian(m));
  MatrixFamily f = user_family(std::move(out));
  f.kind = FamilyKind::Realified;
  return f;
}

int radon_hurwitz(long long n) {
  if (n < 1) throw DomainError("Radon-Hurwitz number needs n >= 1");
  const int c = __builtin_ctzll(static_cast<unsigned long long>(n));
  return 8 * (c / 4) + (1 << (c % 4));
}

int numerical_rank(const Matrix& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) rank += s[i] > 1e-10 * s[0];
  return rank;
}

std::vector<Vector> tangent_fields(const MatrixFamily& family, const Vector& x) {
  if (x.size() != family.n) throw DimensionError("point dimension does not match the family");
  if (std::abs(x.norm() - 1) > 1e-10) throw DomainError("tangent fields need a unit vector");
  const Matrix a1 = family.matrices.front().cast<double>();
  Eigen::FullPivLU<Matrix> lu(a1);
  if (!lu.isInvertible()) throw CertificateFailure("A_1 is singular");
  const Matrix inv = lu.inverse();
  std::vector<Vector> out;
  Matrix cols(family.n, std::max(0, family.R() - 1));
  for (int r = 1; r < family.R(); ++r) {
    const Vector bx = family.matrices[static_cast<std::size_t>(r)].cast<double>() * (inv * x);
    Vector v = bx - x.dot(bx) * x;
    cols.col(r - 1) = v;
    out.push_back(std::move(v));
  }
  if (numerical_rank(cols) != family.R() - 1) throw CertificateFailure("tangent fields are linearly dependent");
  return out;
}

ManifoldChart chart_from_family(const MatrixFamily& family, const Rational& eps0) {
  std::vector<SmoothMap> maps;
  for (const IntMatrix& a : family.matrices) {
    std::ostringstream text;
    bool any = false;
    for (int i = 0; i < family.n; ++i) {
      for (int j = i; j < family.n; ++j) {
        const long long c = a(i, j);
        if (c == 0) continue;
        text << (any ? " + " : "");
        if (i == j) {
          text << "(" << c << "/2)*x" << i + 1 << "^2";
        } else {
          text << "(" << c << ")*x" << i + 1 << "*x" << j + 1;
        }
        any = true;
      }
    }
    maps.push_back(SmoothMap::parse(any ? text.str() : "0", family.n));
  }
  return ManifoldChart(std::vector<Rational>(static_cast<std::size_t>(family.n), Rational(0)), eps0, std::move(maps));
}

}  // namespace ratnear
