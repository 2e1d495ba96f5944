#include "ratnear/kernels.hpp"

#include "ratnear/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ratnear {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kReseed = 32;

double wrap(double theta) { return theta - std::round(theta); }

// Calls visit(j, e(j theta)) for j = 0..J, stepping by complex rotation and
// re-seeding from sincos every kReseed steps.
template <class Visit>
void for_each_harmonic(int J, double theta, Visit&& visit) {
  const double t = wrap(theta);
  const std::complex<double> step = std::polar(1.0, 2 * kPi * t);
  std::complex<double> z = 1.0;
  for (int j = 0; j <= J; ++j) {
    if (j % kReseed == 0) z = std::polar(1.0, 2 * kPi * wrap(j * t));
    visit(j, z);
    z *= step;
  }
}

}  // namespace

std::complex<double> eval_trig_poly_complex(const TrigPoly& poly, double theta) {
  if (poly.coeffs.size() != static_cast<std::size_t>(2 * poly.degree + 1)) throw DimensionError("trigonometric polynomial has inconsistent size");
  std::complex<double> sum = 0;
  for_each_harmonic(poly.degree, theta, [&](int j, std::complex<double> z) {
    sum += poly[j] * z;
    if (j > 0) sum += poly[-j] * std::conj(z);
  });
  return sum;
}

double eval_trig_poly(const TrigPoly& poly, double theta) {
  const std::complex<double> v = eval_trig_poly_complex(poly, theta);
  double l1 = 0;
  for (const auto& c : poly.coeffs) l1 += std::abs(c);
  if (std::abs(v.imag()) > 1e-12 * std::max(1.0, l1)) throw DomainError("trigonometric polynomial is not real-valued");
  return v.real();
}

double interval_indicator(double delta, double theta) { return std::abs(wrap(theta)) <= delta ? 1.0 : 0.0; }

// ---------------------------------------------------------------------------

SelbergPair selberg_pair(double delta, int degree) {
  if (!(delta > 0 && delta <= 0.5)) throw DomainError("delta must lie in (0, 1/2]");
  if (degree < 1) throw DomainError("degree J must be at least 1");
  const int J = degree;
  const double inv = 1.0 / (J + 1);
  SelbergPair pair;
  pair.delta_ = delta;
  pair.degree_ = J;
  pair.plus_.degree = J;
  pair.minus_.degree = J;
  pair.plus_.coeffs.assign(static_cast<std::size_t>(2 * J + 1), 0.0);
  pair.minus_.coeffs.assign(static_cast<std::size_t>(2 * J + 1), 0.0);
  pair.plus_cos_.assign(static_cast<std::size_t>(J + 1), 0.0);
  pair.minus_cos_.assign(static_cast<std::size_t>(J + 1), 0.0);
  pair.bounds_.assign(static_cast<std::size_t>(J + 1), 0.0);

  pair.plus_cos_[0] = 2 * delta + inv;
  pair.minus_cos_[0] = 2 * delta - inv;
  pair.bounds_[0] = inv + 2 * delta;
  for (int j = 1; j <= J; ++j) {
    const double u = j * inv;
    // Vaaler: psi(x) ~ sum_j a_j sin(2 pi j x), error majorized by the Fejer kernel
    const double a = inv * (-(1 - u) / std::tan(kPi * u) - 1 / kPi);
    const double fejer = inv * (1 - u);
    const double c = std::cos(2 * kPi * j * delta);
    const double s = std::sin(2 * kPi * j * delta);
    pair.plus_cos_[static_cast<std::size_t>(j)] = fejer * c - a * s;
    pair.minus_cos_[static_cast<std::size_t>(j)] = -fejer * c - a * s;
    pair.bounds_[static_cast<std::size_t>(j)] = inv + std::min(2 * delta, 1 / (kPi * j));
  }
  for (int j = -J; j <= J; ++j) {
    pair.plus_.coeffs[static_cast<std::size_t>(j + J)] = pair.plus_cos_[static_cast<std::size_t>(std::abs(j))];
    pair.minus_.coeffs[static_cast<std::size_t>(j + J)] = pair.minus_cos_[static_cast<std::size_t>(std::abs(j))];
  }
  return pair;
}

double SelbergPair::plus_at(double theta) const {
  double sum = 0;
  for_each_harmonic(degree_, theta, [&](int j, std::complex<double> z) {
    sum += (j == 0 ? 1.0 : 2.0) * plus_cos_[static_cast<std::size_t>(j)] * z.real();
  });
  return sum;
}

double SelbergPair::minus_at(double theta) const {
  double sum = 0;
  for_each_harmonic(degree_, theta, [&](int j, std::complex<double> z) {
    sum += (j == 0 ? 1.0 : 2.0) * minus_cos_[static_cast<std::size_t>(j)] * z.real();
  });
  return sum;
}

std::vector<double> selberg_check_grid(double delta, int degree, int uniform_points, int clustered_points) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(uniform_points + clustered_points + 4));
  for (int i = 0; i < uniform_points; ++i) grid.push_back(-0.5 + static_cast<double>(i) / uniform_points);
  const double width = 2.0 / degree;
  const int per_side = std::max(1, clustered_points / 2);
  for (double edge : {-delta, delta}) {
    for (int i = 0; i < per_side; ++i) {
      const double offset = width * (2.0 * i / std::max(1, per_side - 1) - 1.0);
      grid.push_back(edge + offset);
    }
    grid.push_back(edge);
    grid.push_back(std::nextafter(edge, 1.0));
    grid.push_back(std::nextafter(edge, -1.0));
  }
  return grid;
}

SandwichReport check_sandwich(const SelbergPair& pair, const std::vector<double>& grid, double tolerance) {
  SandwichReport report;
  report.points = grid.size();
  double worst = 0;
  for (double theta : grid) {
    const double chi = interval_indicator(pair.delta(), theta);
    const double lower = pair.minus_at(theta) - chi;
    const double upper = chi - pair.plus_at(theta);
    report.worst_lower_violation = std::max(report.worst_lower_violation, lower);
    report.worst_upper_violation = std::max(report.worst_upper_violation, upper);
    if (std::max(lower, upper) > worst) {
      worst = std::max(lower, upper);
      report.worst_theta = theta;
    }
  }
  report.pass = worst <= tolerance;
  return report;
}

// ---------------------------------------------------------------------------

double fejer_eval(int D, double theta) {
  if (D < 1) throw DomainError("Fejer degree must be at least 1");
  const double t = wrap(theta);
  if (t == 0.0) return 1.0;
  const double ratio = std::sin(kPi * D * t) / (D * std::sin(kPi * t));
  return ratio * ratio;
}

double fejer_eval_sum(int D, double theta) {
  if (D < 1) throw DomainError("Fejer degree must be at least 1");
  std::complex<double> sum = 0;
  for_each_harmonic(D, theta, [&](int j, std::complex<double> z) {
    if (j >= 1) sum += z;
  });
  return std::norm(sum) / (static_cast<double>(D) * D);
}

TrigPoly fejer_coefficients(int D) {
  if (D < 1) throw DomainError("Fejer degree must be at least 1");
  TrigPoly p;
  p.degree = D;
  p.coeffs.resize(static_cast<std::size_t>(2 * D + 1));
  const double d2 = static_cast<double>(D) * D;
  for (int d = -D; d <= D; ++d) p.coeffs[static_cast<std::size_t>(d + D)] = (D - std::abs(d)) / d2;
  return p;
}

FejerMajorantReport fejer_majorizes_indicator(int D, double T, int uniform_points) {
  if (!(T >= 2)) throw DomainError("T must be at least 2");
  if (D != static_cast<int>(std::floor(T / 2))) throw DomainError("D must equal floor(T/2)");
  const double width = 1.0 / T;
  std::vector<double> grid;
  for (int i = 0; i < uniform_points; ++i) grid.push_back(-0.5 + static_cast<double>(i) / uniform_points);
  // dense coverage of the short interval and its edges
  const int inside = 1000;
  for (int i = 0; i <= inside; ++i) {
    const double x = width * i / inside;
    grid.push_back(x);
    grid.push_back(-x);
  }
  for (int i = 1; i <= 100; ++i) {
    const double offset = width * 1e-3 * i / 100;
    for (double s : {1.0, -1.0}) {
      grid.push_back(s * (width - offset));
      grid.push_back(s * (width + offset));
    }
  }
  FejerMajorantReport report;
  report.points = grid.size();
  report.worst_margin = std::numeric_limits<double>::infinity();
  report.min_inside = std::numeric_limits<double>::infinity();
  const double scale = kPi * kPi / 4;
  for (double theta : grid) {
    const double f = fejer_eval(D, theta);
    const double chi = interval_indicator(width, theta);
    const double margin = scale * f - chi;
    if (margin < report.worst_margin) {
      report.worst_margin = margin;
      report.worst_theta = theta;
    }
    const double dist = std::abs(wrap(theta));
    if (dist > 0 && dist <= width) report.min_inside = std::min(report.min_inside, f);
  }
  report.pass = report.worst_margin >= 0;
  return report;
}

}  // namespace ratnear
