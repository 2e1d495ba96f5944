#pragma once

#include <complex>
#include <vector>

namespace ratnear {

/// Fourier coefficients c_{-J..J} of a trigonometric polynomial
/// sum_j c_j e(j theta), stored at index j + J.
struct TrigPoly {
  int degree = 0;
  std::vector<std::complex<double>> coeffs;

  const std::complex<double>& operator[](int j) const { return coeffs.at(static_cast<std::size_t>(j + degree)); }
};

/// sum_j c_j e(j theta); throws if the imaginary part exceeds 1e-12
/// (times the coefficient l1 norm) since callers expect real polynomials.
double eval_trig_poly(const TrigPoly& poly, double theta);
std::complex<double> eval_trig_poly_complex(const TrigPoly& poly, double theta);

/// 1 if the distance from theta to the nearest integer is <= delta.
double interval_indicator(double delta, double theta);

/// Degree-J majorant S+ and minorant S- of the indicator of [-delta, delta]
/// on R/Z, built from Vaaler's approximation to the sawtooth. Both are
/// real and even; their mean values are 2 delta +- 1/(J+1).
class SelbergPair {
 public:
  double delta() const noexcept { return delta_; }
  int degree() const noexcept { return degree_; }
  const TrigPoly& plus() const noexcept { return plus_; }
  const TrigPoly& minus() const noexcept { return minus_; }
  /// b_j = 1/(J+1) + min(2 delta, 1/(pi |j|)), j = 0..J.
  const std::vector<double>& bounds() const noexcept { return bounds_; }

  /// Fast real evaluation through the cosine series.
  double plus_at(double theta) const;
  double minus_at(double theta) const;

  friend SelbergPair selberg_pair(double delta, int degree);

 private:
  double delta_ = 0;
  int degree_ = 0;
  TrigPoly plus_;
  TrigPoly minus_;
  std::vector<double> bounds_;
  std::vector<double> plus_cos_;   // real coefficient of e(j theta), j = 0..J
  std::vector<double> minus_cos_;
};

/// Requires 0 < delta <= 1/2 and J >= 1.
SelbergPair selberg_pair(double delta, int degree);

/// Fejer kernel F_D(theta) = (sin(pi D theta) / (D sin(pi theta)))^2, with
/// the value 1 at integers.
double fejer_eval(int D, double theta);
/// D^{-2} |sum_{d=1}^{D} e(d theta)|^2.
double fejer_eval_sum(int D, double theta);
TrigPoly fejer_coefficients(int D);

struct SandwichReport {
  bool pass = true;
  double worst_lower_violation = 0;  // max of S-(theta) - chi(theta)
  double worst_upper_violation = 0;  // max of chi(theta) - S+(theta)
  double worst_theta = 0;
  std::size_t points = 0;
};

/// Uniform grid on [-1/2, 1/2) plus points clustered within 2/J of +-delta.
std::vector<double> selberg_check_grid(double delta, int degree, int uniform_points = 10000, int clustered_points = 100);

SandwichReport check_sandwich(const SelbergPair& pair, const std::vector<double>& grid, double tolerance = 1e-12);

struct FejerMajorantReport {
  bool pass = true;
  double worst_margin = 0;  // min over the grid of (pi^2/4) F_D - chi_{1/T}
  double worst_theta = 0;
  double min_inside = 0;    // min of F_D on 0 < |theta| <= 1/T
  std::size_t points = 0;
};

/// Checks chi_{1/T}(theta) <= (pi^2/4) F_D(theta) on a dense grid. Requires
/// T >= 2 and D = floor(T/2).
FejerMajorantReport fejer_majorizes_indicator(int D, double T, int uniform_points = 10000);

}  // namespace ratnear
