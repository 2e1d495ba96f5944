#include "ratnear/quadrature.hpp"

#include "ratnear/error.hpp"

#include <boost/math/quadrature/gauss.hpp>

namespace ratnear {

namespace {

template <unsigned Points>
GaussRule build_rule() {
  using Gauss = boost::math::quadrature::gauss<double, Points>;
  const auto& abscissa = Gauss::abscissa();
  const auto& weights = Gauss::weights();
  GaussRule rule;
  // boost stores the non-negative half of a symmetric rule
  for (std::size_t i = abscissa.size(); i-- > 0;) {
    if (abscissa[i] == 0.0) continue;
    rule.nodes.push_back(-abscissa[i]);
    rule.weights.push_back(weights[i]);
  }
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    rule.nodes.push_back(abscissa[i]);
    rule.weights.push_back(weights[i]);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int points) {
  static const GaussRule r7 = build_rule<7>();
  static const GaussRule r10 = build_rule<10>();
  static const GaussRule r14 = build_rule<14>();
  static const GaussRule r20 = build_rule<20>();
  static const GaussRule r30 = build_rule<30>();
  switch (points) {
    case 7:
      return r7;
    case 10:
      return r10;
    case 14:
      return r14;
    case 20:
      return r20;
    case 30:
      return r30;
    default:
      throw DomainError("unsupported Gauss-Legendre order " + std::to_string(points));
  }
}

GaussRule panel_rule(double lo, double hi, int panels, int points) {
  if (panels < 1) throw DomainError("panel count must be positive");
  const GaussRule& base = gauss_legendre(points);
  GaussRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * base.nodes.size());
  rule.weights.reserve(rule.nodes.capacity());
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * width;
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      rule.nodes.push_back(mid + 0.5 * width * base.nodes[i]);
      rule.weights.push_back(0.5 * width * base.weights[i]);
    }
  }
  return rule;
}

double integrate_1d(const std::function<double(double)>& f, double lo, double hi, int panels, int points) {
  const GaussRule rule = panel_rule(lo, hi, panels, points);
  double sum = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

}  // namespace ratnear
