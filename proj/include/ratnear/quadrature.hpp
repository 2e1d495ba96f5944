#pragma once

#include <functional>
#include <vector>

namespace ratnear {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rule with the given number of points; supported orders are 7, 10, 14, 20 and 30.
const GaussRule& gauss_legendre(int points);

/// Tensor panel grid along one axis: `panels` equal panels on [lo, hi], each
/// carrying `points` Gauss nodes. Nodes and weights are already scaled.
GaussRule panel_rule(double lo, double hi, int panels, int points);

/// Composite Gauss-Legendre integral of a 1-D function.
double integrate_1d(const std::function<double(double)>& f, double lo, double hi, int panels, int points = 20);

}  // namespace ratnear
