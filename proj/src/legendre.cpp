#include "ratnear/legendre.hpp"

#include "ratnear/curvature.hpp"
#include "ratnear/error.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace ratnear {

DifferentiableFunction as_function(const SmoothMap& map) {
  return {map.arity(), [map](const Vector& x) { return map.value(x); },
          [map](const Vector& x) { return map.gradient(x); }, [map](const Vector& x) { return map.hessian(x); }};
}

LegendreChart::LegendreChart(const SmoothMap& f, Box domain, LegendreOptions options)
    : LegendreChart(as_function(f), std::move(domain), options) {}

LegendreChart::LegendreChart(DifferentiableFunction f, Box domain, LegendreOptions options)
    : f_(std::move(f)), domain_(std::move(domain)), options_(options) {
  const int n = domain_.dimension();
  if (n != f_.arity) throw DimensionError("domain dimension does not match the map arity");
  if (!(domain_.radius > 0)) throw DomainError("domain radius must be positive");
  cache_x_ = box_samples(domain_, std::max(2, options_.cache_density), options_.cache_limit, 0x1e9e);
  lower_ = Vector::Constant(n, std::numeric_limits<double>::infinity());
  upper_ = Vector::Constant(n, -std::numeric_limits<double>::infinity());
  double max_det = 0;
  min_det_ = std::numeric_limits<double>::infinity();
  cache_y_.reserve(cache_x_.size());
  for (const Vector& x : cache_x_) {
    Vector y = f_.gradient(x);
    lower_ = lower_.cwiseMin(y);
    upper_ = upper_.cwiseMax(y);
    cache_y_.push_back(std::move(y));
    const double d = std::abs(f_.hessian(x).determinant());
    min_det_ = std::min(min_det_, d);
    max_det = std::max(max_det, d);
  }
  if (!(min_det_ > options_.degeneracy_tolerance * max_det)) {
    throw DomainError("Hessian determinant vanishes on the domain");
  }
}

double LegendreChart::image_bound() const { return std::max(lower_.cwiseAbs().maxCoeff(), upper_.cwiseAbs().maxCoeff()); }

Vector LegendreChart::nearest_cached(const Vector& y) const {
  std::size_t best = 0;
  double dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cache_y_.size(); ++i) {
    const double d = linf_norm(cache_y_[i] - y);
    if (d < dist) {
      dist = d;
      best = i;
    }
  }
  return cache_x_[best];
}

Inversion LegendreChart::try_invert_gradient(const Vector& y) const {
  if (y.size() != dimension()) throw DimensionError("point dimension does not match the chart");
  auto residual_at = [&](const Vector& x, Vector& r) {
    try {
      r = f_.gradient(x) - y;
      const double v = linf_norm(r);
      return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    } catch (const DomainError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  Inversion out;
  Vector best_x;
  double best = std::numeric_limits<double>::infinity();
  for (const Vector& start : {nearest_cached(y), domain_.center}) {
    Vector x = start;
    Vector r;
    double res = residual_at(x, r);
    int it = 0;
    for (; it < options_.max_iterations && res > options_.tolerance; ++it) {
      Eigen::PartialPivLU<Matrix> lu(f_.hessian(x));
      const Vector step = lu.solve(r);
      if (!step.allFinite()) break;
      double alpha = 1;
      bool moved = false;
      for (int h = 0; h <= options_.max_halvings; ++h, alpha /= 2) {
        Vector trial = x - alpha * step;
        Vector rt;
        const double rest = residual_at(trial, rt);
        if (rest < res) {
          x = std::move(trial);
          r = std::move(rt);
          res = rest;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    out.iterations += it;
    if (res < best) {
      best = res;
      best_x = x;
    }
    if (best <= options_.tolerance) break;
  }
  out.x = best_x;
  out.residual = best;
  if (best > options_.tolerance) {
    out.status = InversionStatus::NotConverged;
  } else if (!domain_.contains_strictly(best_x)) {
    out.status = InversionStatus::OutsideImage;
  } else {
    out.status = InversionStatus::Converged;
  }
  return out;
}

Vector LegendreChart::invert_gradient(const Vector& y) const {
  Inversion inv = try_invert_gradient(y);
  switch (inv.status) {
    case InversionStatus::Converged:
      return inv.x;
    case InversionStatus::OutsideImage:
      throw OutsideImageError("point lies outside the gradient image of the domain");
    case InversionStatus::NotConverged:
      break;
  }
  throw ConvergenceError("Newton inversion did not converge", inv.residual);
}

double LegendreChart::value(const Vector& y) const {
  const Vector x = invert_gradient(y);
  return x.dot(y) - f_.value(x);
}

Matrix LegendreChart::hessian(const Vector& y) const {
  const Matrix h = f_.hessian(invert_gradient(y));
  Eigen::JacobiSVD<Matrix> svd(h);
  const auto& s = svd.singularValues();
  const double smallest = s[s.size() - 1];
  if (!(smallest > 0) || s[0] / smallest > options_.max_condition) {
    throw IllConditionedError("Hessian condition number exceeds the limit");
  }
  return h.inverse();
}

DifferentiableFunction LegendreChart::conjugate() const {
  auto self = std::make_shared<const LegendreChart>(*this);
  return {dimension(), [self](const Vector& y) { return self->value(y); },
          [self](const Vector& y) { return self->invert_gradient(y); },
          [self](const Vector& y) { return self->hessian(y); }};
}

RoundTripStats round_trip(const LegendreChart& chart, std::size_t samples, std::uint64_t seed) {
  const Box& u = chart.domain();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  RoundTripStats stats;
  const double diam = 2 * u.radius;
  double sum = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    Vector x(u.dimension());
    // stay off the boundary, where the strict membership test can reject
    for (int i = 0; i < x.size(); ++i) x[i] = u.center[i] + 0.999 * u.radius * unit(rng);
    const Vector y = chart.source().gradient(x);
    const Inversion inv = chart.try_invert_gradient(y);
    ++stats.samples;
    if (inv.status != InversionStatus::Converged) {
      ++stats.failures;
      continue;
    }
    const double err = linf_norm(inv.x - x) / diam;
    stats.max_error = std::max(stats.max_error, err);
    stats.max_residual = std::max(stats.max_residual, inv.residual);
    sum += err;
  }
  const std::size_t ok = stats.samples - stats.failures;
  stats.mean_error = ok ? sum / static_cast<double>(ok) : 0;
  return stats;
}

BiLipschitzReport bilipschitz_ratios(const LegendreChart& chart, std::size_t pairs, std::uint64_t seed) {
  const Box& u = chart.domain();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  BiLipschitzReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  auto draw = [&] {
    Vector x(u.dimension());
    for (int i = 0; i < x.size(); ++i) x[i] = u.center[i] + u.radius * unit(rng);
    return x;
  };
  for (std::size_t p = 0; p < pairs; ++p) {
    const Vector a = draw();
    const Vector b = draw();
    const double dx = linf_norm(a - b);
    const double dy = linf_norm(chart.source().gradient(a) - chart.source().gradient(b));
    if (dx == 0) continue;
    const double ratio = dy > 0 ? dx / dy : std::numeric_limits<double>::infinity();
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    ++rep.pairs;
  }
  rep.bounded = rep.pairs > 0 && std::isfinite(rep.max_ratio) && rep.min_ratio > 0;
  return rep;
}

}  // namespace ratnear
