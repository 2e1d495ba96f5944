#include "ratnear/curvature.hpp"

#include "ratnear/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace ratnear {

Matrix pencil_hessian(const ManifoldChart& chart, const Vector& t, const Vector& x) {
  if (t.size() != chart.R()) throw DimensionError("pencil coefficient vector must have R entries");
  if (x.size() != chart.n()) throw DimensionError("point must have n entries");
  Matrix h = Matrix::Zero(chart.n(), chart.n());
  for (int r = 0; r < chart.R(); ++r) {
    if (t[r] != 0.0) h += t[r] * chart.map(r).hessian(x);
  }
  return h;
}

double pencil_hessian_det(const ManifoldChart& chart, const Vector& t, const Vector& x) {
  return pencil_hessian(chart, t, x).determinant();
}

Signature signature(const Matrix& symmetric, double relative_threshold) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric, Eigen::EigenvaluesOnly);
  const Vector& ev = solver.eigenvalues();
  const double scale = ev.size() == 0 ? 0.0 : ev.cwiseAbs().maxCoeff();
  Signature s;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) <= relative_threshold * scale || scale == 0.0) {
      ++s.zero_eigenvalues;
    } else {
      s.value += ev[i] > 0 ? 1 : -1;
    }
  }
  return s;
}

std::vector<Vector> cube_boundary_grid(int R, int density) {
  if (R < 1) throw DomainError("R must be positive");
  if (density < 2) throw DomainError("grid density must be at least 2");
  std::vector<double> values(static_cast<std::size_t>(density));
  for (int k = 0; k < density; ++k) values[static_cast<std::size_t>(k)] = 1.0 - 2.0 * k / (density - 1);
  std::vector<Vector> out;
  const int free = R - 1;
  std::size_t per_face = 1;
  for (int i = 0; i < free; ++i) per_face *= static_cast<std::size_t>(density);
  out.reserve(per_face * 2 * static_cast<std::size_t>(R));
  for (int r = 0; r < R; ++r) {
    for (double sign : {1.0, -1.0}) {
      std::vector<int> idx(static_cast<std::size_t>(free), 0);
      for (std::size_t c = 0; c < per_face; ++c) {
        Vector t(R);
        std::size_t k = 0;
        for (int s = 0; s < R; ++s) {
          if (s == r) {
            t[s] = sign;
          } else {
            t[s] = values[static_cast<std::size_t>(idx[k++])];
          }
        }
        out.push_back(t);
        for (int d = free - 1; d >= 0; --d) {
          if (++idx[static_cast<std::size_t>(d)] < density) break;
          idx[static_cast<std::size_t>(d)] = 0;
        }
      }
    }
  }
  return out;
}

std::vector<Vector> box_samples(const Box& box, int density, std::size_t max_samples, std::uint64_t seed) {
  const int n = box.dimension();
  if (density < 1) throw DomainError("grid density must be positive");
  double total = std::pow(static_cast<double>(density), n);
  std::vector<Vector> out;
  if (density == 1) {
    out.push_back(box.center);
    return out;
  }
  if (total <= static_cast<double>(max_samples)) {
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    const auto count = static_cast<std::size_t>(total);
    out.reserve(count);
    for (std::size_t c = 0; c < count; ++c) {
      Vector x(n);
      for (int i = 0; i < n; ++i) {
        x[i] = box.center[i] + box.radius * (-1.0 + 2.0 * idx[static_cast<std::size_t>(i)] / (density - 1));
      }
      out.push_back(x);
      for (int d = n - 1; d >= 0; --d) {
        if (++idx[static_cast<std::size_t>(d)] < density) break;
        idx[static_cast<std::size_t>(d)] = 0;
      }
    }
    return out;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  out.push_back(box.center);
  while (out.size() < max_samples) {
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = box.center[i] + box.radius * unit(rng);
    out.push_back(x);
  }
  return out;
}

namespace {

bool constant_hessians(const ManifoldChart& chart) {
  return std::all_of(chart.maps().begin(), chart.maps().end(),
                     [](const SmoothMap& f) { return f.has_constant_hessian(); });
}

double pencil_det_from(const std::vector<Matrix>& hessians, const Vector& t) {
  Matrix h = Matrix::Zero(hessians.front().rows(), hessians.front().cols());
  for (std::size_t r = 0; r < hessians.size(); ++r) {
    if (t[static_cast<Eigen::Index>(r)] != 0.0) h += t[static_cast<Eigen::Index>(r)] * hessians[r];
  }
  return h.determinant();
}

std::vector<Matrix> hessians_at(const ManifoldChart& chart, const Vector& x) {
  std::vector<Matrix> hs;
  hs.reserve(static_cast<std::size_t>(chart.R()));
  for (const SmoothMap& f : chart.maps()) hs.push_back(f.hessian(x));
  return hs;
}

int face_of(const Vector& t) {
  for (Eigen::Index r = 0; r < t.size(); ++r) {
    if (std::abs(t[r]) == 1.0) return static_cast<int>(r);
  }
  return 0;
}

// Compass search on |det| over the free t coordinates of the witness face
// and, when the Hessians vary, over x within the sampling box.
void refine_minimum(const ManifoldChart& chart, const Box& xbox, bool vary_x, int density, int iterations,
                    Vector& t, Vector& x, double& best) {
  const int face = face_of(t);
  const int R = chart.R();
  const int n = chart.n();
  std::vector<Matrix> hs = hessians_at(chart, x);
  auto objective = [&](const Vector& tt, const Vector& xx, std::vector<Matrix>& cache, bool x_changed) {
    if (x_changed) cache = hessians_at(chart, xx);
    return std::abs(pencil_det_from(cache, tt));
  };
  double t_step = 2.0 / (density - 1);
  double x_step = vary_x ? xbox.radius / 4 : 0.0;
  for (int it = 0; it < iterations && (t_step > 1e-12 || x_step > 1e-12); ++it) {
    bool improved = false;
    for (int s = 0; s < R && !improved; ++s) {
      if (s == face) continue;
      for (double dir : {1.0, -1.0}) {
        Vector tt = t;
        tt[s] = std::clamp(tt[s] + dir * t_step, -1.0, 1.0);
        const double v = objective(tt, x, hs, false);
        if (v < best) {
          best = v;
          t = tt;
          improved = true;
          break;
        }
      }
    }
    if (vary_x) {
      for (int i = 0; i < n && !improved; ++i) {
        for (double dir : {1.0, -1.0}) {
          Vector xx = x;
          xx[i] = std::clamp(xx[i] + dir * x_step, xbox.center[i] - xbox.radius, xbox.center[i] + xbox.radius);
          std::vector<Matrix> trial;
          const double v = objective(t, xx, trial, true);
          if (v < best) {
            best = v;
            x = xx;
            hs = std::move(trial);
            improved = true;
            break;
          }
        }
      }
    }
    if (!improved) {
      t_step /= 2;
      x_step /= 2;
    }
  }
}

}  // namespace

CurvatureReport verify_condition1(const ManifoldChart& chart, int t_grid_density, double x_radius,
                                  const CurvatureOptions& options) {
  if (t_grid_density < 8) throw DomainError("t_grid_density must be at least 8");
  if (!(x_radius >= 0)) throw DomainError("x_radius must be non-negative");
  const bool constant = constant_hessians(chart);
  const Box xbox{chart.x0(), x_radius};
  const int x_density = constant || x_radius == 0 ? 1 : options.x_grid_density;
  const std::vector<Vector> xs = box_samples(xbox, x_density, options.max_x_samples, options.seed);
  const std::vector<Vector> ts = cube_boundary_grid(chart.R(), t_grid_density);

  CurvatureReport report;
  report.t_grid_density = t_grid_density;
  report.x_grid_density = x_density;
  report.x_radius = x_radius;
  double best = std::numeric_limits<double>::infinity();
  double worst = 0;
  std::size_t best_t = 0;
  std::size_t best_x = 0;
  // signature bookkeeping per connected component of the t sample set
  int sig_pos = 0;
  int sig_neg = 0;
  bool have_pos = false;
  bool have_neg = false;

  for (std::size_t xi = 0; xi < xs.size(); ++xi) {
    const std::vector<Matrix> hs = hessians_at(chart, xs[xi]);
    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
      const Vector& t = ts[ti];
      Matrix h = Matrix::Zero(chart.n(), chart.n());
      for (int r = 0; r < chart.R(); ++r) {
        if (t[r] != 0.0) h += t[r] * hs[static_cast<std::size_t>(r)];
      }
      const double d = std::abs(h.determinant());
      if (d < best) {
        best = d;
        best_t = ti;
        best_x = xi;
      }
      worst = std::max(worst, d);
      const Signature s = signature(h);
      const bool negative_component = chart.R() == 1 && t[0] < 0;
      int& slot = negative_component ? sig_neg : sig_pos;
      bool& have = negative_component ? have_neg : have_pos;
      if (s.zero_eigenvalues > 0) {
        report.signature_constant = false;
      } else if (!have) {
        slot = s.value;
        have = true;
      } else if (slot != s.value) {
        report.signature_constant = false;
      }
      ++report.samples;
    }
  }
  report.signature = sig_pos;

  Vector t = ts[best_t];
  Vector x = xs[best_x];
  refine_minimum(chart, xbox, !constant && x_radius > 0, t_grid_density, options.refine_iterations, t, x, best);
  report.c1 = best;
  report.c2 = worst;
  report.min_witness_t = t;
  report.min_witness_x = x;
  report.min_witness_det = pencil_hessian_det(chart, t, x);
  report.condition1_holds = worst > 0 && best > options.relative_tolerance * worst;
  return report;
}

std::vector<Vector> box_boundary_samples(const Box& box, int samples) {
  const int n = box.dimension();
  std::vector<Vector> out;
  if (n == 1) {
    for (double s : {-1.0, 1.0}) {
      Vector x(1);
      x[0] = box.center[0] + s * box.radius;
      out.push_back(x);
    }
    return out;
  }
  const double per_face = std::max(1.0, samples / (2.0 * n));
  const int m = std::max(2, static_cast<int>(std::lround(std::pow(per_face, 1.0 / (n - 1)))));
  std::size_t face_points = 1;
  for (int i = 0; i < n - 1; ++i) face_points *= static_cast<std::size_t>(m);
  for (int k = 0; k < n; ++k) {
    for (double s : {-1.0, 1.0}) {
      std::vector<int> idx(static_cast<std::size_t>(n - 1), 0);
      for (std::size_t c = 0; c < face_points; ++c) {
        Vector x(n);
        int j = 0;
        for (int i = 0; i < n; ++i) {
          if (i == k) {
            x[i] = box.center[i] + s * box.radius;
          } else {
            x[i] = box.center[i] + box.radius * (-1.0 + 2.0 * idx[static_cast<std::size_t>(j++)] / (m - 1));
          }
        }
        out.push_back(x);
        for (int d = n - 2; d >= 0; --d) {
          if (++idx[static_cast<std::size_t>(d)] < m) break;
          idx[static_cast<std::size_t>(d)] = 0;
        }
      }
    }
  }
  return out;
}

double boundary_image_distance(const ManifoldChart& chart, const Vector& t, double outer_radius,
                               double inner_radius, int samples) {
  if (t.size() != chart.R()) throw DimensionError("pencil coefficient vector must have R entries");
  auto images = [&](double radius) {
    std::vector<Vector> pts = box_boundary_samples(Box{chart.x0(), radius}, samples);
    for (Vector& p : pts) {
      Vector g = Vector::Zero(chart.n());
      for (int r = 0; r < chart.R(); ++r) {
        if (t[r] != 0.0) g += t[r] * chart.map(r).gradient(p);
      }
      p = g;
    }
    return pts;
  };
  const std::vector<Vector> outer = images(outer_radius);
  const std::vector<Vector> inner = images(inner_radius);
  double best = std::numeric_limits<double>::infinity();
  for (const Vector& a : outer) {
    for (const Vector& b : inner) best = std::min(best, linf_norm(a - b));
  }
  return best;
}

CurvatureReport compute_localization(const ManifoldChart& chart, CurvatureReport report,
                                     const LocalizationOptions& options) {
  if (!report.condition1_holds) throw CurvatureRefusal("localization requires a chart satisfying the curvature condition");
  const double eps0 = chart.eps0();
  const std::vector<Vector> ts = cube_boundary_grid(chart.R(), std::max(report.t_grid_density, 8));
  auto margin_holds = [&](double radius) {
    const std::vector<Vector> xs =
        box_samples(Box{chart.x0(), radius}, std::max(report.x_grid_density, 5), 1024, options.seed);
    for (const Vector& x : xs) {
      const std::vector<Matrix> hs = hessians_at(chart, x);
      for (const Vector& t : ts) {
        if (std::abs(pencil_det_from(hs, t)) < report.c1 / 2) return false;
      }
    }
    return true;
  };
  double tau = eps0;
  if (!constant_hessians(chart) && !margin_holds(eps0)) {
    double lo = 0;
    double hi = eps0;
    for (int step = 0; step < options.bisection_steps; ++step) {
      const double mid = 0.5 * (lo + hi);
      if (margin_holds(mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (lo <= 0) throw CurvatureRefusal("no positive radius keeps the pencil determinant above c1/2");
    tau = lo;
  }
  report.tau = tau;
  report.kappa = tau / 2;
  report.rho_prime = (report.tau - report.kappa) / 2;

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> face(0, 2 * chart.R() - 1);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double min_distance = std::numeric_limits<double>::infinity();
  for (int k = 0; k < options.t_samples; ++k) {
    Vector t(chart.R());
    const int f = face(rng);
    for (int r = 0; r < chart.R(); ++r) t[r] = unit(rng);
    t[f / 2] = f % 2 == 0 ? 1.0 : -1.0;
    min_distance = std::min(min_distance,
                            boundary_image_distance(chart, t, report.tau, report.kappa, options.boundary_samples));
  }
  report.rho = min_distance / 2;
  report.localized = report.rho > 0;
  if (!report.localized) throw CurvatureRefusal("boundary images touch; no separation constant found");
  return report;
}

}  // namespace ratnear
