#pragma once

#include "ratnear/funcspace.hpp"

#include <cstdint>
#include <vector>

namespace ratnear {

/// Sampled verification of the Hessian-pencil condition
///   det H_{t_1 f_1 + ... + t_R f_R}(x) != 0  for all t != 0
/// plus the localization radii derived from it. Values here are grid
/// estimates with local refinement, not certified bounds.
struct CurvatureReport {
  bool condition1_holds = false;
  double c1 = 0;  // min |det| over sampled (t, x), max_r |t_r| = 1
  double c2 = 0;  // max |det| over the same samples
  double tau = 0;
  double kappa = 0;
  double rho = 0;
  double rho_prime = 0;
  int t_grid_density = 0;
  int x_grid_density = 0;
  double x_radius = 0;
  Vector min_witness_t;
  Vector min_witness_x;
  double min_witness_det = 0;  // signed determinant at the witness
  /// Signature of the pencil Hessian over the samples (per connected
  /// component of the t-set: for R = 1 the faces t = +1 and t = -1).
  bool signature_constant = true;
  int signature = 0;  // at the positive first face
  std::size_t samples = 0;
  bool localized = false;
};

struct CurvatureOptions {
  int x_grid_density = 5;
  std::size_t max_x_samples = 2048;
  double relative_tolerance = 1e-8;
  int refine_iterations = 200;
  std::uint64_t seed = 0x5eed;
};

struct LocalizationOptions {
  int boundary_samples = 1000;  // per box boundary, per t
  int t_samples = 100;
  int bisection_steps = 30;
  std::uint64_t seed = 0x10ca1;
};

/// Sum_r t_r H_{f_r}(x).
Matrix pencil_hessian(const ManifoldChart& chart, const Vector& t, const Vector& x);
double pencil_hessian_det(const ManifoldChart& chart, const Vector& t, const Vector& x);

/// Positive minus negative eigenvalues; eigenvalues below
/// threshold * ||H|| count as zero and make the result ambiguous.
struct Signature {
  int value = 0;
  int zero_eigenvalues = 0;
};
Signature signature(const Matrix& symmetric, double relative_threshold = 1e-10);

/// Points t with max_r |t_r| = 1: each of the 2R faces carries a grid of
/// `density` points per free coordinate. Faces come in the order (r=1,+),
/// (r=1,-), (r=2,+), ...; free coordinates run from +1 down to -1.
std::vector<Vector> cube_boundary_grid(int R, int density);

/// x samples in the closed box: a density^n grid, or the center plus
/// deterministic pseudo-random points when that exceeds max_samples.
std::vector<Vector> box_samples(const Box& box, int density, std::size_t max_samples, std::uint64_t seed);

/// Requires t_grid_density >= 8.
CurvatureReport verify_condition1(const ManifoldChart& chart, int t_grid_density, double x_radius,
                                  const CurvatureOptions& options = {});

/// L-infinity distance between grad G_t(boundary of B_outer) and
/// grad G_t(boundary of B_inner), G_t = sum_r t_r f_r, from `samples`
/// boundary points per box.
double boundary_image_distance(const ManifoldChart& chart, const Vector& t, double outer_radius,
                               double inner_radius, int samples);

/// Points on the boundary of an n-box: a grid on each of the 2n faces with
/// about `samples` points in total.
std::vector<Vector> box_boundary_samples(const Box& box, int samples);

/// Fills tau, kappa = tau/2, rho and rho_prime. Requires condition1_holds;
/// throws CurvatureRefusal if no positive tau keeps min |det| >= c1/2.
CurvatureReport compute_localization(const ManifoldChart& chart, CurvatureReport report,
                                     const LocalizationOptions& options = {});

}  // namespace ratnear
