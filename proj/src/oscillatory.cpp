#include "ratnear/oscillatory.hpp"

#include "ratnear/error.hpp"
#include "ratnear/legendre.hpp"
#include "ratnear/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

namespace ratnear {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

Complex cis_turns(double t) {
  t -= std::nearbyint(t);
  return {std::cos(kTwoPi * t), std::sin(kTwoPi * t)};
}

void check_shape(const OscillatoryIntegralSpec& spec) {
  if (static_cast<int>(spec.j.size()) != spec.chart.R()) throw DimensionError("j needs one entry per map");
  if (static_cast<int>(spec.k.size()) != spec.chart.n()) throw DimensionError("k needs one entry per coordinate");
  if (spec.weight.dimension() != spec.chart.n()) throw DimensionError("weight dimension does not match the chart");
  if (spec.q < 1) throw DomainError("q must be positive");
}

// sum_r j_r f_r
SmoothMap frequency_map(const OscillatoryIntegralSpec& spec) {
  std::vector<Rational> c;
  for (long long v : spec.j) c.emplace_back(v);
  return SmoothMap::linear_combination(spec.chart.maps(), c);
}

// Sampled sup of |d/dx_i (q G(x) - q k.x)| over the box.
Vector phase_gradient_sup(const SmoothMap& g, const OscillatoryIntegralSpec& spec, const Box& box) {
  const int n = box.dimension();
  Vector sup = Vector::Zero(n);
  for (const Vector& x : box_samples(box, 17, 4096, 0x9a7e)) {
    const Vector grad = g.gradient(x);
    for (int i = 0; i < n; ++i) {
      const double d = std::abs(static_cast<double>(spec.q) * (grad[i] - static_cast<double>(spec.k[i])));
      sup[i] = std::max(sup[i], d);
    }
  }
  return sup;
}

struct Sum {
  double re = 0, im = 0, cre = 0, cim = 0;
  static void add(double& s, double& c, double v) {
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  void add(Complex z) {
    add(re, cre, z.real());
    add(im, cim, z.imag());
  }
  Complex value() const { return {re + cre, im + cim}; }
};

Complex tensor_sum(const SmoothMap& g, const OscillatoryIntegralSpec& spec, const std::vector<int>& panels,
                   int points, int threads) {
  const int n = spec.chart.n();
  const Box support = spec.weight.support();
  std::vector<GaussRule> rules;
  std::vector<std::vector<double>> wtab(n), ltab(n);
  for (int i = 0; i < n; ++i) {
    rules.push_back(panel_rule(support.center[i] - support.radius, support.center[i] + support.radius,
                               panels[static_cast<std::size_t>(i)], points));
    const GaussRule& r = rules.back();
    for (std::size_t a = 0; a < r.nodes.size(); ++a) {
      wtab[i].push_back(r.weights[a] * spec.weight.axis_factor(i, r.nodes[a]));
      ltab[i].push_back(static_cast<double>(spec.q) * static_cast<double>(spec.k[i]) * r.nodes[a]);
    }
  }
  const double q = static_cast<double>(spec.q);
  const std::size_t rows = rules[0].nodes.size();
  std::vector<Complex> partial(rows);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<std::size_t> idx(static_cast<std::size_t>(n));
    for (std::size_t a; (a = next.fetch_add(1)) < rows;) {
      Sum sum;
      if (wtab[0][a] != 0) {
        std::fill(idx.begin(), idx.end(), 0);
        x[0] = rules[0].nodes[a];
        for (;;) {
          double w = wtab[0][a];
          double lin = ltab[0][a];
          for (int i = 1; i < n; ++i) {
            const std::size_t b = idx[static_cast<std::size_t>(i)];
            x[static_cast<std::size_t>(i)] = rules[i].nodes[b];
            w *= wtab[i][b];
            lin += ltab[i][b];
          }
          if (w != 0) {
            double t = q * g.value(x.data());
            t -= std::nearbyint(t);
            double l = lin - std::nearbyint(lin);
            sum.add(w * cis_turns(t - l));
          }
          int d = n - 1;
          for (; d >= 1; --d) {
            if (++idx[static_cast<std::size_t>(d)] < rules[d].nodes.size()) break;
            idx[static_cast<std::size_t>(d)] = 0;
          }
          if (d < 1) break;
        }
      }
      partial[a] = sum.value();
    }
  };
  const int count = std::max(1, std::min<int>(threads, static_cast<int>(rows)));
  std::vector<std::thread> pool;
  for (int t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  Sum total;
  for (const Complex& z : partial) total.add(z);
  return spec.weight.amplitude() * total.value();
}

double lstsq_slope(const std::vector<double>& x, const std::vector<double>& y, double& intercept) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  intercept = (sy - slope * sx) / m;
  return slope;
}

}  // namespace

double OscillatoryIntegralSpec::lambda() const {
  return static_cast<double>(q) * static_cast<double>(j.empty() ? 0 : j.front());
}

bool OscillatoryIntegralSpec::in_normalized_cone() const {
  if (j.empty() || j.front() < 1) return false;
  return std::all_of(j.begin() + 1, j.end(), [&](long long v) { return v >= 0 && v <= j.front(); });
}

QuadratureResult quad_integral_detailed(const OscillatoryIntegralSpec& spec, const QuadratureOptions& options) {
  check_shape(spec);
  const int n = spec.chart.n();
  QuadratureResult out;
  if (spec.weight.amplitude() == 0) {
    out.panels.assign(static_cast<std::size_t>(n), 0);
    return out;
  }
  const SmoothMap g = frequency_map(spec);
  const Box support = spec.weight.support();
  const Vector sup = phase_gradient_sup(g, spec, support);
  if (sup.maxCoeff() > options.lambda_cap) {
    throw BudgetExceededError("phase frequency exceeds the lambda cap");
  }
  std::vector<int> panels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double osc = 2 * support.radius * sup[i] * 1.1;
    panels[static_cast<std::size_t>(i)] = std::max(options.min_panels, static_cast<int>(std::ceil(osc)));
  }
  const int threads =
      options.threads > 0 ? options.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  for (int refine = 0; refine <= options.max_refinements; ++refine) {
    double nodes = 1;
    for (int p : panels) nodes *= static_cast<double>(p) * options.points;
    if (nodes > options.node_budget) throw BudgetExceededError("quadrature node budget exceeded");
    const Complex fine = tensor_sum(g, spec, panels, options.points, threads);
    const Complex coarse = tensor_sum(g, spec, panels, options.check_points, threads);
    out.value = fine;
    out.error_estimate = std::abs(fine - coarse);
    out.panels = panels;
    out.nodes = nodes;
    if (out.error_estimate <= options.tolerance) return out;
    for (int& p : panels) p *= 2;
  }
  throw BudgetExceededError("quadrature did not reach the requested accuracy");
}

Complex quad_integral(const OscillatoryIntegralSpec& spec, const QuadratureOptions& options) {
  return quad_integral_detailed(spec, options).value;
}

SmoothMap normalized_phase(const OscillatoryIntegralSpec& spec) {
  check_shape(spec);
  if (spec.j.front() == 0) throw DomainError("j_1 must be nonzero");
  std::vector<Rational> c;
  for (long long v : spec.j) c.emplace_back(Rational(v, spec.j.front()));
  return SmoothMap::linear_combination(spec.chart.maps(), c);
}

StationaryPhaseResult stationary_phase_leading(const OscillatoryIntegralSpec& spec, const CurvatureReport& curvature,
                                               const QuadratureOptions& options) {
  check_shape(spec);
  if (!spec.in_normalized_cone()) throw DomainError("j must satisfy j_1 >= 1 and 0 <= j_r <= j_1");
  if (!curvature.condition1_holds) throw CurvatureRefusal("curvature condition not verified");
  const int n = spec.chart.n();
  const SmoothMap f = normalized_phase(spec);
  StationaryPhaseResult out;
  out.lambda = spec.lambda();
  out.quadrature = quad_integral(spec, options);

  const LegendreChart legendre(f, spec.chart.domain());
  Vector y(n);
  for (int i = 0; i < n; ++i) y[i] = static_cast<double>(spec.k[i]) / static_cast<double>(spec.j.front());
  const Inversion inv = legendre.try_invert_gradient(y);
  if (inv.status != InversionStatus::Converged) {
    out.relative_error = out.quadrature == Complex{} ? 0 : std::numeric_limits<double>::infinity();
    return out;
  }
  const Vector& x = inv.x;
  out.stationary_point = x;
  const Matrix h = f.hessian(x);
  const Signature sig = signature(h);
  if (sig.zero_eigenvalues > 0) throw IllConditionedError("signature is ambiguous at the stationary point");
  out.signature = sig.value;
  out.delta = std::abs(h.determinant());
  out.phase = -legendre.value(y);
  out.phase_direct = f.value(x) - y.dot(x);
  const double amp = spec.weight.value(x) / std::sqrt(out.delta) * std::pow(out.lambda, -0.5 * n);
  double turns = out.lambda * out.phase;
  turns -= std::nearbyint(turns);
  out.leading = amp * cis_turns(turns + out.signature / 8.0);
  const double lead = std::abs(out.leading);
  out.relative_error = lead > 0 ? std::abs(out.quadrature - out.leading) / lead
                                : (out.quadrature == Complex{} ? 0 : std::numeric_limits<double>::infinity());
  return out;
}

DecayReport nonstationary_decay(const OscillatoryIntegralSpec& spec, const std::vector<int>& ells,
                                const std::vector<double>& lambdas, const QuadratureOptions& options) {
  check_shape(spec);
  if (spec.j.front() < 1) throw DomainError("j_1 must be positive");
  const int n = spec.chart.n();
  const SmoothMap f = normalized_phase(spec);
  const Box support = spec.weight.support();
  Vector y(n);
  for (int i = 0; i < n; ++i) y[i] = static_cast<double>(spec.k[i]) / static_cast<double>(spec.j.front());
  auto grad_norm = [&](const Vector& x) { return linf_norm(f.gradient(x) - y); };

  DecayReport rep;
  double best = std::numeric_limits<double>::infinity();
  double worst = 0;
  Vector at;
  for (const Vector& x : box_samples(support, 17, 4096, 0xdeca)) {
    const double g = grad_norm(x);
    worst = std::max(worst, g);
    if (g < best) {
      best = g;
      at = x;
    }
  }
  // compass search for a critical point the grid missed
  for (double step = support.radius / 16; step > 1e-13 * support.radius;) {
    bool moved = false;
    for (int i = 0; i < n && !moved; ++i) {
      for (double s : {step, -step}) {
        Vector trial = at;
        trial[i] += s;
        if (!support.contains(trial)) continue;
        const double g = grad_norm(trial);
        if (g < best) {
          best = g;
          at = trial;
          moved = true;
          break;
        }
      }
    }
    if (!moved) step /= 2;
  }
  rep.min_phase_gradient = best;
  rep.gradient_bounded_below = best > 1e-6 * std::max(1.0, worst);

  OscillatoryIntegralSpec s = spec;
  std::vector<double> lx, ly;
  for (double lambda : lambdas) {
    const double qd = lambda / static_cast<double>(spec.j.front());
    if (qd < 1 || qd != std::floor(qd)) throw DomainError("lambda must be a positive multiple of j_1");
    s.q = static_cast<long long>(qd);
    const double mag = std::abs(quad_integral(s, options));
    rep.lambdas.push_back(lambda);
    rep.magnitudes.push_back(mag);
    if (mag > 0) {
      lx.push_back(std::log(lambda));
      ly.push_back(std::log(mag));
    }
  }
  rep.all_zero = std::all_of(rep.magnitudes.begin(), rep.magnitudes.end(), [](double m) { return m == 0; });
  if (lx.size() >= 2) {
    rep.slope = lstsq_slope(lx, ly, rep.intercept);
  } else {
    rep.slope = -std::numeric_limits<double>::infinity();
  }
  for (int ell : ells) {
    double c = 0;
    for (std::size_t i = 0; i < rep.lambdas.size(); ++i) {
      c = std::max(c, rep.magnitudes[i] * std::pow(rep.lambdas[i], ell - 1));
    }
    rep.ells.push_back(ell);
    rep.c_ell.push_back(c);
    rep.ell_pass.push_back(rep.slope <= -(ell - 1));
  }
  return rep;
}

}  // namespace ratnear
