#include "ratnear/counting.hpp"

#include "ratnear/error.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace ratnear {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

const BigInt kFastLimit = BigInt(1) << 62;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 addmod(u64 a, u64 b, u64 m) {
  const u64 s = a + b;
  return s >= m ? s - m : s;
}

u64 submod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

u64 reduce(long long a, u64 m) {
  const long long r = a % static_cast<long long>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<long long>(m) : r);
}

u64 reduce(const BigInt& a, u64 m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

struct Neumaier {
  double sum = 0;
  double c = 0;
  void add(double v) {
    const double t = sum + v;
    c += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

struct Term {
  BigInt coefficient;  // c_alpha * L
  std::vector<int> exponents;
  int degree = 0;
};

// Height test for one map. Exact maps use P(a, q) = L q^{d-1} * q f(a/q),
// an integer polynomial, against the modulus D = L q^{d-1}.
struct MapEngine {
  bool exact = false;
  SmoothMap map;
  std::vector<Term> terms;
  BigInt lcm = 1;
  int degree = 1;  // max(total degree, 1)
  int row_degree = 0;  // degree in the innermost coordinate

  explicit MapEngine(const SmoothMap& m) : map(m) {
    if (!m.is_exact_rational()) return;
    exact = true;
    const Polynomial& p = *m.polynomial();
    lcm = p.denominator_lcm();
    degree = std::max(1, p.degree());
    row_degree = p.degree_in(m.arity() - 1);
    for (const auto& [mono, c] : p.terms()) {
      Term t;
      const Rational scaled = c * Rational(lcm);
      t.coefficient = boost::multiprecision::numerator(scaled);
      t.exponents = mono;
      for (int e : mono) t.degree += e;
      terms.push_back(std::move(t));
    }
  }
};

// Per-q state of an exact map.
struct ExactLevel {
  bool fast = false;
  u64 D = 0;
  u64 T = 0;
  std::vector<u64> coef;   // per term, mod D
  std::vector<u64> qpow;   // per term, q^{d - |alpha|} mod D
  BigInt bigD;
  BigInt bigT;
  std::vector<BigInt> bigqpow;
};

ExactLevel make_level(const MapEngine& e, long long q, const Rational& delta) {
  ExactLevel lv;
  lv.bigD = e.lcm * boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(e.degree - 1));
  lv.bigT = floor_rational(delta * Rational(lv.bigD));
  for (const Term& t : e.terms) lv.bigqpow.push_back(boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(e.degree - t.degree)));
  lv.fast = lv.bigD <= kFastLimit;
  if (lv.fast) {
    lv.D = static_cast<u64>(lv.bigD);
    lv.T = static_cast<u64>(lv.bigT);
    for (std::size_t i = 0; i < e.terms.size(); ++i) {
      lv.coef.push_back(reduce(e.terms[i].coefficient, lv.D));
      lv.qpow.push_back(reduce(lv.bigqpow[i], lv.D));
    }
  }
  return lv;
}

u64 eval_mod(const MapEngine& e, const ExactLevel& lv, const std::vector<u64>& amod) {
  u64 s = 0;
  for (std::size_t i = 0; i < e.terms.size(); ++i) {
    u64 v = mulmod(lv.coef[i], lv.qpow[i], lv.D);
    const auto& ex = e.terms[i].exponents;
    for (std::size_t k = 0; k < ex.size() && v != 0; ++k) {
      for (int p = 0; p < ex[k]; ++p) v = mulmod(v, amod[k], lv.D);
    }
    s = addmod(s, v, lv.D);
  }
  return s;
}

bool big_test(const MapEngine& e, const ExactLevel& lv, const std::vector<long long>& a) {
  BigInt s = 0;
  for (std::size_t i = 0; i < e.terms.size(); ++i) {
    BigInt v = e.terms[i].coefficient * lv.bigqpow[i];
    const auto& ex = e.terms[i].exponents;
    for (std::size_t k = 0; k < ex.size(); ++k) {
      if (ex[k] > 0) v *= boost::multiprecision::pow(BigInt(a[k]), static_cast<unsigned>(ex[k]));
    }
    s += v;
  }
  BigInt r = s % lv.bigD;
  if (r < 0) r += lv.bigD;
  const BigInt other = lv.bigD - r;
  return (r < other ? r : other) <= lv.bigT;
}

struct QResult {
  u64 hits = 0;
  u64 scanned = 0;
  u64 warnings = 0;
  double wsum = 0;
  double n0 = 0;
};

struct Job {
  const ManifoldChart& chart;
  std::vector<MapEngine> engines;
  Rational delta;
  double delta_d = 0;
  const WeightFunction* weight = nullptr;
  std::vector<Rational> lo, hi;  // real box of base points a/q
};

QResult run_q(const Job& job, long long q) {
  const int n = job.chart.n();
  const auto un = static_cast<std::size_t>(n);
  std::vector<long long> lo(un), hi(un);
  for (std::size_t i = 0; i < un; ++i) {
    lo[i] = static_cast<long long>(ceil_rational(job.lo[i] * q));
    hi[i] = static_cast<long long>(floor_rational(job.hi[i] * q));
    if (lo[i] > hi[i]) return {};
  }
  const double qd = static_cast<double>(q);
  std::vector<std::vector<double>> wtab;
  if (job.weight) {
    wtab.resize(un);
    for (std::size_t i = 0; i < un; ++i) {
      for (long long a = lo[i]; a <= hi[i]; ++a) {
        wtab[i].push_back(job.weight->axis_factor(static_cast<int>(i), static_cast<double>(a) / qd));
      }
    }
  }
  std::vector<ExactLevel> levels;
  for (const MapEngine& e : job.engines) levels.push_back(e.exact ? make_level(e, q, job.delta) : ExactLevel{});

  const std::size_t len = static_cast<std::size_t>(hi[un - 1] - lo[un - 1] + 1);
  std::vector<unsigned char> ok(len);
  std::vector<long long> a(lo);
  std::vector<u64> amod(un);
  std::vector<u64> diff;
  std::vector<double> x(un);
  QResult res;
  Neumaier wsum, n0;
  for (;;) {
    std::fill(ok.begin(), ok.end(), 1);
    for (std::size_t r = 0; r < job.engines.size(); ++r) {
      const MapEngine& e = job.engines[r];
      const ExactLevel& lv = levels[r];
      if (e.exact && lv.fast) {
        const int d = e.row_degree;
        diff.assign(static_cast<std::size_t>(d + 1), 0);
        for (std::size_t i = 0; i + 1 < un; ++i) amod[i] = reduce(a[i], lv.D);
        for (int s = 0; s <= d; ++s) {
          amod[un - 1] = reduce(lo[un - 1] + s, lv.D);
          diff[static_cast<std::size_t>(s)] = eval_mod(e, lv, amod);
        }
        for (int k = 1; k <= d; ++k) {
          for (int s = d; s >= k; --s) {
            diff[static_cast<std::size_t>(s)] =
                submod(diff[static_cast<std::size_t>(s)], diff[static_cast<std::size_t>(s - 1)], lv.D);
          }
        }
        for (std::size_t s = 0; s < len; ++s) {
          const u64 v = diff[0];
          const u64 dist = std::min(v, lv.D - v);
          if (dist > lv.T) ok[s] = 0;
          for (int k = 0; k < d; ++k) {
            diff[static_cast<std::size_t>(k)] =
                addmod(diff[static_cast<std::size_t>(k)], diff[static_cast<std::size_t>(k + 1)], lv.D);
          }
        }
      } else if (e.exact) {
        std::vector<long long> pt(a);
        for (std::size_t s = 0; s < len; ++s) {
          if (!ok[s]) continue;
          pt[un - 1] = lo[un - 1] + static_cast<long long>(s);
          if (!big_test(e, lv, pt)) ok[s] = 0;
        }
      } else {
        for (std::size_t i = 0; i + 1 < un; ++i) x[i] = static_cast<double>(a[i]) / qd;
        for (std::size_t s = 0; s < len; ++s) {
          if (!ok[s]) continue;
          x[un - 1] = static_cast<double>(lo[un - 1] + static_cast<long long>(s)) / qd;
          const double v = qd * e.map.value(x.data());
          const double dist = std::abs(v - std::nearbyint(v));
          if (std::abs(dist - job.delta_d) <= 1e-12) ++res.warnings;
          if (!(dist <= job.delta_d)) ok[s] = 0;
        }
      }
    }
    res.scanned += len;
    if (job.weight) {
      double wrow = job.weight->amplitude();
      for (std::size_t i = 0; i + 1 < un; ++i) wrow *= wtab[i][static_cast<std::size_t>(a[i] - lo[i])];
      const std::vector<double>& last = wtab[un - 1];
      for (std::size_t s = 0; s < len; ++s) {
        const double w = wrow * last[s];
        n0.add(w);
        if (ok[s]) {
          ++res.hits;
          wsum.add(w);
        }
      }
    } else {
      for (std::size_t s = 0; s < len; ++s) res.hits += ok[s];
    }
    int d = n - 2;
    for (; d >= 0; --d) {
      const auto ud = static_cast<std::size_t>(d);
      if (++a[ud] <= hi[ud]) break;
      a[ud] = lo[ud];
    }
    if (d < 0) break;
  }
  res.wsum = wsum.value();
  res.n0 = n0.value();
  return res;
}

CountResult run(const ManifoldChart& chart, long long Q, const Rational& delta, const WeightFunction* weight,
                const CountOptions& options, bool require_exact) {
  const auto start = std::chrono::steady_clock::now();
  if (Q < 1) throw DomainError("Q must be positive");
  if (delta < 0 || delta > Rational(1, 2)) throw DomainError("delta must lie in [0, 1/2]");
  const int n = chart.n();
  Job job{chart, {}, delta, to_double(delta), weight, {}, {}};
  for (const SmoothMap& m : chart.maps()) {
    job.engines.emplace_back(m);
    if (require_exact && !job.engines.back().exact) {
      throw NonPolynomialError("exact on-manifold counting needs polynomial maps with rational coefficients");
    }
  }
  for (int i = 0; i < n; ++i) {
    job.lo.push_back(chart.x0_exact()[static_cast<std::size_t>(i)] - chart.eps0_exact());
    job.hi.push_back(chart.x0_exact()[static_cast<std::size_t>(i)] + chart.eps0_exact());
  }
  if (weight) {
    if (weight->dimension() != n) throw DimensionError("weight dimension does not match the chart");
    const Rational r = rational_from_double(weight->support_radius());
    const Rational limit = options.support_radius ? rational_from_double(*options.support_radius) : chart.eps0_exact();
    for (int i = 0; i < n; ++i) {
      const Rational c = rational_from_double(weight->center()[i]);
      const Rational& x0 = chart.x0_exact()[static_cast<std::size_t>(i)];
      if (c - r < x0 - limit || c + r > x0 + limit) throw DomainError("weight support leaves the allowed box");
      const Rational wlo = c - r;
      const Rational whi = c + r;
      job.lo[static_cast<std::size_t>(i)] = std::max(job.lo[static_cast<std::size_t>(i)], wlo);
      job.hi[static_cast<std::size_t>(i)] = std::min(job.hi[static_cast<std::size_t>(i)], whi);
    }
  }
  double scan = 0;
  for (long long q = 1; q <= Q; ++q) {
    double p = 1;
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      p *= std::max(0.0, static_cast<double>(floor_rational(job.hi[k] * q) - ceil_rational(job.lo[k] * q) + 1));
    }
    scan += p;
  }
  if (scan > options.scan_cap) throw BudgetExceededError("scan size exceeds the configured cap");

  std::vector<QResult> per_q(static_cast<std::size_t>(Q));
  std::atomic<long long> next{Q};
  auto worker = [&] {
    for (long long q; (q = next.fetch_sub(1)) >= 1;) per_q[static_cast<std::size_t>(q - 1)] = run_q(job, q);
  };
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const int threads = static_cast<int>(std::min<long long>(options.threads > 0 ? options.threads : hw, Q));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  CountResult out;
  out.Q = Q;
  out.delta = job.delta_d;
  out.weighted = weight != nullptr;
  Neumaier wsum, n0;
  for (const QResult& r : per_q) {
    out.hits += r.hits;
    out.points_scanned += r.scanned;
    out.near_threshold_warnings += r.warnings;
    wsum.add(r.wsum);
    n0.add(r.n0);
  }
  out.exact = std::all_of(job.engines.begin(), job.engines.end(), [](const MapEngine& e) { return e.exact; });
  if (weight) {
    out.count = wsum.value();
    out.N0 = n0.value();
  } else {
    out.count = static_cast<double>(out.hits);
    out.N0 = static_cast<double>(out.points_scanned);
  }
  out.main_term = std::pow(2 * out.delta, chart.R()) * out.N0;
  out.ratio = out.main_term > 0 ? out.count / out.main_term : 0;
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace

Rational delta_from_double(double delta) {
  if (!(delta >= 0 && delta <= 0.5)) throw DomainError("delta must lie in [0, 1/2]");
  return rational_from_double(delta);
}

CountResult count(const ManifoldChart& chart, const CountQuery& query, const CountOptions& options) {
  return run(chart, query.Q, query.delta, query.weight ? &*query.weight : nullptr, options, false);
}

CountResult count_near(const ManifoldChart& chart, long long Q, const Rational& delta, const CountOptions& options) {
  return run(chart, Q, delta, nullptr, options, false);
}

CountResult count_weighted(const ManifoldChart& chart, const WeightFunction& w, long long Q, const Rational& delta,
                           const CountOptions& options) {
  return run(chart, Q, delta, &w, options, false);
}

CountResult count_on(const ManifoldChart& chart, long long Q, const CountOptions& options) {
  return run(chart, Q, Rational(0), nullptr, options, true);
}

BaseCount base_count_sigma(const WeightFunction& w, long long Q) {
  if (Q < 1) throw DomainError("Q must be positive");
  const int n = w.dimension();
  const Rational r = rational_from_double(w.support_radius());
  Neumaier total;
  for (long long q = 1; q <= Q && w.amplitude() != 0; ++q) {
    double prod = w.amplitude();
    for (int i = 0; i < n; ++i) {
      const Rational c = rational_from_double(w.center()[i]);
      const auto lo = static_cast<long long>(ceil_rational((c - r) * q));
      const auto hi = static_cast<long long>(floor_rational((c + r) * q));
      Neumaier s;
      for (long long a = lo; a <= hi; ++a) s.add(w.axis_factor(i, static_cast<double>(a) / static_cast<double>(q)));
      prod *= s.value();
    }
    total.add(prod);
  }
  BaseCount out;
  out.N0 = total.value();
  out.sigma_hat = out.N0 / std::pow(static_cast<double>(Q), n + 1);
  out.prediction = w.integral() / (n + 1);
  out.relative_gap = out.prediction > 0 ? std::abs(out.sigma_hat - out.prediction) / out.prediction : 0;
  return out;
}

}  // namespace ratnear
