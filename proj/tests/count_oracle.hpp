#pragma once

// Direct enumeration with exact rational heights. Deliberately simple.

#include "ratnear/counting.hpp"

#include <cmath>

namespace oracle {

using ratnear::BigInt;
using ratnear::ManifoldChart;
using ratnear::Rational;

inline Rational nearest_integer_distance(const Rational& v) {
  const Rational frac = v - Rational(ratnear::floor_rational(v));
  return frac < Rational(1, 2) ? frac : Rational(1) - frac;
}

inline bool qualifies(const ManifoldChart& chart, const std::vector<long long>& a, long long q, const Rational& delta) {
  std::vector<Rational> x;
  for (long long v : a) x.emplace_back(v, q);
  for (const auto& f : chart.maps()) {
    if (nearest_integer_distance(Rational(q) * f.value_exact(x)) > delta) return false;
  }
  return true;
}

struct Tally {
  std::uint64_t hits = 0;
  std::uint64_t scanned = 0;
  double weighted = 0;
  double n0 = 0;
};

inline Tally count(const ManifoldChart& chart, long long Q, const Rational& delta,
                   const ratnear::WeightFunction* w = nullptr) {
  const int n = chart.n();
  Tally t;
  for (long long q = 1; q <= Q; ++q) {
    std::vector<long long> lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
      Rational l = chart.x0_exact()[i] - chart.eps0_exact();
      Rational h = chart.x0_exact()[i] + chart.eps0_exact();
      if (w) {
        const Rational c = ratnear::rational_from_double(w->center()[i]);
        const Rational r = ratnear::rational_from_double(w->support_radius());
        if (c - r > l) l = c - r;
        if (c + r < h) h = c + r;
      }
      lo[i] = static_cast<long long>(ratnear::ceil_rational(l * q));
      hi[i] = static_cast<long long>(ratnear::floor_rational(h * q));
    }
    bool empty = false;
    for (int i = 0; i < n; ++i) empty = empty || lo[i] > hi[i];
    if (empty) continue;
    std::vector<long long> a = lo;
    for (;;) {
      ++t.scanned;
      const bool ok = qualifies(chart, a, q, delta);
      double wv = 1;
      if (w) {
        ratnear::Vector x(n);
        for (int i = 0; i < n; ++i) x[i] = static_cast<double>(a[i]) / static_cast<double>(q);
        wv = w->value(x);
      }
      t.n0 += wv;
      if (ok) {
        ++t.hits;
        t.weighted += wv;
      }
      int d = n - 1;
      for (; d >= 0; --d) {
        if (++a[d] <= hi[d]) break;
        a[d] = lo[d];
      }
      if (d < 0) break;
    }
  }
  return t;
}

}  // namespace oracle
