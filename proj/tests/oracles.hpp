// Slow reference implementations used only to cross-check the library.
// Everything here is deliberately naive: dense grids, O(N^2) scans,
// un-memoized tree walks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "udk/rational.hpp"

namespace oracle {

// Star discrepancy via a dense grid of box right-endpoints.
// Exact answer lies within one grid step of this value.
inline double star_1d_grid(const std::vector<double>& xs, int grid = 10000) {
  const double n = static_cast<double>(xs.size());
  double worst = 0.0;
  for (int g = 1; g <= grid; ++g) {
    double t = static_cast<double>(g) / grid;
    std::size_t cnt = 0;
    for (double x : xs)
      if (x < t) ++cnt;
    worst = std::max(worst, std::abs(static_cast<double>(cnt) / n - t));
    // boxes are [0,t); also probe the closed box to catch points sitting on t
    std::size_t cnt2 = 0;
    for (double x : xs)
      if (x <= t) ++cnt2;
    worst = std::max(worst, std::abs(static_cast<double>(cnt2) / n - t));
  }
  return worst;
}

// Extreme discrepancy via G(t) = F_N(t) - t: the sup over intervals equals
// sup G - inf G where G ranges over both one-sided limits at every critical
// value (sample points, 0 and 1).
inline double extreme_1d_pairs(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  std::vector<double> ts = xs;
  ts.push_back(0.0);
  ts.push_back(1.0);
  double gmax = 0.0, gmin = 0.0;  // G(0) = 0
  for (double t : ts) {
    std::size_t lt = 0, le = 0;
    for (double x : xs) {
      lt += (x < t);
      le += (x <= t);
    }
    double gl = static_cast<double>(lt) / n - t;  // left limit
    double gr = static_cast<double>(le) / n - t;  // value after the jump
    gmax = std::max({gmax, gl, gr});
    gmin = std::min({gmin, gl, gr});
  }
  return gmax - gmin;
}

// d-dimensional star discrepancy on a dense corner grid (slow, small N only).
inline double star_dd_grid(const std::vector<double>& xs, unsigned dim, int grid = 200) {
  const std::size_t N = xs.size() / dim;
  const double n = static_cast<double>(N);
  double worst = 0.0;
  std::vector<int> idx(dim, 1);
  while (true) {
    double vol = 1.0;
    std::vector<double> c(dim);
    for (unsigned k = 0; k < dim; ++k) {
      c[k] = static_cast<double>(idx[k]) / grid;
      vol *= c[k];
    }
    std::size_t cnt_open = 0, cnt_closed = 0;
    for (std::size_t i = 0; i < N; ++i) {
      bool in_open = true, in_closed = true;
      for (unsigned k = 0; k < dim; ++k) {
        double x = xs[i * dim + k];
        if (!(x < c[k])) in_open = false;
        if (!(x <= c[k])) in_closed = false;
      }
      cnt_open += in_open;
      cnt_closed += in_closed;
    }
    worst = std::max(worst, std::abs(static_cast<double>(cnt_open) / n - vol));
    worst = std::max(worst, std::abs(static_cast<double>(cnt_closed) / n - vol));
    unsigned k = 0;
    while (k < dim && ++idx[k] > grid) idx[k++] = 1;
    if (k == dim) break;
  }
  return worst;
}

// Radical inverse by direct digit peeling, one digit at a time.
inline double radical_inverse_digits(std::uint64_t n, unsigned base) {
  double v = 0.0, scale = 1.0 / base;
  while (n) {
    v += static_cast<double>(n % base) * scale;
    n /= base;
    scale /= base;
  }
  return v;
}

// Count tree nodes with P >= 1/v by explicit recursion, no lattice shortcut.
inline std::uint64_t count_nodes_direct(const std::vector<double>& p, double v) {
  std::uint64_t cnt = 0;
  // iterative DFS over node probabilities
  std::vector<double> stack{1.0};
  while (!stack.empty()) {
    double P = stack.back();
    stack.pop_back();
    if (P * v < 1.0 - 1e-12) continue;
    ++cnt;
    for (double pj : p) stack.push_back(P * pj);
  }
  return cnt;
}

inline std::uint64_t count_nodes_direct_exact(const std::vector<udk::Rational>& p,
                                              const udk::Rational& v) {
  std::uint64_t cnt = 0;
  std::vector<udk::Rational> stack{udk::Rational(1)};
  while (!stack.empty()) {
    udk::Rational P = stack.back();
    stack.pop_back();
    if (P * v < 1) continue;
    ++cnt;
    for (const auto& pj : p) stack.push_back(P * pj);
  }
  return cnt;
}

// Partition discrepancy from breakpoints by direct evaluation of the
// empirical-vs-uniform gap at every breakpoint (left and right limits).
inline double partition_disc_direct(const std::vector<double>& breaks) {
  const double n = static_cast<double>(breaks.size());
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    double fn_at = static_cast<double>(i + 1) / n;   // F_n(b_i)
    double fn_before = static_cast<double>(i) / n;   // F_n(b_i - 0)
    hi = std::max(hi, fn_at - breaks[i]);
    lo = std::max(lo, breaks[i] - fn_before);
  }
  return std::max(0.0, hi) + std::max(0.0, lo);
}

}  // namespace oracle
