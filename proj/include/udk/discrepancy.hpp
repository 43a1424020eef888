#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "udk/errors.hpp"
#include "udk/rational.hpp"
#include "udk/sequences.hpp"

namespace udk {

// All 1-D routines rest on the step function g(t) = F(t)/N - t with
// F(t) = #{x_i < t}. Over sorted order statistics the one-sided limits give
//   sup  g = max(0, max_i (i/N - x_(i)))        (approached at x_(i) from the right)
//   -inf g = max(0, max_i (x_(i) - (i-1)/N))    (approached at x_(i) from the left)
// star = max of both one-sided deviations per i; extreme = sup g - inf g,
// which equals the supremum over all half-open intervals [a,b).

namespace detail {

inline double star_sorted(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  double dev = 0.0;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    double xi = x[i - 1];
    dev = std::max(dev, static_cast<double>(i) / n - xi);
    dev = std::max(dev, xi - static_cast<double>(i - 1) / n);
  }
  return dev;
}

inline double extreme_sorted(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  double sup = 0.0, neg = 0.0;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    double xi = x[i - 1];
    sup = std::max(sup, static_cast<double>(i) / n - xi);
    neg = std::max(neg, xi - static_cast<double>(i - 1) / n);
  }
  return sup + neg;
}

inline Rational star_sorted_exact(const std::vector<Rational>& x) {
  const long long n = static_cast<long long>(x.size());
  Rational dev = 0;
  for (long long i = 1; i <= n; ++i) {
    const Rational& xi = x[static_cast<std::size_t>(i - 1)];
    dev = std::max(dev, Rational(i, n) - xi);
    dev = std::max(dev, xi - Rational(i - 1, n));
  }
  return dev;
}

inline Rational extreme_sorted_exact(const std::vector<Rational>& x) {
  const long long n = static_cast<long long>(x.size());
  Rational sup = 0, neg = 0;
  for (long long i = 1; i <= n; ++i) {
    const Rational& xi = x[static_cast<std::size_t>(i - 1)];
    sup = std::max(sup, Rational(i, n) - xi);
    neg = std::max(neg, xi - Rational(i - 1, n));
  }
  return sup + neg;
}

inline std::vector<double> sorted_coords(const PointSet& ps) {
  std::vector<double> x(ps.xs);
  std::sort(x.begin(), x.end());
  return x;
}

inline std::vector<Rational> sorted_coords_exact(const PointSet& ps) {
  std::vector<Rational> x(ps.rat);
  std::sort(x.begin(), x.end());
  return x;
}

}  // namespace detail

/// Exact star discrepancy sup_{0<a<=1} |F([0,a))/N - a| of a 1-D point set.
inline double star_discrepancy_1d(const PointSet& ps) {
  if (ps.size() == 0) throw EmptyPointSet();
  if (ps.dim != 1) throw UnsupportedDim(ps.dim);
  if (ps.exact) {
    auto x = detail::sorted_coords_exact(ps);
    return to_double(detail::star_sorted_exact(x));
  }
  auto x = detail::sorted_coords(ps);
  return detail::star_sorted(x);
}

inline Rational star_discrepancy_1d_exact(const PointSet& ps) {
  if (ps.size() == 0) throw EmptyPointSet();
  auto x = detail::sorted_coords_exact(ps);
  return detail::star_sorted_exact(x);
}

/// Exact extreme discrepancy sup_{[a,b)} |.| of a 1-D point set.
inline double extreme_discrepancy_1d(const PointSet& ps) {
  if (ps.size() == 0) throw EmptyPointSet();
  if (ps.dim != 1) throw UnsupportedDim(ps.dim);
  if (ps.exact) {
    auto x = detail::sorted_coords_exact(ps);
    return to_double(detail::extreme_sorted_exact(x));
  }
  auto x = detail::sorted_coords(ps);
  return detail::extreme_sorted(x);
}

inline Rational extreme_discrepancy_1d_exact(const PointSet& ps) {
  if (ps.size() == 0) throw EmptyPointSet();
  auto x = detail::sorted_coords_exact(ps);
  return detail::extreme_sorted_exact(x);
}

/// Extreme discrepancy of an already sorted coordinate array (no copies).
inline double extreme_discrepancy_sorted(std::span<const double> sorted_x) {
  if (sorted_x.empty()) throw EmptyPointSet();
  return detail::extreme_sorted(sorted_x);
}

inline double star_discrepancy_sorted(std::span<const double> sorted_x) {
  if (sorted_x.empty()) throw EmptyPointSet();
  return detail::star_sorted(sorted_x);
}

/// Exact d-dimensional star discrepancy by corner enumeration, d in {2,3}.
/// Caps keep the O(N^{d+1}) enumeration honest: 256 points for d=2, 64 for d=3.
/// Pass max_n > 0 to override the default cap.
inline double star_discrepancy_dd(const PointSet& ps, std::size_t max_n = 0) {
  const std::size_t n = ps.size();
  if (n == 0) throw EmptyPointSet();
  const std::size_t d = ps.dim;
  if (d == 1) return star_discrepancy_1d(ps);
  if (d > 3) throw UnsupportedDim(d);
  const std::size_t cap = max_n ? max_n : (d == 2 ? 256 : 64);
  if (n > cap) throw TooLarge(n, cap);

  // per-axis sorted unique grid values: sample coordinates plus 1
  std::vector<std::vector<double>> grid(d);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < n; ++i) grid[k].push_back(ps.at(i, k));
    grid[k].push_back(1.0);
    std::sort(grid[k].begin(), grid[k].end());
    grid[k].erase(std::unique(grid[k].begin(), grid[k].end()), grid[k].end());
  }

  const double dn = static_cast<double>(n);
  double dev = 0.0;
  std::array<std::size_t, 3> idx{0, 0, 0};
  std::array<std::size_t, 3> lim{1, 1, 1};
  for (std::size_t k = 0; k < d; ++k) lim[k] = grid[k].size();

  for (idx[0] = 0; idx[0] < lim[0]; ++idx[0]) {
    for (idx[1] = 0; idx[1] < lim[1]; ++idx[1]) {
      for (idx[2] = 0; idx[2] < lim[2]; ++idx[2]) {
        double c[3] = {grid[0][idx[0]], d > 1 ? grid[1][idx[1]] : 1.0,
                       d > 2 ? grid[2][idx[2]] : 1.0};
        double vol = 1.0;
        for (std::size_t k = 0; k < d; ++k) vol *= c[k];
        std::size_t cnt_lt = 0;   // x_k < c_k in every axis
        std::size_t cnt_le = 0;   // x_k <= c_k where c_k < 1, x_k < 1 where c_k = 1
        for (std::size_t i = 0; i < n; ++i) {
          bool lt = true, le = true;
          for (std::size_t k = 0; k < d; ++k) {
            double xv = ps.at(i, k);
            if (!(xv < c[k])) lt = false;
            if (c[k] < 1.0 ? !(xv <= c[k]) : !(xv < 1.0)) le = false;
          }
          cnt_lt += lt;
          cnt_le += le;
        }
        // closed-corner overshoot and open-corner shortfall of the box [0, c)
        dev = std::max(dev, static_cast<double>(cnt_le) / dn - vol);
        dev = std::max(dev, vol - static_cast<double>(cnt_lt) / dn);
        if (d <= 2) break;
      }
      if (d <= 1) break;
    }
  }
  return dev;
}

/// Discrepancy of a partition given by its right endpoints t_1 < ... < t_k = 1:
/// the extreme discrepancy of the endpoints as a point set.
inline double partition_discrepancy(const std::vector<double>& breaks) {
  if (breaks.empty()) throw EmptyPartition();
  for (std::size_t i = 1; i < breaks.size(); ++i)
    if (!(breaks[i - 1] < breaks[i])) throw Unsorted();
  if (breaks.back() != 1.0) throw OutOfRange("last breakpoint must be 1");
  return detail::extreme_sorted(breaks);
}

inline Rational partition_discrepancy(const std::vector<Rational>& breaks) {
  if (breaks.empty()) throw EmptyPartition();
  for (std::size_t i = 1; i < breaks.size(); ++i)
    if (!(breaks[i - 1] < breaks[i])) throw Unsorted();
  if (breaks.back() != 1) throw OutOfRange("last breakpoint must be 1");
  return detail::extreme_sorted_exact(breaks);
}

/// Exact star discrepancy of every prefix of a sequence whose values are
/// nums[i]/den on a common integer grid. Incremental sorted insertion plus an
/// integer rescan makes the full table O(K^2) in cheap int64 steps; values stay
/// exact because every comparison is integral.
inline std::vector<double> star_discrepancy_prefixes(const std::vector<long long>& nums,
                                                     long long den) {
  std::vector<double> out;
  out.reserve(nums.size());
  std::vector<long long> sorted;
  sorted.reserve(nums.size());
  for (std::size_t idx = 0; idx < nums.size(); ++idx) {
    long long v = nums[idx];
    sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), v), v);
    const long long n = static_cast<long long>(sorted.size());
    long long best = 0;  // N * den * deviation
    for (long long i = 1; i <= n; ++i) {
      long long xi = sorted[static_cast<std::size_t>(i - 1)];
      long long hi = i * den - n * xi;
      long long lo = n * xi - (i - 1) * den;
      if (hi > best) best = hi;
      if (lo > best) best = lo;
    }
    out.push_back(static_cast<double>(best) / (static_cast<double>(n) * static_cast<double>(den)));
  }
  return out;
}

}  // namespace udk
