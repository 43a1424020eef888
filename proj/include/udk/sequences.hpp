#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "udk/errors.hpp"
#include "udk/rational.hpp"

namespace udk {

using Base = unsigned;  // >= 2

/// Finite point set in [0,1]^dim, kept in generation order. When `exact` is
/// set the rational coordinates are authoritative and `xs` mirrors them as
/// doubles; otherwise only `xs` is meaningful.
struct PointSet {
  std::size_t dim = 1;
  bool exact = false;
  std::vector<double> xs;        // row-major, dim * size entries
  std::vector<Rational> rat;     // row-major when exact, else empty

  std::size_t size() const { return dim ? xs.size() / dim : 0; }
  double at(std::size_t i, std::size_t k = 0) const { return xs[i * dim + k]; }
  const Rational& rat_at(std::size_t i, std::size_t k = 0) const { return rat[i * dim + k]; }

  void push_exact(const Rational* coords) {
    for (std::size_t k = 0; k < dim; ++k) {
      rat.push_back(coords[k]);
      xs.push_back(to_double(coords[k]));
    }
  }
};

/// Base-b digit reversal of n into [0,1): gamma_b(n) = sum a_k b^{-k-1}.
inline Rational radical_inverse(std::uint64_t n, Base b) {
  BigInt num = 0;
  BigInt den = 1;
  while (n) {
    num = num * b + static_cast<unsigned>(n % b);
    den *= b;
    n /= b;
  }
  return Rational(num, den);
}

namespace detail {
inline void check_coprime(const std::vector<Base>& bases) {
  for (std::size_t i = 0; i < bases.size(); ++i)
    for (std::size_t j = i + 1; j < bases.size(); ++j)
      if (std::gcd(bases[i], bases[j]) != 1) throw NonCoprimeBases(bases[i], bases[j]);
}
}  // namespace detail

/// x_n = gamma_b(n-1), so the sequence starts at 0.
inline PointSet van_der_corput(std::size_t n_points, Base b) {
  PointSet ps;
  ps.dim = 1;
  ps.exact = true;
  ps.xs.reserve(n_points);
  ps.rat.reserve(n_points);
  for (std::size_t n = 1; n <= n_points; ++n) {
    Rational v = radical_inverse(n - 1, b);
    ps.push_exact(&v);
  }
  return ps;
}

/// x_n = (gamma_{b_1}(n), ..., gamma_{b_d}(n)) starting at n = 1, so the first
/// point of bases (2,3) is (1/2, 1/3).
inline PointSet halton(std::size_t n_points, const std::vector<Base>& bases) {
  detail::check_coprime(bases);
  PointSet ps;
  ps.dim = bases.size();
  ps.exact = true;
  std::vector<Rational> row(ps.dim);
  for (std::size_t n = 1; n <= n_points; ++n) {
    for (std::size_t k = 0; k < bases.size(); ++k) row[k] = radical_inverse(n, bases[k]);
    ps.push_exact(row.data());
  }
  return ps;
}

/// x_n = (n/N, gamma_{b_1}(n), ...); the leading coordinate reaches 1 at n = N.
inline PointSet hammersley(std::size_t n_points, const std::vector<Base>& bases) {
  detail::check_coprime(bases);
  PointSet ps;
  ps.dim = bases.size() + 1;
  ps.exact = true;
  std::vector<Rational> row(ps.dim);
  for (std::size_t n = 1; n <= n_points; ++n) {
    row[0] = Rational(n, n_points);
    for (std::size_t k = 0; k < bases.size(); ++k) row[k + 1] = radical_inverse(n, bases[k]);
    ps.push_exact(row.data());
  }
  return ps;
}

/// x_n = ({n theta_1}, ..., {n theta_d}) in floats.
inline PointSet kronecker(std::size_t n_points, const std::vector<double>& theta) {
  PointSet ps;
  ps.dim = theta.size();
  ps.exact = false;
  ps.xs.reserve(n_points * ps.dim);
  for (std::size_t n = 1; n <= n_points; ++n) {
    for (double t : theta) {
      double v = static_cast<double>(n) * t;
      v -= std::floor(v);
      ps.xs.push_back(v);
    }
  }
  return ps;
}

/// |(1/N) sum_n exp(2 pi i h.x_n)|; 0 for u.d.-behaving sets as N grows.
inline double weyl_sum(const PointSet& ps, const std::vector<long long>& h) {
  if (ps.size() == 0) throw EmptyPointSet();
  if (h.size() != ps.dim) throw DimMismatch(ps.dim, h.size());
  bool all_zero = true;
  for (long long c : h)
    if (c != 0) all_zero = false;
  if (all_zero) throw ZeroFrequency();
  constexpr double two_pi = 6.283185307179586476925286766559;
  double re = 0.0, im = 0.0;
  const std::size_t n = ps.size();
  for (std::size_t i = 0; i < n; ++i) {
    double phase = 0.0;
    for (std::size_t k = 0; k < ps.dim; ++k) phase += static_cast<double>(h[k]) * ps.at(i, k);
    re += std::cos(two_pi * phase);
    im += std::sin(two_pi * phase);
  }
  re /= static_cast<double>(n);
  im /= static_cast<double>(n);
  return std::sqrt(re * re + im * im);
}

}  // namespace udk
