#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace udk {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rational_pow(const Rational& base, unsigned e) {
  Rational acc = 1;
  Rational b = base;
  while (e) {
    if (e & 1u) acc *= b;
    b *= b;
    e >>= 1u;
  }
  return acc;
}

/// Exact integer n-th root: returns r with r^n == x, or nullopt if x is not a perfect power.
inline std::optional<BigInt> exact_nth_root(const BigInt& x, unsigned n) {
  if (x < 0) return std::nullopt;
  if (x == 0 || x == 1 || n == 1) return x;
  // Newton iteration on integers, then verify.
  BigInt r = 1;
  {
    // initial guess from bit length
    std::size_t bits = boost::multiprecision::msb(x) + 1;
    r = BigInt(1) << (bits / n + 1);
  }
  BigInt prev = -1;
  while (r != prev) {
    prev = r;
    BigInt rp = boost::multiprecision::pow(r, n - 1);
    if (rp == 0) break;
    r = ((n - 1) * r + x / rp) / n;
  }
  for (BigInt c = r - 1; c <= r + 1; ++c) {
    if (c >= 0 && boost::multiprecision::pow(c, n) == x) return c;
  }
  return std::nullopt;
}

/// Exact rational n-th root of p/q, if both numerator and denominator are perfect n-th powers.
inline std::optional<Rational> exact_nth_root(const Rational& x, unsigned n) {
  auto nu = exact_nth_root(boost::multiprecision::numerator(x), n);
  if (!nu) return std::nullopt;
  auto de = exact_nth_root(boost::multiprecision::denominator(x), n);
  if (!de) return std::nullopt;
  return Rational(*nu, *de);
}

inline std::string format_rational(const Rational& r) {
  const BigInt& num = boost::multiprecision::numerator(r);
  const BigInt& den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace udk
