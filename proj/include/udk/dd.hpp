#pragma once

#include <cmath>

namespace udk {

// Double-double value hi+lo with |lo| <= ulp(hi)/2; roughly 106-bit significand.
// Only the operations the refinement breakpoint accumulation needs.
struct dd {
  double hi = 0.0;
  double lo = 0.0;

  dd() = default;
  constexpr dd(double h, double l) : hi(h), lo(l) {}
  constexpr dd(double h) : hi(h), lo(0.0) {}

  double value() const { return hi + lo; }
};

namespace detail {
inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline dd quick_two_sum(double a, double b) {
  // requires |a| >= |b|
  double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}
}  // namespace detail

inline dd operator+(const dd& a, const dd& b) {
  dd s = detail::two_sum(a.hi, b.hi);
  dd t = detail::two_sum(a.lo, b.lo);
  double lo = s.lo + t.hi;
  dd r = detail::quick_two_sum(s.hi, lo);
  lo = r.lo + t.lo;
  return detail::quick_two_sum(r.hi, lo);
}

inline dd operator-(const dd& a, const dd& b) { return a + dd{-b.hi, -b.lo}; }

inline dd operator*(const dd& a, const dd& b) {
  dd p = detail::two_prod(a.hi, b.hi);
  double lo = p.lo + (a.hi * b.lo + a.lo * b.hi);
  return detail::quick_two_sum(p.hi, lo);
}

inline dd operator/(const dd& a, const dd& b) {
  double q1 = a.hi / b.hi;
  dd r = a - b * dd{q1};
  double q2 = r.hi / b.hi;
  r = r - b * dd{q2};
  double q3 = r.hi / b.hi;
  dd s = detail::quick_two_sum(q1, q2);
  return s + dd{q3};
}

inline dd dd_sqrt(const dd& a) {
  if (a.hi <= 0.0) return dd{0.0};
  double y = std::sqrt(a.hi);
  // one Newton step in dd doubles the accurate digits
  dd yd{y};
  return (yd + a / yd) * dd{0.5};
}

inline dd dd_pow(const dd& base, unsigned e) {
  dd acc{1.0};
  dd b = base;
  while (e) {
    if (e & 1u) acc = acc * b;
    b = b * b;
    e >>= 1u;
  }
  return acc;
}

}  // namespace udk
