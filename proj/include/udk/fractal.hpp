#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "udk/errors.hpp"
#include "udk/khodak.hpp"
#include "udk/rational.hpp"
#include "udk/refine.hpp"
#include "udk/sequences.hpp"

namespace udk {

/// Letters 1..m, stored in application order: the first letter names the map
/// applied first (innermost), the last the map applied last (outermost). The
/// outermost maps decide which coarse cell contains a point, so containment
/// tests match word suffixes, padding short words with 1s at the front (the
/// base point is the fixed point of map 1, i.e. an infinite run of 1s inward).
using AddressWord = std::vector<std::uint8_t>;

struct Similarity {
  unsigned dim = 1;
  double ratio = 0.0;
  std::array<double, 4> A{};  // row-major dim x dim; dim 1 uses A[0]
  std::array<double, 2> t{};
  bool exact = false;
  std::array<Rational, 4> A_exact{};
  std::array<Rational, 2> t_exact{};

  void apply(double* x) const {
    if (dim == 1) {
      x[0] = A[0] * x[0] + t[0];
    } else {
      double u = A[0] * x[0] + A[1] * x[1] + t[0];
      double v = A[2] * x[0] + A[3] * x[1] + t[1];
      x[0] = u;
      x[1] = v;
    }
  }
  void apply_exact(Rational* x) const {
    if (dim == 1) {
      x[0] = A_exact[0] * x[0] + t_exact[0];
    } else {
      Rational u = A_exact[0] * x[0] + A_exact[1] * x[1] + t_exact[0];
      Rational v = A_exact[2] * x[0] + A_exact[3] * x[1] + t_exact[1];
      x[0] = u;
      x[1] = v;
    }
  }
};

inline Similarity sim1_exact(const Rational& a, const Rational& t) {
  Similarity s;
  s.dim = 1;
  s.ratio = std::abs(to_double(a));
  s.A[0] = to_double(a);
  s.t[0] = to_double(t);
  s.exact = true;
  s.A_exact[0] = a;
  s.t_exact[0] = t;
  return s;
}

inline Similarity sim2(double a11, double a12, double a21, double a22, double t1, double t2) {
  Similarity s;
  s.dim = 2;
  s.ratio = std::sqrt(a11 * a11 + a21 * a21);
  s.A = {a11, a12, a21, a22};
  s.t = {t1, t2};
  return s;
}

inline Similarity sim2_exact(const Rational& a11, const Rational& a12, const Rational& a21,
                             const Rational& a22, const Rational& t1, const Rational& t2) {
  Similarity s = sim2(to_double(a11), to_double(a12), to_double(a21), to_double(a22),
                      to_double(t1), to_double(t2));
  s.exact = true;
  s.A_exact = {a11, a12, a21, a22};
  s.t_exact = {t1, t2};
  return s;
}

struct IFSSystem {
  unsigned dim = 1;
  std::vector<Similarity> maps;
  bool exact = false;  // every map and x0 exact
  std::array<double, 2> x0{};
  std::array<Rational, 2> x0_exact{};
  std::string preset;

  std::size_t m() const { return maps.size(); }
  bool equal_ratios() const {
    for (const auto& s : maps)
      if (std::abs(s.ratio - maps[0].ratio) > 1e-12) return false;
    return true;
  }
};

namespace detail {

inline void validate_system(const IFSSystem& sys) {
  if (sys.maps.size() < 2) throw OutOfRange("need at least two maps");
  for (const auto& s : sys.maps) {
    if (s.dim != sys.dim) throw DimMismatch(s.dim, sys.dim);
    if (!(s.ratio > 0 && s.ratio < 1)) throw OutOfRange("contraction ratio must lie in (0,1)");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Presets. x0 is always the fixed point of map 1.

inline IFSSystem ifs_cantor() {
  IFSSystem sys;
  sys.dim = 1;
  sys.exact = true;
  sys.preset = "cantor";
  sys.maps = {sim1_exact(Rational(1, 3), Rational(0)),
              sim1_exact(Rational(1, 3), Rational(2, 3))};
  return sys;
}

/// Right-triangle gasket with vertices (0,0), (0,1), (1,1).
inline IFSSystem ifs_sierpinski_right() {
  IFSSystem sys;
  sys.dim = 2;
  sys.exact = true;
  sys.preset = "sierpinski-right";
  const Rational h(1, 2), z(0);
  sys.maps = {sim2_exact(h, z, z, h, z, z), sim2_exact(h, z, z, h, z, h),
              sim2_exact(h, z, z, h, h, h)};
  return sys;
}

inline IFSSystem ifs_sierpinski_equilateral() {
  IFSSystem sys;
  sys.dim = 2;
  sys.preset = "sierpinski-equilateral";
  const double s3 = std::sqrt(3.0);
  sys.maps = {sim2(0.5, 0, 0, 0.5, 0, 0), sim2(0.5, 0, 0, 0.5, 0.25, s3 / 4.0),
              sim2(0.5, 0, 0, 0.5, 0.5, 0)};
  return sys;
}

/// Koch curve over [0,1]: two straight thirds and the two peak segments; the
/// third map is orientation-reversing.
inline IFSSystem ifs_koch() {
  IFSSystem sys;
  sys.dim = 2;
  sys.preset = "koch";
  const double s3 = std::sqrt(3.0);
  sys.maps = {sim2(1.0 / 3, 0, 0, 1.0 / 3, 0, 0),
              sim2(1.0 / 6, -s3 / 6, s3 / 6, 1.0 / 6, 1.0 / 3, 0),
              sim2(-1.0 / 6, s3 / 6, s3 / 6, 1.0 / 6, 2.0 / 3, 0),
              sim2(1.0 / 3, 0, 0, 1.0 / 3, 2.0 / 3, 0)};
  return sys;
}

/// [0,1] split into m equal parts; its generated sequence is the classical
/// van der Corput sequence in base m.
inline IFSSystem ifs_unit_interval(unsigned m) {
  if (m < 2 || m > 64) throw OutOfRange("unit-interval preset wants m in [2,64]");
  IFSSystem sys;
  sys.dim = 1;
  sys.exact = true;
  sys.preset = "unit-interval";
  for (unsigned i = 0; i < m; ++i)
    sys.maps.push_back(sim1_exact(Rational(1, m), Rational(i, m)));
  return sys;
}

inline IFSSystem ifs_preset(const std::string& name) {
  if (name == "cantor") return ifs_cantor();
  if (name == "sierpinski-right") return ifs_sierpinski_right();
  if (name == "sierpinski-equilateral") return ifs_sierpinski_equilateral();
  if (name == "koch") return ifs_koch();
  if (name.rfind("unit-interval", 0) == 0) {
    unsigned m = 2;
    if (name.size() > 13) {
      if (name[13] != '-') throw ParseError("unknown preset: " + name, 13);
      m = static_cast<unsigned>(std::stoul(name.substr(14)));
    }
    return ifs_unit_interval(m);
  }
  throw ParseError("unknown preset: " + name, 0);
}

/// Combinatorial dim-1 system from bare ratios, intervals packed from 0.
inline IFSSystem ifs_from_ratios(const std::vector<Rational>& ratios) {
  if (ratios.size() < 2) throw OutOfRange("need at least two ratios");
  IFSSystem sys;
  sys.dim = 1;
  sys.exact = true;
  Rational off(0);
  for (const Rational& c : ratios) {
    if (!(c > 0 && c < 1)) throw OutOfRange("contraction ratio must lie in (0,1)");
    sys.maps.push_back(sim1_exact(c, off));
    off += c;
  }
  return sys;
}

// ---------------------------------------------------------------------------

/// Unique s > 0 with sum c_i^s = 1: bisection bracket, then Newton to 1e-14.
inline double moran_dimension(const std::vector<double>& ratios) {
  if (ratios.size() < 2) throw OutOfRange("need at least two ratios");
  for (double c : ratios)
    if (!(c > 0 && c < 1)) throw OutOfRange("contraction ratio must lie in (0,1)");
  auto g = [&](double s) {
    double acc = -1.0;
    for (double c : ratios) acc += std::pow(c, s);
    return acc;
  };
  double lo = 0.0, hi = 1.0;
  while (g(hi) > 0) hi *= 2;  // g decreasing, g(0) = m-1 > 0
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    (g(mid) > 0 ? lo : hi) = mid;
  }
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    double gp = 0;
    for (double c : ratios) gp += std::log(c) * std::pow(c, s);
    s -= g(s) / gp;
  }
  return s;
}

inline std::array<double, 2> apply_address(const IFSSystem& sys, const AddressWord& w,
                                           std::array<double, 2> x) {
  for (std::uint8_t c : w) {
    if (c < 1 || c > sys.m()) throw OutOfRange("address letter out of range");
    sys.maps[c - 1].apply(x.data());
  }
  return x;
}

inline std::array<Rational, 2> apply_address_exact(const IFSSystem& sys, const AddressWord& w,
                                                   std::array<Rational, 2> x) {
  for (std::uint8_t c : w) {
    if (c < 1 || c > sys.m()) throw OutOfRange("address letter out of range");
    sys.maps[c - 1].apply_exact(x.data());
  }
  return x;
}

// ---------------------------------------------------------------------------
// Generated point sequence, equal ratios: x_1 = x0 and
// x_n = psi_i(x_j) with i = ((n-1) mod m) + 1, j = ((n-1) div m) + 1,
// so block t of m consecutive points applies every map to x_t.

struct FractalPoints {
  PointSet points;
  std::vector<AddressWord> words;  // word of x_n = base-m digits of n-1, MSB first, +1
};

inline FractalPoints vdc_fractal_points(const IFSSystem& sys, std::size_t N) {
  detail::validate_system(sys);
  if (!sys.equal_ratios()) throw UnequalRatios();
  if (N < 1) throw OutOfRange("N must be at least 1");
  const std::size_t m = sys.m();

  FractalPoints out;
  out.points.dim = sys.dim;
  out.points.exact = sys.exact;
  out.points.xs.reserve(N * sys.dim);
  if (sys.exact) out.points.rat.reserve(N * sys.dim);

  if (sys.exact) {
    std::vector<std::array<Rational, 2>> pts(N);
    pts[0] = sys.x0_exact;
    for (std::size_t n = 2; n <= N; ++n) {
      std::size_t i = (n - 1) % m, j = (n - 1) / m;  // 0-based map, 1-based source j+1
      pts[n - 1] = pts[j];
      sys.maps[i].apply_exact(pts[n - 1].data());
    }
    for (std::size_t n = 0; n < N; ++n)
      for (unsigned k = 0; k < sys.dim; ++k) {
        out.points.rat.push_back(pts[n][k]);
        out.points.xs.push_back(to_double(pts[n][k]));
      }
  } else {
    std::vector<std::array<double, 2>> pts(N);
    pts[0] = sys.x0;
    for (std::size_t n = 2; n <= N; ++n) {
      std::size_t i = (n - 1) % m, j = (n - 1) / m;
      pts[n - 1] = pts[j];
      sys.maps[i].apply(pts[n - 1].data());
    }
    for (std::size_t n = 0; n < N; ++n)
      for (unsigned k = 0; k < sys.dim; ++k) out.points.xs.push_back(pts[n][k]);
  }

  out.words.reserve(N);
  for (std::size_t n = 1; n <= N; ++n) {
    AddressWord w;
    for (std::size_t v = n - 1; v > 0; v /= m)
      w.push_back(static_cast<std::uint8_t>(v % m + 1));
    std::reverse(w.begin(), w.end());
    out.words.push_back(std::move(w));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Partitions into elementary sets.

struct FractalPartition {
  unsigned dim = 1;
  unsigned m = 0;
  unsigned step = 0;
  std::vector<AddressWord> words;
  std::vector<double> probs;               // P(E) = prod c^s over the word
  std::vector<double> map_probs;           // per-letter p_i = c_i^s
  std::vector<std::uint32_t> weights_int;  // single-base only: P = alpha^w
  bool single_base = false;
};

/// All m^k level-k sets, each P = m^{-k}, in generation order: set index c
/// holds exactly point x_{c+1} among the first m^k generated points.
inline FractalPartition vdc_fractal_partition(const IFSSystem& sys, unsigned k,
                                              std::size_t cap = kDefaultIntervalCap) {
  detail::validate_system(sys);
  if (!sys.equal_ratios()) throw UnequalRatios();
  const std::size_t m = sys.m();
  double total = std::pow(static_cast<double>(m), static_cast<double>(k));
  if (total > static_cast<double>(cap)) throw BudgetExceeded(static_cast<std::size_t>(total), cap);
  const auto count = static_cast<std::size_t>(total);

  FractalPartition fp;
  fp.dim = sys.dim;
  fp.m = static_cast<unsigned>(m);
  fp.step = k;
  fp.map_probs.assign(m, 1.0 / static_cast<double>(m));
  const double P = std::pow(static_cast<double>(m), -static_cast<double>(k));
  fp.words.reserve(count);
  fp.probs.assign(count, P);
  for (std::size_t c = 0; c < count; ++c) {
    AddressWord w(k);
    std::size_t v = c;
    // class c: outermost letter = lowest digit = last position
    for (unsigned pos = k; pos-- > 0;) {
      w[pos] = static_cast<std::uint8_t>(v % m + 1);
      v /= m;
    }
    fp.words.push_back(std::move(w));
  }
  return fp;
}

namespace detail {

/// Exponents f_i with c_i = rho^{f_i} for an exact common base rho, or empty.
inline std::vector<unsigned> exact_ratio_exponents(const IFSSystem& sys) {
  if (!sys.exact) return {};
  std::vector<Rational> c;
  for (const auto& s : sys.maps) {
    Rational r = s.A_exact[0];
    if (sys.dim == 2) {
      // exact ratio only when the linear part is diagonal-rational
      if (s.A_exact[1] != 0 || s.A_exact[2] != 0 || s.A_exact[0] != s.A_exact[3]) return {};
    }
    if (r < 0) r = -r;
    c.push_back(r);
  }
  std::vector<double> L;
  for (const auto& r : c) L.push_back(-std::log(to_double(r)));
  long long lcm = 1;
  std::vector<std::pair<long long, long long>> fr;
  for (double v : L) {
    auto pq = rational_approx(v / L[0], 40, 1e-10);
    if (!pq) return {};
    fr.push_back(*pq);
    lcm = std::lcm(lcm, pq->second);
    if (lcm > 4096) return {};
  }
  std::vector<unsigned> f;
  unsigned g = 0;
  for (const auto& pq : fr) {
    long long v = pq.first * (lcm / pq.second);
    if (v < 1 || v > 60000) return {};
    f.push_back(static_cast<unsigned>(v));
    g = std::gcd(g, f.back());
  }
  for (auto& v : f) v /= g;
  if (*std::max_element(f.begin(), f.end()) > 64) return {};
  auto rho = exact_nth_root(c[0], f[0]);
  if (!rho) return {};
  for (std::size_t i = 0; i < c.size(); ++i)
    if (rational_pow(*rho, f[i]) != c[i]) return {};
  return f;
}

}  // namespace detail

/// Khodak-driven partition: split the highest-probability sets first, n split
/// rounds. The address multiset equals the Khodak tree leaves for
/// p_i = c_i^s; exact ratio lattices run on integer weights.
inline FractalPartition khodak_fractal_partition(const IFSSystem& sys, unsigned n,
                                                 std::size_t cap = kDefaultIntervalCap) {
  detail::validate_system(sys);
  RefinementRule rule;
  auto f = detail::exact_ratio_exponents(sys);
  if (!f.empty()) {
    unsigned J = *std::max_element(f.begin(), f.end());
    std::vector<unsigned> mult(J, 0);
    for (unsigned e : f) ++mult[e - 1];
    rule = detail::single_base_rule(pisot_rule(mult).alpha, f);
  } else {
    std::vector<double> ratios;
    for (const auto& s : sys.maps) ratios.push_back(s.ratio);
    double s = moran_dimension(ratios);
    std::vector<double> p;
    for (double c : ratios) p.push_back(std::pow(c, s));
    rule = rule_from_probs(p);
  }
  RefinedPartition rp = rho_refine_n(rule, n, cap, /*track_addresses=*/true);

  FractalPartition fp;
  fp.dim = sys.dim;
  fp.m = static_cast<unsigned>(sys.m());
  fp.step = n;
  fp.map_probs = rule.probs;
  fp.single_base = (rule.mode == LengthMode::SingleBase);
  fp.words.reserve(rp.k);
  // engine addresses run top split first (outermost); stored words run
  // innermost first, so reverse
  for (const auto& a : rp.addresses) fp.words.emplace_back(a.rbegin(), a.rend());
  fp.probs.reserve(rp.k);
  if (fp.single_base) {
    fp.weights_int = rp.weights_int;
    std::uint32_t wmax = 0;
    for (std::uint32_t w : fp.weights_int) wmax = std::max(wmax, w);
    std::vector<double> pw(wmax + 1);
    dd acc{1.0, 0.0};
    pw[0] = 1.0;
    for (std::uint32_t w = 1; w <= wmax; ++w) {
      acc = acc * rule.alpha;
      pw[w] = acc.value();
    }
    for (std::uint32_t w : fp.weights_int) fp.probs.push_back(pw[w]);
  } else {
    for (double w : rp.weights_log) fp.probs.push_back(std::exp(-w));
  }
  return fp;
}

// ---------------------------------------------------------------------------
// Elementary discrepancy. Membership is symbolic: x lies in the set with
// word e iff e is a suffix of x's word padded at the front with 1s, so the
// level-l cell of point x_n in generation order is class (n-1) mod m^l.

namespace detail {

/// ceil(log N / log m) + 1, in integers.
inline unsigned default_depth(std::size_t N, unsigned m) {
  unsigned d = 0;
  std::size_t v = 1;
  while (v < N) {
    v *= m;
    ++d;
  }
  return d + 1;
}

/// Class id of the level-l cell containing a point with this word: letters
/// taken from the word's tail, 1-padded, lowest digit = outermost letter.
inline std::size_t level_class(const AddressWord& w, unsigned level, unsigned m) {
  std::size_t c = 0, base = 1;
  for (unsigned l = 0; l < level; ++l) {
    unsigned digit = 0;
    if (l < w.size()) digit = static_cast<unsigned>(w[w.size() - 1 - l]) - 1;
    c += digit * base;
    base *= m;
  }
  return c;
}

}  // namespace detail

/// D over all elementary sets of level <= max_depth for the first n_prefix
/// addressed points of an equal-ratio system (cell measure m^{-l}).
/// max_depth = 0 picks the default depth for n_prefix.
inline double elementary_discrepancy_points(const std::vector<AddressWord>& words,
                                            std::size_t n_prefix, unsigned m,
                                            unsigned max_depth = 0) {
  if (m < 2) throw OutOfRange("need at least two maps");
  if (n_prefix < 1 || n_prefix > words.size()) throw OutOfRange("bad point prefix");
  if (max_depth == 0) max_depth = detail::default_depth(n_prefix, m);
  // the truncation is only sound once cells of measure < 1/N are inspected
  if (std::pow(static_cast<double>(m), -static_cast<double>(max_depth)) >=
      1.0 / static_cast<double>(n_prefix))
    throw DepthTooShallow(max_depth, n_prefix);
  double cells = std::pow(static_cast<double>(m), static_cast<double>(max_depth));
  if (cells > double(1 << 26)) throw TooLarge(static_cast<std::size_t>(cells), 1u << 26);

  const double N = static_cast<double>(n_prefix);
  double best = 0.0;
  std::size_t ncells = 1;
  for (unsigned level = 1; level <= max_depth; ++level) {
    ncells *= m;
    std::vector<std::uint32_t> cnt(ncells, 0);
    for (std::size_t i = 0; i < n_prefix; ++i) ++cnt[detail::level_class(words[i], level, m)];
    const double P = 1.0 / static_cast<double>(ncells);
    std::uint32_t cmax = 0, cmin = std::numeric_limits<std::uint32_t>::max();
    for (std::uint32_t v : cnt) {
      cmax = std::max(cmax, v);
      cmin = std::min(cmin, v);
    }
    best = std::max({best, static_cast<double>(cmax) / N - P, P - static_cast<double>(cmin) / N});
  }
  return best;
}

/// D_N for every N = 1..n_max in one pass: per-level class counts plus a
/// count-of-counts histogram so each N evaluates in O(depth).
inline std::vector<double> elementary_discrepancy_sweep(const std::vector<AddressWord>& words,
                                                        std::size_t n_max, unsigned m) {
  if (m < 2) throw OutOfRange("need at least two maps");
  if (n_max < 1 || n_max > words.size()) throw OutOfRange("bad point prefix");
  const unsigned lmax = detail::default_depth(n_max, m);
  double cells = std::pow(static_cast<double>(m), static_cast<double>(lmax));
  if (cells > double(1 << 26)) throw TooLarge(static_cast<std::size_t>(cells), 1u << 26);

  struct Level {
    std::size_t ncells = 0;
    std::vector<std::uint32_t> cnt;
    std::vector<std::uint32_t> hist;  // hist[v] = #classes with count v
    std::uint32_t cmax = 0, cmin = 0;
    double P = 0;
  };
  std::vector<Level> levels(lmax);
  std::size_t nc = 1;
  for (unsigned l = 0; l < lmax; ++l) {
    nc *= m;
    levels[l].ncells = nc;
    levels[l].cnt.assign(nc, 0);
    levels[l].hist.assign(2, 0);
    levels[l].hist[0] = static_cast<std::uint32_t>(nc);
    levels[l].P = 1.0 / static_cast<double>(nc);
  }

  std::vector<double> out(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    for (unsigned l = 0; l < lmax; ++l) {
      Level& L = levels[l];
      std::size_t c = detail::level_class(words[n - 1], l + 1, m);
      std::uint32_t v = L.cnt[c]++;
      if (v + 2 >= L.hist.size()) L.hist.resize(v + 3, 0);
      --L.hist[v];
      ++L.hist[v + 1];
      L.cmax = std::max(L.cmax, v + 1);
      while (L.hist[L.cmin] == 0) ++L.cmin;
    }
    const double N = static_cast<double>(n);
    unsigned depth = detail::default_depth(n, m);
    double best = 0.0;
    for (unsigned l = 0; l < std::min(depth, lmax); ++l) {
      const Level& L = levels[l];
      best = std::max({best, static_cast<double>(L.cmax) / N - L.P,
                       L.P - static_cast<double>(L.cmin) / N});
    }
    out[n - 1] = best;
  }
  return out;
}

/// Elementary discrepancy of a partition through one representative point per
/// set (the set's address, 1-padded inward): sup over cells E of level <=
/// max_depth of |count(E)/k - P(E)|. Works for unequal set measures; the
/// default depth descends until the largest cell measure drops below 1/k.
inline double elementary_discrepancy_partition(const FractalPartition& fp,
                                               unsigned max_depth = 0) {
  const std::size_t k = fp.words.size();
  if (k < 1) throw EmptyPartition();
  const double pmax = *std::max_element(fp.map_probs.begin(), fp.map_probs.end());
  if (max_depth == 0) {
    max_depth = 1;
    double P = pmax;
    while (P >= 1.0 / static_cast<double>(k) && max_depth < 64) {
      P *= pmax;
      ++max_depth;
    }
  }
  if (std::pow(pmax, static_cast<double>(max_depth)) >= 1.0 / static_cast<double>(k))
    throw DepthTooShallow(max_depth, k);

  // trie over reversed words (outermost letter first), 1-padded to max_depth
  struct Node {
    std::uint32_t cnt = 0;
    std::vector<std::int32_t> child;
  };
  std::vector<Node> trie(1);
  trie[0].child.assign(fp.m, -1);
  trie[0].cnt = static_cast<std::uint32_t>(k);
  for (const auto& w : fp.words) {
    std::size_t cur = 0;
    for (unsigned d = 0; d < max_depth; ++d) {
      unsigned letter = 1;
      if (d < w.size()) letter = w[w.size() - 1 - d];
      if (trie[cur].child[letter - 1] < 0) {
        trie[cur].child[letter - 1] = static_cast<std::int32_t>(trie.size());
        trie.emplace_back();
        trie.back().child.assign(fp.m, -1);
      }
      cur = static_cast<std::size_t>(trie[cur].child[letter - 1]);
      ++trie[cur].cnt;
    }
  }

  // walk the full m-ary tree: present nodes compare count vs P, absent
  // subtrees contribute their P and prune (their children only shrink P)
  double best = 0.0;
  struct Frame {
    std::int32_t node;
    unsigned depth;
    double P;
  };
  std::vector<Frame> stack{{0, 0, 1.0}};
  const double K = static_cast<double>(k);
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.depth > 0) {
      double cntf = (f.node >= 0) ? static_cast<double>(trie[static_cast<std::size_t>(f.node)].cnt) : 0.0;
      best = std::max(best, std::abs(cntf / K - f.P));
      if (f.node < 0) continue;  // empty subtree: deeper devs only shrink
    }
    if (f.depth == max_depth) continue;
    for (unsigned j = 0; j < fp.m; ++j) {
      std::int32_t ch = (f.node >= 0) ? trie[static_cast<std::size_t>(f.node)].child[j] : -1;
      stack.push_back({ch, f.depth + 1, f.P * fp.map_probs[j]});
    }
  }
  return best;
}

}  // namespace udk
