#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "udk/dd.hpp"
#include "udk/errors.hpp"
#include "udk/rational.hpp"

namespace udk {

inline constexpr std::size_t kDefaultIntervalCap = 10'000'000;

// How interval lengths are represented and compared:
//   ExactRational - lengths are exact rationals, ties are exact
//   SingleBase    - every p_i = alpha^{e_i}; an interval's length is alpha^W
//                   for the integer weight W, so ties are integer-exact
//   FloatLog      - lengths compared via accumulated log-weights with a
//                   relative tie tolerance of 1e-12 (documented; genuine ties
//                   are measure-zero for irrational length ratios)
enum class LengthMode { ExactRational, SingleBase, FloatLog };

struct RefinementRule {
  unsigned m = 0;
  LengthMode mode = LengthMode::FloatLog;
  std::vector<double> probs;          // double view, always filled
  std::vector<Rational> probs_exact;  // ExactRational mode
  dd alpha{0.0};                      // SingleBase: p_i = alpha^{exponents[i]}
  std::vector<unsigned> exponents;
  std::vector<double> log_inv_p;      // log(1/p_i)
};

struct LSParams {
  unsigned L = 0;
  unsigned S = 0;
  double alpha = 0.0;  // root in (0,1) of L*alpha + S*alpha^2 = 1
};

/// Immutable snapshot of rho^n omega. Exponent vectors are stored row-major
/// (k rows of m counts); the per-interval weight key lives in the vector
/// matching the rule's length mode.
struct RefinedPartition {
  RefinementRule rule;
  unsigned step = 0;
  std::size_t k = 0;
  std::vector<std::uint16_t> exps;
  std::vector<double> breaks;                        // right endpoints
  std::vector<Rational> breaks_exact;                // ExactRational mode
  std::vector<Rational> lengths_exact;               // ExactRational mode
  std::vector<std::uint32_t> weights_int;            // SingleBase mode
  std::vector<double> weights_log;                   // FloatLog mode
  std::vector<std::vector<std::uint8_t>> addresses;  // first split first, if tracked
  double min_length = 0.0;                           // a_n
  double max_length = 0.0;                           // A_n
};

namespace detail {
inline void validate_rule_shape(std::size_t m) {
  if (m < 2) throw DegenerateRule("a refinement rule needs at least 2 parts");
  if (m > 60000) throw OutOfRange("rule has too many parts");
}
}  // namespace detail

/// Rule from exact fractional lengths; the lengths must sum to exactly 1.
inline RefinementRule rule_from_fractions(const std::vector<Rational>& p) {
  detail::validate_rule_shape(p.size());
  Rational sum = 0;
  for (const Rational& v : p) {
    if (!(v > 0 && v < 1)) throw OutOfRange("rule lengths must lie in (0,1)");
    sum += v;
  }
  if (sum != 1) throw SumNotOne(format_rational(Rational(1) - sum));
  RefinementRule r;
  r.m = static_cast<unsigned>(p.size());
  r.mode = LengthMode::ExactRational;
  r.probs_exact = p;
  for (const Rational& v : p) {
    r.probs.push_back(to_double(v));
    r.log_inv_p.push_back(-std::log(to_double(v)));
  }
  return r;
}

/// Rule from float lengths (irrational splitting ratios).
inline RefinementRule rule_from_probs(const std::vector<double>& p) {
  detail::validate_rule_shape(p.size());
  double sum = 0;
  for (double v : p) {
    if (!(v > 0 && v < 1)) throw OutOfRange("rule lengths must lie in (0,1)");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw SumNotOne(std::to_string(1.0 - sum));
  RefinementRule r;
  r.m = static_cast<unsigned>(p.size());
  r.mode = LengthMode::FloatLog;
  r.probs = p;
  for (double v : p) r.log_inv_p.push_back(-std::log(v));
  return r;
}

namespace detail {
inline RefinementRule single_base_rule(dd alpha, std::vector<unsigned> exponents) {
  RefinementRule r;
  r.m = static_cast<unsigned>(exponents.size());
  r.mode = LengthMode::SingleBase;
  r.alpha = alpha;
  r.exponents = std::move(exponents);
  for (unsigned e : r.exponents) {
    double p = dd_pow(alpha, e).value();
    r.probs.push_back(p);
    r.log_inv_p.push_back(-std::log(p));
  }
  return r;
}
}  // namespace detail

inline LSParams ls_params(unsigned L, unsigned S) {
  if (L < 1 || S < 1) throw OutOfRange("LS parameters must be positive");
  // alpha = (-L + sqrt(L^2 + 4S)) / (2S), the root of S a^2 + L a - 1 in (0,1)
  dd disc = dd{static_cast<double>(L)} * dd{static_cast<double>(L)} +
            dd{4.0} * dd{static_cast<double>(S)};
  dd alpha = (dd_sqrt(disc) - dd{static_cast<double>(L)}) / (dd{2.0} * dd{static_cast<double>(S)});
  return {L, S, alpha.value()};
}

/// L parts of length alpha and S parts of length alpha^2, L*alpha + S*alpha^2 = 1.
inline RefinementRule ls_rule(unsigned L, unsigned S) {
  if (L < 1 || S < 1) throw OutOfRange("LS parameters must be positive");
  dd disc = dd{static_cast<double>(L)} * dd{static_cast<double>(L)} +
            dd{4.0} * dd{static_cast<double>(S)};
  dd alpha = (dd_sqrt(disc) - dd{static_cast<double>(L)}) / (dd{2.0} * dd{static_cast<double>(S)});
  std::vector<unsigned> exps;
  for (unsigned i = 0; i < L; ++i) exps.push_back(1);
  for (unsigned i = 0; i < S; ++i) exps.push_back(2);
  return detail::single_base_rule(alpha, std::move(exps));
}

/// Rule with a_j parts of length alpha^j where 1/alpha is the dominant root of
/// z^k - a_1 z^{k-1} - ... - a_k; a_1 >= ... >= a_k >= 1 makes that root a
///// Pisot number. a = {1} is rejected: it forces alpha = 1.
inline RefinementRule pisot_rule(const std::vector<unsigned>& a) {
  if (a.empty()) throw OutOfRange("empty coefficient list");
  unsigned total = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] < 1) throw OutOfRange("coefficients must be >= 1");
    if (j && a[j] > a[j - 1]) throw OutOfRange("coefficients must be non-increasing");
    total += a[j];
  }
  if (total < 2) throw DegenerateRule("a = [1] gives the degenerate ratio alpha = 1");

  // Solve g(alpha) = sum_j a_j alpha^j - 1 = 0; g is increasing on (0,1).
  auto g = [&](dd x) {
    dd acc{0.0};
    dd pw{1.0};
    for (std::size_t j = 0; j < a.size(); ++j) {
      pw = pw * x;
      acc = acc + dd{static_cast<double>(a[j])} * pw;
    }
    return acc - dd{1.0};
  };
  auto gp = [&](dd x) {
    dd acc{0.0};
    dd pw{1.0};
    for (std::size_t j = 0; j < a.size(); ++j) {
      acc = acc + dd{static_cast<double>((j + 1) * a[j])} * pw;
      pw = pw * x;
    }
    return acc;
  };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    (g(dd{mid}).value() > 0 ? hi : lo) = mid;
  }
  dd alpha{0.5 * (lo + hi)};
  for (int it = 0; it < 3; ++it) alpha = alpha - g(alpha) / gp(alpha);

  std::vector<unsigned> exps;
  for (std::size_t j = 0; j < a.size(); ++j)
    for (unsigned c = 0; c < a[j]; ++c) exps.push_back(static_cast<unsigned>(j + 1));
  return detail::single_base_rule(alpha, std::move(exps));
}

/// Iterated rho-refinement engine. Splits every interval of maximal length
/// (ties included) into m parts homothetic to the rule, children replacing the
/// parent in place left to right.
class Refiner {
 public:
  explicit Refiner(RefinementRule rule, std::size_t cap = kDefaultIntervalCap,
                   bool track_addresses = false)
      : rule_(std::move(rule)), cap_(cap), track_(track_addresses) {
    exps_.assign(rule_.m, 0);
    if (rule_.mode == LengthMode::ExactRational) len_exact_.assign(1, Rational(1));
    if (rule_.mode == LengthMode::SingleBase) weight_int_.assign(1, 0);
    if (rule_.mode == LengthMode::FloatLog) weight_log_.assign(1, 0.0);
    if (track_) addr_.assign(1, {});
    k_ = 1;
  }

  /// Restore an engine from a snapshot (continuing a refinement).
  explicit Refiner(const RefinedPartition& p, std::size_t cap = kDefaultIntervalCap)
      : rule_(p.rule), cap_(cap), track_(!p.addresses.empty()) {
    exps_ = p.exps;
    len_exact_ = p.lengths_exact;
    weight_int_ = p.weights_int;
    weight_log_ = p.weights_log;
    addr_ = p.addresses;
    step_ = p.step;
    k_ = p.k;
  }

  std::size_t k() const { return k_; }
  unsigned step_count() const { return step_; }
  const RefinementRule& rule() const { return rule_; }

  void run(unsigned steps) {
    for (unsigned i = 0; i < steps; ++i) step();
  }

  void step() {
    const unsigned m = rule_.m;
    std::vector<char> split(k_, 0);
    std::size_t n_split = 0;
    switch (rule_.mode) {
      case LengthMode::ExactRational: {
        const Rational* mx = &len_exact_[0];
        for (const Rational& v : len_exact_)
          if (v > *mx) mx = &v;
        for (std::size_t i = 0; i < k_; ++i) split[i] = (len_exact_[i] == *mx);
        break;
      }
      case LengthMode::SingleBase: {
        std::uint32_t wmin = *std::min_element(weight_int_.begin(), weight_int_.end());
        for (std::size_t i = 0; i < k_; ++i) split[i] = (weight_int_[i] == wmin);
        break;
      }
      case LengthMode::FloatLog: {
        double wmin = *std::min_element(weight_log_.begin(), weight_log_.end());
        double tol = 1e-12 * std::max(1.0, wmin);
        for (std::size_t i = 0; i < k_; ++i) split[i] = (weight_log_[i] <= wmin + tol);
        break;
      }
    }
    for (char c : split) n_split += static_cast<unsigned char>(c);
    const std::size_t new_k = k_ + n_split * (m - 1);
    if (new_k > cap_) throw BudgetExceeded(new_k, cap_);

    std::vector<std::uint16_t> exps2;
    exps2.reserve(new_k * m);
    std::vector<Rational> len2;
    std::vector<std::uint32_t> wi2;
    std::vector<double> wl2;
    std::vector<std::vector<std::uint8_t>> addr2;
    if (rule_.mode == LengthMode::ExactRational) len2.reserve(new_k);
    if (rule_.mode == LengthMode::SingleBase) wi2.reserve(new_k);
    if (rule_.mode == LengthMode::FloatLog) wl2.reserve(new_k);
    if (track_) addr2.reserve(new_k);

    for (std::size_t i = 0; i < k_; ++i) {
      const std::uint16_t* row = &exps_[i * m];
      if (!split[i]) {
        exps2.insert(exps2.end(), row, row + m);
        if (rule_.mode == LengthMode::ExactRational) len2.push_back(len_exact_[i]);
        if (rule_.mode == LengthMode::SingleBase) wi2.push_back(weight_int_[i]);
        if (rule_.mode == LengthMode::FloatLog) wl2.push_back(weight_log_[i]);
        if (track_) addr2.push_back(addr_[i]);
        continue;
      }
      for (unsigned c = 0; c < m; ++c) {
        for (unsigned t = 0; t < m; ++t) exps2.push_back(row[t] + (t == c ? 1 : 0));
        if (rule_.mode == LengthMode::ExactRational)
          len2.push_back(len_exact_[i] * rule_.probs_exact[c]);
        if (rule_.mode == LengthMode::SingleBase)
          wi2.push_back(weight_int_[i] + rule_.exponents[c]);
        if (rule_.mode == LengthMode::FloatLog)
          wl2.push_back(weight_log_[i] + rule_.log_inv_p[c]);
        if (track_) {
          addr2.push_back(addr_[i]);
          addr2.back().push_back(static_cast<std::uint8_t>(c + 1));
        }
      }
    }
    exps_ = std::move(exps2);
    len_exact_ = std::move(len2);
    weight_int_ = std::move(wi2);
    weight_log_ = std::move(wl2);
    addr_ = std::move(addr2);
    k_ = new_k;
    ++step_;
  }

  double max_length() const {
    switch (rule_.mode) {
      case LengthMode::ExactRational:
        return to_double(*std::max_element(len_exact_.begin(), len_exact_.end()));
      case LengthMode::SingleBase: {
        std::uint32_t wmin = *std::min_element(weight_int_.begin(), weight_int_.end());
        return dd_pow(rule_.alpha, wmin).value();
      }
      case LengthMode::FloatLog:
        return std::exp(-*std::min_element(weight_log_.begin(), weight_log_.end()));
    }
    return 0.0;
  }

  double min_length() const {
    switch (rule_.mode) {
      case LengthMode::ExactRational:
        return to_double(*std::min_element(len_exact_.begin(), len_exact_.end()));
      case LengthMode::SingleBase: {
        std::uint32_t wmax = *std::max_element(weight_int_.begin(), weight_int_.end());
        return dd_pow(rule_.alpha, wmax).value();
      }
      case LengthMode::FloatLog:
        return std::exp(-*std::max_element(weight_log_.begin(), weight_log_.end()));
    }
    return 0.0;
  }

  /// Right endpoints as doubles; prefix sums run in double-double so the
  /// accumulated error stays far below float resolution. The final endpoint is
  /// snapped to exactly 1 (its true value) when within 1e-9.
  std::vector<double> breakpoints() const {
    std::vector<double> out;
    out.reserve(k_);
    dd acc{0.0};
    switch (rule_.mode) {
      case LengthMode::ExactRational: {
        for (std::size_t i = 0; i < k_; ++i) {
          acc = acc + dd{to_double(len_exact_[i])};
          out.push_back(acc.value());
        }
        // exact prefix rationals are available via breakpoints_exact()
        break;
      }
      case LengthMode::SingleBase: {
        std::uint32_t wmax = *std::max_element(weight_int_.begin(), weight_int_.end());
        std::vector<dd> pw(wmax + 1, dd{1.0});
        for (std::uint32_t w = 1; w <= wmax; ++w) pw[w] = pw[w - 1] * rule_.alpha;
        for (std::size_t i = 0; i < k_; ++i) {
          acc = acc + pw[weight_int_[i]];
          out.push_back(acc.value());
        }
        break;
      }
      case LengthMode::FloatLog: {
        for (std::size_t i = 0; i < k_; ++i) {
          acc = acc + dd{std::exp(-weight_log_[i])};
          out.push_back(acc.value());
        }
        break;
      }
    }
    if (!out.empty() && std::abs(out.back() - 1.0) < 1e-9) out.back() = 1.0;
    return out;
  }

  std::vector<Rational> breakpoints_exact() const {
    std::vector<Rational> out;
    out.reserve(k_);
    Rational acc = 0;
    for (const Rational& l : len_exact_) {
      acc += l;
      out.push_back(acc);
    }
    return out;
  }

  RefinedPartition snapshot(bool with_breaks = true) const {
    RefinedPartition p;
    p.rule = rule_;
    p.step = step_;
    p.k = k_;
    p.exps = exps_;
    p.lengths_exact = len_exact_;
    p.weights_int = weight_int_;
    p.weights_log = weight_log_;
    p.addresses = addr_;
    if (with_breaks) {
      p.breaks = breakpoints();
      if (rule_.mode == LengthMode::ExactRational) p.breaks_exact = breakpoints_exact();
    }
    p.min_length = min_length();
    p.max_length = max_length();
    return p;
  }

  const std::vector<std::uint16_t>& exponent_rows() const { return exps_; }
  const std::vector<std::uint32_t>& weights_int() const { return weight_int_; }
  const std::vector<Rational>& lengths_exact() const { return len_exact_; }
  const std::vector<double>& weights_log() const { return weight_log_; }
  const std::vector<std::vector<std::uint8_t>>& addresses() const { return addr_; }

 private:
  RefinementRule rule_;
  std::size_t cap_;
  bool track_;
  unsigned step_ = 0;
  std::size_t k_ = 0;
  std::vector<std::uint16_t> exps_;
  std::vector<Rational> len_exact_;
  std::vector<std::uint32_t> weight_int_;
  std::vector<double> weight_log_;
  std::vector<std::vector<std::uint8_t>> addr_;
};

/// One rho-refinement of a snapshot.
inline RefinedPartition rho_refine(const RefinedPartition& p,
                                   std::size_t cap = kDefaultIntervalCap) {
  Refiner r(p, cap);
  r.step();
  return r.snapshot();
}

/// rho^n omega from the trivial partition.
inline RefinedPartition rho_refine_n(const RefinementRule& rule, unsigned n,
                                     std::size_t cap = kDefaultIntervalCap,
                                     bool track_addresses = false) {
  Refiner r(rule, cap, track_addresses);
  r.run(n);
  return r.snapshot();
}

/// Kakutani alpha-refinement: rho-refinement with rho = {[0,alpha],[alpha,1]}.
inline RefinedPartition alpha_refine_n(const Rational& alpha, unsigned n,
                                       std::size_t cap = kDefaultIntervalCap) {
  if (!(alpha > 0 && alpha < 1)) throw OutOfRange("alpha must lie in (0,1)");
  return rho_refine_n(rule_from_fractions({alpha, 1 - alpha}), n, cap);
}

inline RefinedPartition alpha_refine_n(double alpha, unsigned n,
                                       std::size_t cap = kDefaultIntervalCap) {
  if (!(alpha > 0 && alpha < 1)) throw OutOfRange("alpha must lie in (0,1)");
  return rho_refine_n(rule_from_probs({alpha, 1 - alpha}), n, cap);
}

/// n-th rho-adic partition: every interval split at every step, m^n intervals
/// in lexicographic address order.
inline RefinedPartition rho_adic_partition(const RefinementRule& rule, unsigned n,
                                           std::size_t cap = kDefaultIntervalCap) {
  double kf = std::pow(static_cast<double>(rule.m), static_cast<double>(n));
  if (kf > static_cast<double>(cap))
    throw BudgetExceeded(static_cast<std::size_t>(std::min(kf, 1e18)), cap);
  const std::size_t k = static_cast<std::size_t>(kf + 0.5);
  const unsigned m = rule.m;

  RefinedPartition p;
  p.rule = rule;
  p.step = n;
  p.k = k;
  p.exps.reserve(k * m);
  std::vector<unsigned> digits(n, 0);  // digits[0] is the first (outermost) split
  Rational acc_exact = 0;
  dd acc{0.0};
  for (std::size_t idx = 0; idx < k; ++idx) {
    std::vector<std::uint16_t> row(m, 0);
    for (unsigned d : digits) row[d]++;
    p.exps.insert(p.exps.end(), row.begin(), row.end());
    p.addresses.emplace_back();
    for (unsigned d : digits) p.addresses.back().push_back(static_cast<std::uint8_t>(d + 1));
    switch (rule.mode) {
      case LengthMode::ExactRational: {
        Rational len = 1;
        for (unsigned t = 0; t < m; ++t)
          if (row[t]) len *= rational_pow(rule.probs_exact[t], row[t]);
        p.lengths_exact.push_back(len);
        acc_exact += len;
        p.breaks_exact.push_back(acc_exact);
        p.breaks.push_back(to_double(acc_exact));
        break;
      }
      case LengthMode::SingleBase: {
        std::uint32_t w = 0;
        for (unsigned t = 0; t < m; ++t) w += row[t] * rule.exponents[t];
        p.weights_int.push_back(w);
        acc = acc + dd_pow(rule.alpha, w);
        p.breaks.push_back(acc.value());
        break;
      }
      case LengthMode::FloatLog: {
        double w = 0;
        for (unsigned t = 0; t < m; ++t) w += row[t] * rule.log_inv_p[t];
        p.weights_log.push_back(w);
        acc = acc + dd{std::exp(-w)};
        p.breaks.push_back(acc.value());
        break;
      }
    }
    // increment mixed-radix counter, last digit fastest (lexicographic order)
    for (std::size_t t = n; t-- > 0;) {
      if (++digits[t] < m) break;
      digits[t] = 0;
    }
  }
  if (!p.breaks.empty() && std::abs(p.breaks.back() - 1.0) < 1e-9) p.breaks.back() = 1.0;
  if (!p.lengths_exact.empty()) {
    p.min_length = to_double(*std::min_element(p.lengths_exact.begin(), p.lengths_exact.end()));
    p.max_length = to_double(*std::max_element(p.lengths_exact.begin(), p.lengths_exact.end()));
  } else if (!p.breaks.empty()) {
    double mn = 1.0, mx = 0.0, prev = 0.0;
    for (double b : p.breaks) {
      mn = std::min(mn, b - prev);
      mx = std::max(mx, b - prev);
      prev = b;
    }
    p.min_length = mn;
    p.max_length = mx;
  }
  return p;
}

}  // namespace udk
