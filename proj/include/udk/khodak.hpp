#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "udk/errors.hpp"
#include "udk/rational.hpp"
#include "udk/refine.hpp"

namespace udk {

/// Splitting probabilities p_1..p_m. When a lattice is attached every
/// log(1/p_j) equals n_j * lambda exactly; structured rules assert this,
/// float inputs only ever get it through precision-bounded detection.
struct ProbabilityVector {
  std::vector<double> p;
  std::vector<Rational> p_exact;
  bool exact = false;
  bool has_lattice = false;
  double lambda = 0.0;
  std::vector<unsigned> nj;
  // exact common base c with p_j = c^{n_j}, when the lattice came from exact input
  bool has_exact_base = false;
  Rational base_exact;

  std::size_t m() const { return p.size(); }
};

struct RationalRelation {
  double lambda = 0.0;
  std::vector<unsigned> nj;
};

/// Partial quotients [a_0; a_1, ...] of x > 0. Stops at the requested depth
/// (clamped to 60), when the tail is exhausted at float precision, or when a
/// convergent denominator would pass 10^15.
inline std::vector<long long> continued_fraction(double x, unsigned depth = 40) {
  if (!(x > 0)) throw OutOfRange("continued fraction wants x > 0");
  depth = std::min(depth, 60u);
  std::vector<long long> a;
  double v = x;
  long long qm1 = 0, q0 = 1;  // denominators q_{i-1}, q_i
  for (unsigned i = 0; i < depth; ++i) {
    double fl = std::floor(v);
    if (fl > 9e15) break;
    long long ai = static_cast<long long>(fl);
    long long qn = (i == 0) ? 1 : ai * q0 + qm1;
    if (qn > 1000000000000000LL) break;
    a.push_back(ai);
    qm1 = (i == 0) ? 0 : q0;
    q0 = qn;
    double frac = v - fl;
    if (frac < 1e-12) break;
    v = 1.0 / frac;
  }
  return a;
}

namespace detail {

/// First convergent of x within `tol`, or nullopt if none appears before the
/// continued fraction is exhausted.
inline std::optional<std::pair<long long, long long>> rational_approx(double x, unsigned depth,
                                                                      double tol) {
  auto a = continued_fraction(x, depth);
  long long pm1 = 0, p0 = 1;  // h_{-2} = 0, h_{-1} = 1
  long long qm1 = 1, q0 = 0;  // k_{-2} = 1, k_{-1} = 0
  for (long long ai : a) {
    long long pn = ai * p0 + pm1;
    long long qn = ai * q0 + qm1;
    pm1 = p0;
    p0 = pn;
    qm1 = q0;
    q0 = qn;
    if (std::abs(x - static_cast<double>(pn) / static_cast<double>(qn)) < tol)
      return std::make_pair(pn, qn);
  }
  return std::nullopt;
}

inline void validate_probs(const std::vector<double>& p) {
  if (p.size() < 2) throw OutOfRange("need at least two probabilities");
  double sum = 0;
  for (double v : p) {
    if (!(v > 0 && v < 1)) throw OutOfRange("probabilities must lie in (0,1)");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw SumNotOne(std::to_string(1.0 - sum));
}

}  // namespace detail

inline std::optional<RationalRelation> detect_rational_relation(const ProbabilityVector& pv,
                                                                unsigned depth = 40);

inline ProbabilityVector probvec(const std::vector<double>& p) {
  detail::validate_probs(p);
  ProbabilityVector pv;
  pv.p = p;
  return pv;
}

/// Exact probabilities; a common rational base p_j = c^{n_j} is detected and
/// verified exactly, so the lattice assertion carries no float uncertainty.
inline ProbabilityVector probvec_exact(const std::vector<Rational>& p) {
  if (p.size() < 2) throw OutOfRange("need at least two probabilities");
  Rational sum = 0;
  for (const Rational& v : p) {
    if (!(v > 0 && v < 1)) throw OutOfRange("probabilities must lie in (0,1)");
    sum += v;
  }
  if (sum != 1) throw SumNotOne(format_rational(Rational(1) - sum));
  ProbabilityVector pv;
  pv.exact = true;
  pv.p_exact = p;
  for (const Rational& v : p) pv.p.push_back(to_double(v));

  // candidate n_j from float detection, then exact verification
  auto rel = detect_rational_relation(pv);
  if (rel) {
    auto croot = exact_nth_root(p[0], rel->nj[0]);
    if (croot) {
      bool ok = true;
      for (std::size_t j = 0; j < p.size(); ++j)
        if (rational_pow(*croot, rel->nj[j]) != p[j]) ok = false;
      if (ok) {
        pv.has_lattice = true;
        pv.lambda = rel->lambda;
        pv.nj = rel->nj;
        pv.has_exact_base = true;
        pv.base_exact = *croot;
      }
    }
  }
  return pv;
}

/// Probability view of a refinement rule. SingleBase rules assert their
/// lattice structurally: log(1/p_j) = e_j * log(1/alpha).
inline ProbabilityVector probvec_from_rule(const RefinementRule& rule) {
  if (rule.mode == LengthMode::ExactRational) return probvec_exact(rule.probs_exact);
  if (rule.mode == LengthMode::SingleBase) {
    ProbabilityVector pv;
    pv.p = rule.probs;
    unsigned g = 0;
    for (unsigned e : rule.exponents) g = std::gcd(g, e);
    pv.has_lattice = true;
    pv.lambda = -std::log(rule.alpha.value()) * static_cast<double>(g);
    for (unsigned e : rule.exponents) pv.nj.push_back(e / g);
    return pv;
  }
  return probvec(rule.probs);
}

/// H = sum p_j log(1/p_j), natural log.
inline double entropy(const ProbabilityVector& pv) {
  double h = 0;
  for (double v : pv.p) h -= v * std::log(v);
  return h;
}

/// Lambda and coprime n_j with log(1/p_j) = n_j Lambda, if the log-ratios
/// admit a rational relation discoverable at this precision. Detection is
/// bounded: resulting n_j above 64 (the spectral degree cap) are treated as
/// absence. Absence is a value, not an error.
inline std::optional<RationalRelation> detect_rational_relation(const ProbabilityVector& pv,
                                                                unsigned depth) {
  if (pv.has_lattice) return RationalRelation{pv.lambda, pv.nj};
  const std::size_t m = pv.m();
  std::vector<double> L(m);
  for (std::size_t j = 0; j < m; ++j) L[j] = -std::log(pv.p[j]);

  long long lcm = 1;
  std::vector<std::pair<long long, long long>> fr(m);
  for (std::size_t j = 0; j < m; ++j) {
    auto pq = detail::rational_approx(L[j] / L[0], depth, 1e-10);
    if (!pq) return std::nullopt;
    fr[j] = *pq;
    lcm = std::lcm(lcm, pq->second);
    if (lcm > 4096) return std::nullopt;
  }
  std::vector<unsigned> nj(m);
  unsigned g = 0;
  for (std::size_t j = 0; j < m; ++j) {
    long long v = fr[j].first * (lcm / fr[j].second);
    if (v < 1 || v > 1000000) return std::nullopt;
    nj[j] = static_cast<unsigned>(v);
    g = std::gcd(g, nj[j]);
  }
  for (auto& v : nj) v /= g;
  unsigned nmax = *std::max_element(nj.begin(), nj.end());
  if (nmax > 64) return std::nullopt;

  double lambda = L[0] / (static_cast<double>(nj[0]));
  for (std::size_t j = 0; j < m; ++j)
    if (std::abs(L[j] - static_cast<double>(nj[j]) * lambda) > 1e-10) return std::nullopt;
  return RationalRelation{lambda, nj};
}

/// G(n) = A(e^{Lambda n}) on the lattice: G(n) = 1 + sum_j G(n - n_j), zero
/// for negative arguments.
inline std::vector<std::uint64_t> lattice_g(const std::vector<unsigned>& nj, unsigned n) {
  std::vector<std::uint64_t> g(n + 1, 0);
  for (unsigned t = 0; t <= n; ++t) {
    std::uint64_t acc = 1;
    for (unsigned d : nj)
      if (t >= d) acc += g[t - d];
    g[t] = acc;
  }
  return g;
}

/// A(v): number of tree nodes x with P(x) >= 1/v. Recurrence
/// A(v) = 0 for v < 1 and A(v) = 1 + sum_j A(p_j v) otherwise. Lattice input
/// collapses to the integer recurrence; otherwise a pruned walk evaluates it
/// with the visited-node budget enforced.
inline std::uint64_t a_of_v(const ProbabilityVector& pv, double v,
                            std::uint64_t budget = 100000000ULL) {
  if (v < 1.0) return 0;
  if (pv.has_lattice) {
    double x = std::log(v) / pv.lambda;
    auto n = static_cast<long long>(std::floor(x + 1e-9));
    if (n < 0) return 0;
    if (n > 2000000) throw BudgetExceeded(static_cast<std::size_t>(n), 2000000);
    return lattice_g(pv.nj, static_cast<unsigned>(n))[static_cast<std::size_t>(n)];
  }
  std::uint64_t count = 0;
  std::vector<double> stack{1.0};
  while (!stack.empty()) {
    double P = stack.back();
    stack.pop_back();
    if (P * v < 1.0 - 1e-12) continue;
    if (++count > budget) throw BudgetExceeded(count, budget);
    for (double pj : pv.p) stack.push_back(P * pj);
  }
  return count;
}

/// Exact-threshold variant for exact probability vectors. A verified exact
/// base c turns the threshold into the largest integer t with c^t >= 1/v,
/// found by exact comparison, then the integer recurrence applies.
inline std::uint64_t a_of_v(const ProbabilityVector& pv, const Rational& v,
                            std::uint64_t budget = 100000000ULL) {
  if (!pv.exact) return a_of_v(pv, to_double(v), budget);
  if (v < 1) return 0;
  if (pv.has_exact_base) {
    Rational pw = 1;
    std::uint64_t t = 0;
    while (pw * v >= 1) {
      pw *= pv.base_exact;
      ++t;
      if (t > 2000000) throw BudgetExceeded(t, 2000000);
    }
    // t-1 is the largest exponent with c^{t-1} * v >= 1
    if (t == 0) return 0;
    unsigned n = static_cast<unsigned>(t - 1);
    return lattice_g(pv.nj, n)[n];
  }
  std::uint64_t count = 0;
  std::vector<Rational> stack{Rational(1)};
  while (!stack.empty()) {
    Rational P = stack.back();
    stack.pop_back();
    if (P * v < 1) continue;
    if (++count > budget) throw BudgetExceeded(count, budget);
    for (const Rational& pj : pv.p_exact) stack.push_back(P * pj);
  }
  return count;
}

/// M_r = (m-1) A(1/r) + 1: external node count of the Khodak tree T(r).
inline std::uint64_t m_of_r(const ProbabilityVector& pv, double r,
                            std::uint64_t budget = 100000000ULL) {
  if (!(r > 0 && r <= 1)) throw OutOfRange("r must lie in (0,1]");
  return (pv.m() - 1) * a_of_v(pv, 1.0 / r, budget) + 1;
}

inline std::uint64_t m_of_r(const ProbabilityVector& pv, const Rational& r,
                            std::uint64_t budget = 100000000ULL) {
  if (!(r > 0 && r <= 1)) throw OutOfRange("r must lie in (0,1]");
  return (pv.m() - 1) * a_of_v(pv, Rational(1) / r, budget) + 1;
}

// ---------------------------------------------------------------------------
// Khodak tree enumeration. Used as an independent route to the leaf multisets
// that the refinement engine produces by splitting.

/// Leaves of T(r) for integer-lattice rules, threshold given as an integer
/// weight: a node is internal iff its weight W satisfies W <= w_thr
/// (equivalently P = e^{-Lambda W} >= r = e^{-Lambda w_thr}).
struct WeightTreeLeaves {
  std::vector<std::uint32_t> weights;              // leaf weights, DFS order
  std::vector<std::vector<std::uint8_t>> words;    // root-to-leaf letters, if tracked
};

inline WeightTreeLeaves weight_tree_leaves(const std::vector<unsigned>& letter_weights,
                                           std::uint32_t w_thr,
                                           std::size_t cap = kDefaultIntervalCap,
                                           bool track_words = false) {
  WeightTreeLeaves out;
  struct Node {
    std::uint32_t w;
    std::vector<std::uint8_t> word;
  };
  std::vector<Node> stack{{0, {}}};
  while (!stack.empty()) {
    Node nd = std::move(stack.back());
    stack.pop_back();
    if (nd.w > w_thr) {
      if (out.weights.size() >= cap) throw BudgetExceeded(out.weights.size() + 1, cap);
      out.weights.push_back(nd.w);
      if (track_words) out.words.push_back(std::move(nd.word));
      continue;
    }
    // push children in reverse so letter 1 pops first (left-to-right DFS)
    for (std::size_t j = letter_weights.size(); j-- > 0;) {
      Node ch{nd.w + static_cast<std::uint32_t>(letter_weights[j]), {}};
      if (track_words) {
        ch.word = nd.word;
        ch.word.push_back(static_cast<std::uint8_t>(j + 1));
      }
      stack.push_back(std::move(ch));
    }
  }
  return out;
}

/// Weight thresholds w_1..w_n for the nested tree sequence: r_1 = 1 and
/// r_{j+1} = max leaf probability of T(r_j), i.e. the minimal leaf weight.
inline std::vector<std::uint32_t> khodak_weight_thresholds(
    const std::vector<unsigned>& letter_weights, unsigned n,
    std::size_t cap = kDefaultIntervalCap) {
  std::vector<std::uint32_t> out;
  std::uint32_t w = 0;
  for (unsigned j = 1; j <= n; ++j) {
    out.push_back(w);
    auto leaves = weight_tree_leaves(letter_weights, w, cap);
    w = *std::min_element(leaves.weights.begin(), leaves.weights.end());
  }
  return out;
}

/// Exact-probability tree leaves: internal iff P >= r, exact comparisons.
struct ExactTreeLeaves {
  std::vector<Rational> probs;
  std::vector<std::vector<std::uint8_t>> words;
};

inline ExactTreeLeaves exact_tree_leaves(const ProbabilityVector& pv, const Rational& r,
                                         std::size_t cap = kDefaultIntervalCap,
                                         bool track_words = false) {
  if (!pv.exact) throw OutOfRange("exact tree enumeration needs exact probabilities");
  ExactTreeLeaves out;
  struct Node {
    Rational P;
    std::vector<std::uint8_t> word;
  };
  std::vector<Node> stack{{Rational(1), {}}};
  while (!stack.empty()) {
    Node nd = std::move(stack.back());
    stack.pop_back();
    if (nd.P < r) {
      if (out.probs.size() >= cap) throw BudgetExceeded(out.probs.size() + 1, cap);
      out.probs.push_back(std::move(nd.P));
      if (track_words) out.words.push_back(std::move(nd.word));
      continue;
    }
    for (std::size_t j = pv.p_exact.size(); j-- > 0;) {
      Node ch{nd.P * pv.p_exact[j], {}};
      if (track_words) {
        ch.word = nd.word;
        ch.word.push_back(static_cast<std::uint8_t>(j + 1));
      }
      stack.push_back(std::move(ch));
    }
  }
  return out;
}

/// Threshold sequence r_1 = 1, r_{j+1} = max leaf P of T(r_j), exact.
inline std::vector<Rational> khodak_exact_thresholds(const ProbabilityVector& pv, unsigned n,
                                                     std::size_t cap = kDefaultIntervalCap) {
  std::vector<Rational> out;
  Rational r = 1;
  for (unsigned j = 1; j <= n; ++j) {
    out.push_back(r);
    auto leaves = exact_tree_leaves(pv, r, cap);
    r = *std::max_element(leaves.probs.begin(), leaves.probs.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spectral constants of the rational case.

struct SpectralData {
  double lambda = 0.0;
  std::vector<unsigned> nj;
  double entropy = 0.0;
  double c_prime = 0.0;
  double eta = 0.0;   // +inf when f has no roots besides e^{-lambda}
  int d = 0;
  std::vector<std::complex<double>> roots;  // distinct roots of f
  std::vector<int> multiplicities;
};

namespace detail {

/// Roots of P(z) = c_K z^K + ... + c_1 z - 1 by companion eigenvalues with a
/// Newton polish; clusters within 1e-6 are treated as one multiple root and
/// polished on the matching derivative.
inline void polynomial_roots(const std::vector<double>& coeff_1_to_K,
                             std::vector<std::complex<double>>& roots,
                             std::vector<int>& mults) {
  const std::size_t K = coeff_1_to_K.size();
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(K, K);
  // monic form z^K + (c_{K-1}/c_K) z^{K-1} + ... + (c_1/c_K) z - 1/c_K
  double lead = coeff_1_to_K[K - 1];
  for (std::size_t i = 1; i < K; ++i) comp(i, i - 1) = 1.0;
  comp(0, K - 1) = 1.0 / lead;  // -(-1/c_K)
  for (std::size_t i = 1; i < K; ++i) comp(i, K - 1) = -coeff_1_to_K[i - 1] / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
  std::vector<std::complex<double>> raw(K);
  for (std::size_t i = 0; i < K; ++i) raw[i] = es.eigenvalues()[static_cast<Eigen::Index>(i)];

  // group into clusters
  std::vector<char> used(K, 0);
  auto eval_poly = [&](std::complex<double> z, unsigned deriv) {
    // value of P^{(deriv)} at z; P = sum_k c_k z^k - 1
    std::complex<double> acc = (deriv == 0) ? std::complex<double>(-1.0) : 0.0;
    for (std::size_t k = 1; k <= K; ++k) {
      if (k < deriv) continue;
      double fac = 1.0;
      for (unsigned t = 0; t < deriv; ++t) fac *= static_cast<double>(k - t);
      acc += coeff_1_to_K[k - 1] * fac * std::pow(z, static_cast<double>(k - deriv));
    }
    return acc;
  };
  for (std::size_t i = 0; i < K; ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> cluster{i};
    for (std::size_t j = i + 1; j < K; ++j)
      if (!used[j] && std::abs(raw[j] - raw[i]) < 1e-6) cluster.push_back(j);
    for (std::size_t j : cluster) used[j] = 1;
    std::complex<double> z = 0;
    for (std::size_t j : cluster) z += raw[j];
    z /= static_cast<double>(cluster.size());
    const unsigned mult = static_cast<unsigned>(cluster.size());
    // Newton on P^{(mult-1)}, where the multiple root is simple
    for (int it = 0; it < 64; ++it) {
      std::complex<double> f = eval_poly(z, mult - 1);
      std::complex<double> fp = eval_poly(z, mult);
      if (std::abs(fp) == 0.0) break;
      std::complex<double> step = f / fp;
      z -= step;
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    roots.push_back(z);
    mults.push_back(static_cast<int>(mult));
  }
}

}  // namespace detail

/// Full spectral data of a rationally related vector: Lambda, n_j, H, c',
/// eta, d, and the roots of f(z) = 1 - sum_j z^{n_j}.
inline SpectralData spectral_analysis(const ProbabilityVector& pv) {
  auto rel = detect_rational_relation(pv);
  if (!rel) throw IrrationallyRelated();
  SpectralData sd;
  sd.lambda = rel->lambda;
  sd.nj = rel->nj;
  sd.entropy = entropy(pv);

  unsigned K = *std::max_element(sd.nj.begin(), sd.nj.end());
  if (K > 64) throw OutOfRange("spectral polynomial degree exceeds 64");
  std::vector<double> coeff(K, 0.0);  // coeff[k-1] multiplies z^k in f = 1 - sum c_k z^k
  for (unsigned d : sd.nj) coeff[d - 1] += 1.0;

  detail::polynomial_roots(coeff, sd.roots, sd.multiplicities);

  const double dom = std::exp(-sd.lambda);
  // locate the dominant root e^{-Lambda}
  std::size_t dom_idx = 0;
  double best = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < sd.roots.size(); ++i) {
    double dist = std::abs(sd.roots[i] - std::complex<double>(dom));
    if (dist < best) {
      best = dist;
      dom_idx = i;
    }
  }
  double omega_min = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < sd.roots.size(); ++i) {
    if (i == dom_idx) continue;
    omega_min = std::min(omega_min, std::abs(sd.roots[i]));
  }
  if (omega_min == std::numeric_limits<double>::max()) {
    sd.eta = std::numeric_limits<double>::infinity();
    sd.d = 0;
  } else {
    sd.eta = 1.0 + std::log(omega_min) / sd.lambda;
    int dmax = 1;
    for (std::size_t i = 0; i < sd.roots.size(); ++i) {
      if (i == dom_idx) continue;
      if (std::abs(sd.roots[i]) <= omega_min * (1.0 + 1e-8))
        dmax = std::max(dmax, sd.multiplicities[i]);
    }
    sd.d = dmax - 1;
  }
  sd.c_prime = (static_cast<double>(pv.m()) - 1.0) * sd.lambda /
               (sd.entropy * (1.0 - std::exp(-sd.lambda)));
  return sd;
}

/// Q_1(x) = (Lambda/(1-e^{-Lambda})) e^{-Lambda {x/Lambda}}. The fractional
/// part is snapped to 0 within 1e-9 of an integer: x is usually log(1/r) with
/// r a float of an exact lattice point, and falling on the wrong side of the
/// boundary would change the value by a factor e^{Lambda}.
inline double q1(double lambda, double x) {
  if (!(lambda > 0)) throw OutOfRange("lambda must be positive");
  double y = x / lambda;
  double fr = y - std::floor(y);
  if (fr > 1.0 - 1e-9) fr = 0.0;
  if (fr < 1e-9) fr = 0.0;
  return lambda / (1.0 - std::exp(-lambda)) * std::exp(-lambda * fr);
}

/// Leading term of Theorem-style M_r asymptotics: ((m-1)/(rH)) Q_1(log(1/r)).
inline double predicted_mr_rational(const SpectralData& sd, unsigned m, double r) {
  if (!(r > 0 && r <= 1)) throw OutOfRange("r must lie in (0,1]");
  return (static_cast<double>(m) - 1.0) / (r * sd.entropy) * q1(sd.lambda, std::log(1.0 / r));
}

struct IrrationalPrediction {
  double value = 0.0;
  bool applicable = true;  // false when log p / log q is rationally related
};

/// k(n) ~ ((m-1)/H) exp(sqrt(2 n log(1/p) log(1/q))) for the two-letter
/// irrationally related case. Rational inputs still evaluate but are flagged.
inline IrrationalPrediction predicted_kn_irrational(double p, unsigned n) {
  if (!(p > 0 && p < 1)) throw OutOfRange("p must lie in (0,1)");
  const double q = 1.0 - p;
  const double lp = std::log(1.0 / p), lq = std::log(1.0 / q);
  const double H = p * lp + q * lq;
  IrrationalPrediction out;
  out.value = std::exp(std::sqrt(2.0 * static_cast<double>(n) * lp * lq)) / H;
  auto rel = detect_rational_relation(probvec({p, q}));
  out.applicable = !rel.has_value();
  return out;
}

// ---------------------------------------------------------------------------
// Zeros of 1 - p^{-s} - q^{-s}.

struct DirichletZero {
  long k = 0;
  std::complex<double> s;
};

/// One zero per box B_k, 1 <= |k| <= K, boxes of height 2 tau = 2 pi / log(1/p_min)
/// centered at Im = 2 k tau. Newton from several starts; each accepted zero has
/// residual below 1e-10 and Re >= -1 - 1e-9. Failed boxes raise NoConvergence.
inline std::vector<DirichletZero> dirichlet_zeros(double p, unsigned K) {
  if (!(p > 0 && p < 1)) throw OutOfRange("p must lie in (0,1)");
  if (K < 1 || K > 200) throw OutOfRange("box count must lie in [1,200]");
  const double q = 1.0 - p;
  const double lp = std::log(1.0 / p), lq = std::log(1.0 / q);
  const double tau = 3.14159265358979323846 / std::max(lp, lq);

  auto f = [&](std::complex<double> s) {
    return 1.0 - std::exp(s * lp) - std::exp(s * lq);
  };
  auto fp = [&](std::complex<double> s) {
    return -lp * std::exp(s * lp) - lq * std::exp(s * lq);
  };

  std::vector<DirichletZero> out;
  std::vector<long> failed;
  for (unsigned k = 1; k <= K; ++k) {
    const double lo = (2.0 * k - 1.0) * tau, hi = (2.0 * k + 1.0) * tau;
    const double center = 2.0 * k * tau;
    bool found = false;
    std::complex<double> zero;
    const double res[] = {-0.9, -0.5, -0.1, -0.99, 0.02};
    const double ims[] = {center, center - 0.5 * tau, center + 0.5 * tau,
                          center - 0.9 * tau, center + 0.9 * tau};
    for (double r0 : res) {
      for (double i0 : ims) {
        std::complex<double> s(r0, i0);
        bool conv = false;
        for (int it = 0; it < 200; ++it) {
          std::complex<double> fv = f(s);
          if (std::abs(fv) < 1e-12) {
            conv = true;
            break;
          }
          std::complex<double> step = fv / fp(s);
          if (std::abs(step) > tau) step *= tau / std::abs(step);
          std::complex<double> s2 = s - step;
          int halvings = 0;
          while (std::abs(f(s2)) > std::abs(fv) && halvings < 30) {
            step *= 0.5;
            s2 = s - step;
            ++halvings;
          }
          s = s2;
          if (std::abs(step) < 1e-14) {
            conv = std::abs(f(s)) < 1e-10;
            break;
          }
        }
        if (conv && std::abs(f(s)) < 1e-10 && s.imag() >= lo && s.imag() < hi &&
            s.real() >= -1.0 - 1e-9) {
          zero = s;
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (found)
      out.push_back({static_cast<long>(k), zero});
    else
      failed.push_back(static_cast<long>(k));
  }
  if (!failed.empty()) throw NoConvergence(std::move(failed));
  // conjugate boxes: real coefficients pair each zero with its mirror
  std::vector<DirichletZero> full;
  for (auto it = out.rbegin(); it != out.rend(); ++it)
    full.push_back({-it->k, std::conj(it->s)});
  for (const auto& z : out) full.push_back(z);
  return full;
}

/// Empirical min of (Re(s)+1) Im(s)^2 over computed zeros; reported instead of
/// asserting any non-constructive zero-free-region constant.
inline double min_re_im2(const std::vector<DirichletZero>& zeros) {
  double best = std::numeric_limits<double>::max();
  for (const auto& z : zeros)
    best = std::min(best, (z.s.real() + 1.0) * z.s.imag() * z.s.imag());
  return best;
}

}  // namespace udk
