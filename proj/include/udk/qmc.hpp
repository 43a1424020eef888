#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "udk/discrepancy.hpp"
#include "udk/errors.hpp"
#include "udk/rng.hpp"
#include "udk/sequences.hpp"

namespace udk {

/// Integrand with documented exact integral and Hardy-Krause variation; the
/// certificate tests need both known in closed form.
struct TestIntegrand {
  std::string name;
  unsigned dim = 1;
  std::function<double(const double*)> f;
  double exact_integral = 0.0;
  double hk_variation = 0.0;
};

/// id: f(x)=x, V=1. sq: f(x)=x^2, V=1. ramp: 0 below 1/4, linear to 1 at
/// 3/4, constant after; monotone, so V=1, and I=1/2 by symmetry.
/// prod2: f(x,y)=xy with V = 1 (x-edge) + 1 (y-edge) + 1 (mixed) = 3.
inline const std::vector<TestIntegrand>& shipped_integrands() {
  static const std::vector<TestIntegrand> all = {
      {"id", 1, [](const double* x) { return x[0]; }, 0.5, 1.0},
      {"sq", 1, [](const double* x) { return x[0] * x[0]; }, 1.0 / 3.0, 1.0},
      {"ramp", 1,
       [](const double* x) {
         if (x[0] <= 0.25) return 0.0;
         if (x[0] >= 0.75) return 1.0;
         return 2.0 * (x[0] - 0.25);
       },
       0.5, 1.0},
      {"prod2", 2, [](const double* x) { return x[0] * x[1]; }, 0.25, 3.0},
  };
  return all;
}

inline const TestIntegrand& integrand_by_name(const std::string& name) {
  for (const auto& g : shipped_integrands())
    if (g.name == name) return g;
  throw OutOfRange("unknown integrand: " + name);
}

/// Sample mean (1/N) sum f(x_i).
inline double qmc_integrate(const PointSet& ps, const TestIntegrand& f) {
  if (ps.dim != f.dim) throw DimMismatch(ps.dim, f.dim);
  if (ps.size() == 0) throw EmptyPointSet();
  double acc = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) acc += f.f(&ps.xs[i * ps.dim]);
  return acc / static_cast<double>(ps.size());
}

struct KHReport {
  double estimate = 0.0;
  double exact = 0.0;
  double error = 0.0;
  double dstar = 0.0;
  double bound = 0.0;
  bool satisfied = false;
};

/// |I_N(f) - I(f)| <= V(f) D*_N, checked with the exact star discrepancy.
inline KHReport koksma_hlawka_check(const PointSet& ps, const TestIntegrand& f) {
  KHReport rep;
  rep.estimate = qmc_integrate(ps, f);
  rep.exact = f.exact_integral;
  rep.error = std::abs(rep.estimate - rep.exact);
  rep.dstar = (ps.dim == 1) ? star_discrepancy_1d(ps) : star_discrepancy_dd(ps);
  rep.bound = f.hk_variation * rep.dstar;
  rep.satisfied = rep.error <= rep.bound + 1e-12;
  return rep;
}

/// Block-wise shuffle of a partition sequence: block n emits a uniform random
/// permutation of that partition's points. One generator drives all blocks in
/// order, so the stream is a pure function of (blocks, seed).
class ReorderingStream {
 public:
  ReorderingStream(std::vector<std::vector<double>> blocks, std::uint64_t seed)
      : blocks_(std::move(blocks)), rng_(seed) {
    if (blocks_.empty()) throw EmptyPartition();
    for (const auto& b : blocks_)
      if (b.empty()) throw EmptyPartition();
  }

  bool done() const { return next_ == blocks_.size(); }
  std::size_t emitted() const { return emitted_; }

  /// Shuffled copy of the next block.
  std::vector<double> next_block() {
    if (done()) throw OutOfRange("reordering stream exhausted");
    std::vector<double> b = blocks_[next_++];
    fisher_yates(b, rng_);
    emitted_ += b.size();
    return b;
  }

 private:
  std::vector<std::vector<double>> blocks_;
  SplitMix64 rng_;
  std::size_t next_ = 0;
  std::size_t emitted_ = 0;
};

inline PointSet sequential_random_reordering(std::vector<std::vector<double>> blocks,
                                             std::uint64_t seed) {
  ReorderingStream st(std::move(blocks), seed);
  PointSet ps;
  ps.dim = 1;
  while (!st.done()) {
    auto b = st.next_block();
    ps.xs.insert(ps.xs.end(), b.begin(), b.end());
  }
  return ps;
}

/// Seeded pseudorandom sample mean over [0,1]^dim.
inline double mc_baseline(std::size_t N, std::uint64_t seed, const TestIntegrand& f) {
  if (N < 1) throw OutOfRange("N must be at least 1");
  SplitMix64 rng(seed);
  double acc = 0;
  double x[2];
  for (std::size_t i = 0; i < N; ++i) {
    for (unsigned k = 0; k < f.dim; ++k) x[k] = rng.uniform();
    acc += f.f(x);
  }
  return acc / static_cast<double>(N);
}

}  // namespace udk
