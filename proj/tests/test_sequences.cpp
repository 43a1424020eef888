#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "udk/rng.hpp"
#include "udk/sequences.hpp"

using udk::Rational;

TEST_CASE("radical inverse of small indices in base 2") {
  // gamma_2: 0 -> 0, 1 -> 1/2, 2 -> 1/4, 3 -> 3/4, 4 -> 1/8, 5 -> 5/8
  CHECK(udk::radical_inverse(0, 2) == Rational(0));
  CHECK(udk::radical_inverse(1, 2) == Rational(1, 2));
  CHECK(udk::radical_inverse(2, 2) == Rational(1, 4));
  CHECK(udk::radical_inverse(3, 2) == Rational(3, 4));
  CHECK(udk::radical_inverse(4, 2) == Rational(1, 8));
  CHECK(udk::radical_inverse(5, 2) == Rational(5, 8));
}

TEST_CASE("radical inverse in base 3") {
  CHECK(udk::radical_inverse(1, 3) == Rational(1, 3));
  CHECK(udk::radical_inverse(2, 3) == Rational(2, 3));
  CHECK(udk::radical_inverse(3, 3) == Rational(1, 9));
  CHECK(udk::radical_inverse(4, 3) == Rational(4, 9));  // digits 11 -> 1/3 + 1/9
}

TEST_CASE("radical inverse matches digit-peeling oracle") {
  udk::SplitMix64 rng(42);
  for (unsigned base : {2u, 3u, 5u, 7u, 10u}) {
    for (int t = 0; t < 200; ++t) {
      std::uint64_t n = rng.below(1u << 20);
      double got = udk::to_double(udk::radical_inverse(n, base));
      double want = oracle::radical_inverse_digits(n, base);
      CHECK(got == Catch::Approx(want).epsilon(1e-15));
    }
  }
}

TEST_CASE("van der Corput base 2 starts at zero and fills dyadically") {
  auto ps = udk::van_der_corput(8, 2);
  REQUIRE(ps.size() == 8);
  REQUIRE(ps.dim == 1);
  REQUIRE(ps.exact);
  const Rational want[] = {Rational(0),    Rational(1, 2), Rational(1, 4), Rational(3, 4),
                           Rational(1, 8), Rational(5, 8), Rational(3, 8), Rational(7, 8)};
  for (int i = 0; i < 8; ++i) {
    CHECK(ps.rat_at(i) == want[i]);
    CHECK(ps.at(i) == udk::to_double(want[i]));
  }
}

TEST_CASE("van der Corput prefix of length 2^k is the full dyadic grid") {
  auto ps = udk::van_der_corput(16, 2);
  std::vector<Rational> xs(ps.rat.begin(), ps.rat.end());
  std::sort(xs.begin(), xs.end());
  for (int i = 0; i < 16; ++i) CHECK(xs[i] == Rational(i, 16));
}

TEST_CASE("halton starts at index 1 and keeps coordinates coprime") {
  auto ps = udk::halton(4, {2, 3});
  REQUIRE(ps.dim == 2);
  CHECK(ps.rat_at(0, 0) == Rational(1, 2));
  CHECK(ps.rat_at(0, 1) == Rational(1, 3));
  CHECK(ps.rat_at(1, 0) == Rational(1, 4));
  CHECK(ps.rat_at(1, 1) == Rational(2, 3));
  CHECK(ps.rat_at(3, 0) == Rational(1, 8));
  CHECK(ps.rat_at(3, 1) == Rational(4, 9));
  CHECK_THROWS_AS(udk::halton(4, {2, 4}), udk::NonCoprimeBases);
  CHECK_THROWS_AS(udk::halton(4, {3, 6}), udk::NonCoprimeBases);
  CHECK_NOTHROW(udk::halton(4, {2, 3, 5}));
}

TEST_CASE("hammersley prepends the n/N coordinate") {
  auto ps = udk::hammersley(4, {2});
  REQUIRE(ps.dim == 2);
  for (int i = 0; i < 4; ++i) CHECK(ps.rat_at(i, 0) == Rational(i + 1, 4));
  CHECK(ps.rat_at(0, 1) == Rational(1, 2));
  CHECK(ps.rat_at(2, 1) == Rational(3, 4));
}

TEST_CASE("kronecker wraps n*theta into the unit interval") {
  auto ps = udk::kronecker(5, {0.5});
  CHECK(ps.at(0) == 0.5);
  CHECK(ps.at(1) == 0.0);
  CHECK(ps.at(2) == 0.5);
  const double theta = 0.61803398874989485;
  auto golden = udk::kronecker(100, {theta});
  for (int n = 1; n <= 100; ++n) {
    double v = n * theta;
    CHECK(golden.at(n - 1) == v - std::floor(v));
  }
}

TEST_CASE("weyl sum vanishes on a full grid and is 1 on a singleton") {
  udk::PointSet grid;
  grid.dim = 1;
  for (int i = 0; i < 64; ++i) grid.xs.push_back(i / 64.0);
  CHECK(udk::weyl_sum(grid, {1}) == Catch::Approx(0.0).margin(1e-12));
  CHECK(udk::weyl_sum(grid, {63}) == Catch::Approx(0.0).margin(1e-9));
  CHECK(udk::weyl_sum(grid, {64}) == Catch::Approx(1.0).epsilon(1e-12));

  udk::PointSet one;
  one.dim = 1;
  one.xs = {0.37};
  CHECK(udk::weyl_sum(one, {5}) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("weyl sum decays along the van der Corput sequence") {
  auto ps = udk::van_der_corput(4096, 2);
  CHECK(udk::weyl_sum(ps, {1}) < 0.01);
}

TEST_CASE("weyl sum input validation") {
  udk::PointSet empty;
  empty.dim = 1;
  CHECK_THROWS_AS(udk::weyl_sum(empty, {1}), udk::EmptyPointSet);
  auto ps = udk::van_der_corput(4, 2);
  CHECK_THROWS_AS(udk::weyl_sum(ps, {1, 2}), udk::DimMismatch);
  CHECK_THROWS_AS(udk::weyl_sum(ps, {0}), udk::ZeroFrequency);
}

TEST_CASE("splitmix64 reference stream") {
  // first outputs for seed 0, fixed by the finalizer constants
  udk::SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFull);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ull);
  CHECK(rng.next() == 0x06C45D188009454Full);
}

TEST_CASE("splitmix64 uniform lies in [0,1) and below() is unbiased-capable") {
  udk::SplitMix64 rng(123);
  for (int i = 0; i < 10000; ++i) {
    double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  udk::SplitMix64 rng2(7);
  std::vector<int> hits(10, 0);
  for (int i = 0; i < 10000; ++i) ++hits[rng2.below(10)];
  for (int h : hits) CHECK(h > 800);
}
