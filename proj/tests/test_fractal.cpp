#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "oracles.hpp"
#include "udk/fractal.hpp"

using udk::Rational;

TEST_CASE("preset systems have the advertised shape") {
  auto cantor = udk::ifs_cantor();
  CHECK(cantor.dim == 1);
  CHECK(cantor.m() == 2);
  CHECK(cantor.exact);
  CHECK(cantor.equal_ratios());
  for (const auto& s : cantor.maps) CHECK(s.ratio == Catch::Approx(1.0 / 3).epsilon(1e-15));

  auto sr = udk::ifs_sierpinski_right();
  CHECK(sr.dim == 2);
  CHECK(sr.m() == 3);
  CHECK(sr.exact);
  for (const auto& s : sr.maps) CHECK(s.ratio == 0.5);

  auto se = udk::ifs_sierpinski_equilateral();
  CHECK(se.dim == 2);
  CHECK(se.m() == 3);
  for (const auto& s : se.maps) CHECK(s.ratio == Catch::Approx(0.5).epsilon(1e-15));

  auto koch = udk::ifs_koch();
  CHECK(koch.dim == 2);
  CHECK(koch.m() == 4);
  for (const auto& s : koch.maps) CHECK(s.ratio == Catch::Approx(1.0 / 3).epsilon(1e-14));
  // the third map is a reflection: negative determinant
  const auto& A = koch.maps[2].A;
  CHECK(A[0] * A[3] - A[1] * A[2] < 0);
}

TEST_CASE("preset lookup by name") {
  CHECK(udk::ifs_preset("cantor").m() == 2);
  CHECK(udk::ifs_preset("sierpinski-right").m() == 3);
  CHECK(udk::ifs_preset("sierpinski-equilateral").m() == 3);
  CHECK(udk::ifs_preset("koch").m() == 4);
  CHECK(udk::ifs_preset("unit-interval-4").m() == 4);
  CHECK(udk::ifs_preset("unit-interval-2").dim == 1);
  CHECK_THROWS_AS(udk::ifs_preset("unknown"), udk::ParseError);
  CHECK_THROWS_AS(udk::ifs_unit_interval(1), udk::OutOfRange);
  CHECK_THROWS_AS(udk::ifs_unit_interval(100), udk::OutOfRange);
}

TEST_CASE("unit interval system reproduces the radical inverse sequence") {
  for (unsigned m : {2u, 3u, 5u}) {
    auto sys = udk::ifs_unit_interval(m);
    auto fr = udk::vdc_fractal_points(sys, 60);
    auto vdc = udk::van_der_corput(60, m);
    for (std::size_t i = 0; i < 60; ++i)
      CHECK(fr.points.at(i) == Catch::Approx(vdc.at(i)).margin(1e-15));
  }
}

TEST_CASE("right-triangle generator points") {
  auto out = udk::vdc_fractal_points(udk::ifs_sierpinski_right(), 9);
  const double want[9][2] = {{0, 0},          {0, 0.5},  {0.5, 0.5},
                             {0, 0.25},       {0, 0.75}, {0.5, 0.75},
                             {0.25, 0.25},    {0.25, 0.75}, {0.75, 0.75}};
  for (int i = 0; i < 9; ++i) {
    CHECK(out.points.at(i, 0) == want[i][0]);
    CHECK(out.points.at(i, 1) == want[i][1]);
  }
}

TEST_CASE("cantor generator points") {
  auto out = udk::vdc_fractal_points(udk::ifs_cantor(), 8);
  // x1 = 0 (fixed point of the left map), then psi_i(x_j) by digit recursion
  const double want[8] = {0,        2.0 / 3,  2.0 / 9,  8.0 / 9,
                          2.0 / 27, 20.0 / 27, 8.0 / 27, 26.0 / 27};
  for (int i = 0; i < 8; ++i) CHECK(out.points.at(i) == Catch::Approx(want[i]).margin(1e-15));
}

TEST_CASE("stored words are the scaled digit expansions") {
  auto out = udk::vdc_fractal_points(udk::ifs_sierpinski_right(), 9);
  CHECK(out.words[0].empty());                                   // x1
  CHECK(out.words[3] == udk::AddressWord{2, 1});                 // x4 = psi1(psi2(x1))
  CHECK(out.words[8] == udk::AddressWord{3, 3});                 // x9
  // applying the word to the base point reproduces the point
  auto sys = udk::ifs_sierpinski_right();
  auto big = udk::vdc_fractal_points(sys, 200);
  for (std::size_t n = 0; n < 200; ++n) {
    auto p = udk::apply_address(sys, big.words[n], sys.x0);
    CHECK(p[0] == Catch::Approx(big.points.at(n, 0)).margin(1e-14));
    CHECK(p[1] == Catch::Approx(big.points.at(n, 1)).margin(1e-14));
  }
}

TEST_CASE("word application order puts the first letter innermost") {
  auto sys = udk::ifs_sierpinski_right();
  // word {2,1}: psi_2 first, then psi_1 outermost
  auto p = udk::apply_address(sys, {2, 1}, sys.x0);
  CHECK(p[0] == 0.0);
  CHECK(p[1] == 0.25);
  auto q = udk::apply_address_exact(sys, {2, 1}, sys.x0_exact);
  CHECK(q[0] == Rational(0));
  CHECK(q[1] == Rational(1, 4));
  CHECK_THROWS_AS(udk::apply_address(sys, {4}, sys.x0), udk::OutOfRange);
}

TEST_CASE("level classes cycle through residues of the point index") {
  for (auto sys : {udk::ifs_cantor(), udk::ifs_sierpinski_right()}) {
    const unsigned m = static_cast<unsigned>(sys.m());
    auto out = udk::vdc_fractal_points(sys, 200);
    for (unsigned level = 1; level <= 4; ++level) {
      std::size_t cells = 1;
      for (unsigned l = 0; l < level; ++l) cells *= m;
      for (std::size_t n = 0; n < 200; ++n)
        CHECK(udk::detail::level_class(out.words[n], level, m) == n % cells);
    }
  }
}

TEST_CASE("level classes agree with interval membership on the unit interval") {
  // the class index reads the word outermost-first into its lowest digit, so
  // the geometric cell starts at the digit-reversed expansion of the index
  const unsigned m = 3;
  auto sys = udk::ifs_unit_interval(m);
  auto out = udk::vdc_fractal_points(sys, 243);
  for (unsigned level = 1; level <= 3; ++level) {
    double width = std::pow(1.0 / m, level);
    for (std::size_t n = 0; n < 243; ++n) {
      auto cls = udk::detail::level_class(out.words[n], level, m);
      double left = 0, w = 1.0;
      for (unsigned l = 0; l < level; ++l) {
        w /= m;
        left += static_cast<double>(cls % m) * w;
        cls /= m;
      }
      double x = out.points.at(n);
      CHECK(x >= left - 1e-12);
      CHECK(x < left + width + 1e-12);
    }
  }
}

TEST_CASE("generator requires equal contraction ratios") {
  auto sys = udk::ifs_from_ratios({Rational(1, 2), Rational(1, 4)});
  CHECK_FALSE(sys.equal_ratios());
  CHECK_THROWS_AS(udk::vdc_fractal_points(sys, 10), udk::UnequalRatios);
}

TEST_CASE("moran dimension solves the similarity equation") {
  CHECK(udk::moran_dimension({1.0 / 3, 1.0 / 3}) ==
        Catch::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-12));
  CHECK(udk::moran_dimension({0.5, 0.5, 0.5}) ==
        Catch::Approx(std::log(3.0) / std::log(2.0)).epsilon(1e-12));
  CHECK(udk::moran_dimension({1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3}) ==
        Catch::Approx(std::log(4.0) / std::log(3.0)).epsilon(1e-12));
  // generic ratios: residual check sum c^s = 1
  std::vector<double> c{0.5, 0.25, 0.3};
  double s = udk::moran_dimension(c);
  double sum = 0;
  for (double v : c) sum += std::pow(v, s);
  CHECK(sum == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("elementary discrepancy of radix sequences follows the remainder formula") {
  // level-l deviation of the first N points is max(1 - R/m^l, R/m^l)/N for
  // R = N mod m^l >= 1, and 0 when R = 0
  for (unsigned m : {2u, 3u}) {
    auto out = udk::vdc_fractal_points(udk::ifs_unit_interval(m), 500);
    auto sweep = udk::elementary_discrepancy_sweep(out.words, 500, m);
    for (std::size_t N = 1; N <= 500; ++N) {
      unsigned depth = udk::detail::default_depth(N, m);
      double want = 0;
      std::size_t cells = 1;
      for (unsigned l = 1; l <= depth; ++l) {
        cells *= m;
        std::size_t R = N % cells;
        if (R >= 1) {
          double a = 1.0 - static_cast<double>(R) / static_cast<double>(cells);
          double b = static_cast<double>(R) / static_cast<double>(cells);
          want = std::max(want, std::max(a, b) / static_cast<double>(N));
        }
      }
      CHECK(sweep[N - 1] == Catch::Approx(want).margin(1e-12));
    }
  }
}

TEST_CASE("sweep agrees with the one-shot evaluation") {
  auto out = udk::vdc_fractal_points(udk::ifs_sierpinski_right(), 300);
  auto sweep = udk::elementary_discrepancy_sweep(out.words, 300, 3);
  for (std::size_t N : {1u, 2u, 5u, 27u, 100u, 243u, 300u}) {
    double one = udk::elementary_discrepancy_points(out.words, N, 3);
    CHECK(sweep[N - 1] == Catch::Approx(one).margin(1e-13));
  }
}

TEST_CASE("elementary discrepancy peaks just after a full level") {
  auto out = udk::vdc_fractal_points(udk::ifs_cantor(), 1100);
  auto sweep = udk::elementary_discrepancy_sweep(out.words, 1100, 2);
  double mx = 0;
  std::size_t arg = 0;
  for (std::size_t N = 1; N <= 1100; ++N) {
    CHECK(static_cast<double>(N) * sweep[N - 1] <= 1.0 + 1e-12);
    if (static_cast<double>(N) * sweep[N - 1] > mx) {
      mx = static_cast<double>(N) * sweep[N - 1];
      arg = N;
    }
  }
  // level 10 is one point short of complete at N = 2^10 - 1
  CHECK(arg == 1023);
  CHECK(mx == Catch::Approx(1.0 - 1.0 / 1024).epsilon(1e-12));
}

TEST_CASE("point discrepancy depth control") {
  auto out = udk::vdc_fractal_points(udk::ifs_cantor(), 64);
  CHECK_THROWS_AS(udk::elementary_discrepancy_points(out.words, 64, 2, 3),
                  udk::DepthTooShallow);
  CHECK_NOTHROW(udk::elementary_discrepancy_points(out.words, 64, 2, 7));
}

TEST_CASE("uniform level partition has vanishing elementary discrepancy") {
  auto fp = udk::vdc_fractal_partition(udk::ifs_sierpinski_right(), 3);
  REQUIRE(fp.words.size() == 27);
  for (double p : fp.probs) CHECK(p == Catch::Approx(1.0 / 27).epsilon(1e-14));
  // every level <= 3 cell holds exactly its share of representatives; level 4
  // shows the residual of representative placement
  double d = udk::elementary_discrepancy_partition(fp);
  CHECK(d == Catch::Approx(1.0 / 27 - 1.0 / 81).epsilon(1e-12));
}

TEST_CASE("khodak partition of an equal-ratio system is the level partition") {
  auto fp = udk::khodak_fractal_partition(udk::ifs_cantor(), 5);
  REQUIRE(fp.single_base);
  REQUIRE(fp.words.size() == 32);
  for (double p : fp.probs) CHECK(p == Catch::Approx(1.0 / 32).epsilon(1e-13));
  for (const auto& w : fp.words) CHECK(w.size() == 5);
  CHECK(fp.map_probs[0] == Catch::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("khodak partition of mixed ratios matches the golden refinement") {
  // ratios (1/2, 1/4) under the Moran measure give letter probabilities
  // alpha, alpha^2 with the golden alpha: same weight multiset as ls_rule(1,1)
  auto sys = udk::ifs_from_ratios({Rational(1, 2), Rational(1, 4)});
  for (unsigned n : {1u, 4u, 8u, 12u}) {
    auto fp = udk::khodak_fractal_partition(sys, n);
    REQUIRE(fp.single_base);
    udk::Refiner ref(udk::ls_rule(1, 1));
    ref.run(n);
    REQUIRE(fp.words.size() == ref.k());
    auto a = fp.weights_int;
    auto b = ref.weights_int();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
    double sum = 0;
    for (double p : fp.probs) sum += p;
    CHECK(sum == Catch::Approx(1.0).margin(1e-11));
  }
}

TEST_CASE("khodak partition words live in the address alphabet") {
  auto sys = udk::ifs_from_ratios({Rational(1, 2), Rational(1, 4)});
  auto fp = udk::khodak_fractal_partition(sys, 6);
  for (std::size_t i = 0; i < fp.words.size(); ++i) {
    std::uint32_t w = 0;
    for (auto c : fp.words[i]) {
      REQUIRE(c >= 1);
      REQUIRE(c <= 2);
      w += (c == 1) ? 1 : 2;
    }
    CHECK(w == fp.weights_int[i]);
  }
}

TEST_CASE("trivial khodak partition measures the first-map deficit") {
  auto sys = udk::ifs_from_ratios({Rational(1, 2), Rational(1, 4)});
  auto fp = udk::khodak_fractal_partition(sys, 0);
  REQUIRE(fp.words.size() == 1);
  double a = fp.map_probs[0];
  CHECK(udk::elementary_discrepancy_partition(fp) ==
        Catch::Approx(std::max(1.0 - a, fp.map_probs[1])).epsilon(1e-12));
}

TEST_CASE("khodak partition discrepancy decays with refinement") {
  auto sys = udk::ifs_from_ratios({Rational(1, 2), Rational(1, 4)});
  double d4 = udk::elementary_discrepancy_partition(udk::khodak_fractal_partition(sys, 4));
  double d12 = udk::elementary_discrepancy_partition(udk::khodak_fractal_partition(sys, 12));
  double d20 = udk::elementary_discrepancy_partition(udk::khodak_fractal_partition(sys, 20));
  CHECK(d12 < d4);
  CHECK(d20 < d12);
  CHECK(d20 < 0.02);
}

TEST_CASE("float-route khodak partition for irrational dimension ratios") {
  // ratios (1/2, 1/3) admit no common rational power, so the float route runs
  auto sys = udk::ifs_from_ratios({Rational(1, 2), Rational(1, 3)});
  auto fp = udk::khodak_fractal_partition(sys, 10);
  CHECK_FALSE(fp.single_base);
  double s = udk::moran_dimension({0.5, 1.0 / 3});
  CHECK(fp.map_probs[0] == Catch::Approx(std::pow(0.5, s)).epsilon(1e-12));
  CHECK(fp.map_probs[1] == Catch::Approx(std::pow(1.0 / 3, s)).epsilon(1e-12));
  double sum = 0;
  for (double p : fp.probs) sum += p;
  CHECK(sum == Catch::Approx(1.0).margin(1e-10));
  CHECK(udk::elementary_discrepancy_partition(fp) < 0.05);
}

TEST_CASE("partition depth guard") {
  auto fp = udk::vdc_fractal_partition(udk::ifs_cantor(), 6);
  CHECK_THROWS_AS(udk::elementary_discrepancy_partition(fp, 4), udk::DepthTooShallow);
}
