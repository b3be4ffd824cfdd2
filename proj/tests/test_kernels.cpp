#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pabeam/kernels.hpp"

using namespace pabeam;
using cplx = std::complex<double>;

namespace {
std::span<const double> cspan(const std::vector<double>& v) { return {v}; }
}  // namespace

TEST_CASE("signed_sqrt basics") {
  CHECK(signed_sqrt(4.0) == 2.0);
  CHECK(signed_sqrt(-9.0) == -3.0);
  CHECK(signed_sqrt(0.0) == 0.0);
}

TEST_CASE("signed_sqrt is odd and monotone") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double prev_x = -1e9, prev_y = -1e9;
  for (int i = 0; i < 200; ++i) {
    double x = u(rng);
    CHECK(signed_sqrt(-x) == -signed_sqrt(x));
    (void)prev_x;
    (void)prev_y;
  }
  for (double x = -5.0; x < 5.0; x += 0.25)
    CHECK(signed_sqrt(x) < signed_sqrt(x + 0.25));
}

TEST_CASE("complex signed_sqrt agrees with the real form on the real axis") {
  for (double v : {4.0, -9.0, 0.0, 0.3, -0.7, 123.456}) {
    cplx r = signed_sqrt(cplx(v, 0.0));
    CHECK(r.real() == doctest::Approx(signed_sqrt(v)).epsilon(1e-15));
    CHECK(r.imag() == 0.0);
  }
}

TEST_CASE("das_pixel") {
  std::vector<double> z(5, 0.0);
  CHECK(das_pixel(cspan(z)) == 0.0);
  std::vector<double> one = {3.25};
  CHECK(das_pixel(cspan(one)) == 3.25);
  std::vector<double> eq(7, 2.5);
  CHECK(das_pixel(cspan(eq)) == doctest::Approx(7 * 2.5));
}

TEST_CASE("dmas_pixel: M=2 single pair") {
  for (auto [a, b] : {std::pair{0.5, 0.8}, {-0.5, 0.8}, {-2.0, -3.0}}) {
    std::vector<double> v = {a, b};
    double want = (a * b < 0 ? -1.0 : 1.0) * std::sqrt(std::abs(a * b));
    CHECK(dmas_pixel_naive(cspan(v)) == doctest::Approx(want).epsilon(1e-12));
    CHECK(dmas_pixel_fast(cspan(v)) == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("dmas_pixel: hand expansion (1,4,9) -> 11") {
  std::vector<double> v = {1.0, 4.0, 9.0};
  CHECK(dmas_pixel_naive(cspan(v)) == doctest::Approx(11.0).epsilon(1e-12));
  CHECK(dmas_pixel_fast(cspan(v)) == doctest::Approx(11.0).epsilon(1e-12));
}

TEST_CASE("dmas_pixel: equal positive channels") {
  const int m = 9;
  const double v = 0.37;
  std::vector<double> x(m, v);
  CHECK(dmas_pixel_fast(cspan(x)) ==
        doctest::Approx(m * (m - 1) / 2 * v).epsilon(1e-12));
}

TEST_CASE("dmas_pixel rejects M < 2") {
  std::vector<double> v = {1.0};
  CHECK_THROWS_AS(dmas_pixel_naive(cspan(v)), Error);
  CHECK_THROWS_AS(dmas_pixel_fast(cspan(v)), Error);
}

TEST_CASE("dsdmas_terms: M=2 degenerate and (1,4,9) expansion") {
  std::vector<double> two = {0.9, -0.4};
  auto t2 = dsdmas_terms(cspan(two));
  REQUIRE(t2.size() == 1);
  CHECK(t2[0] == doctest::Approx(-std::sqrt(0.36)).epsilon(1e-12));

  std::vector<double> v = {1.0, 4.0, 9.0};
  auto t = dsdmas_terms(cspan(v));
  REQUIRE(t.size() == 2);
  CHECK(t[0] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(t[1] == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("dsdmas_terms sum equals dmas_pixel (expansion identity)") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 500; ++trial) {
    int m = 2 + int(rng() % 15);
    auto v = oracle::random_vector(rng, m);
    auto t = dsdmas_terms(cspan(v));
    double sum = 0.0;
    for (double x : t) sum += x;
    double dmas = dmas_pixel_naive(cspan(v));
    CHECK(oracle::close_rel(sum, dmas, 1e-12, 1e-15));
  }
}

TEST_CASE("dsdmas_pixel: zeros and hand expansion (1,4,9) -> sqrt(30)") {
  std::vector<double> z(6, 0.0);
  CHECK(dsdmas_pixel_fast(cspan(z)) == 0.0);
  std::vector<double> v = {1.0, 4.0, 9.0};
  const double want = std::sqrt(30.0);
  CHECK(dsdmas_pixel_naive(cspan(v)) == doctest::Approx(want).epsilon(1e-12));
  CHECK(dsdmas_pixel_fast(cspan(v)) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("dsdmas_pixel rejects M < 3") {
  std::vector<double> v = {1.0, 2.0};
  CHECK_THROWS_AS(dsdmas_pixel_naive(cspan(v)), Error);
  CHECK_THROWS_AS(dsdmas_pixel_fast(cspan(v)), Error);
}

TEST_CASE("naive and fast forms agree on random vectors") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    int m = 2 + int(rng() % 15);
    auto v = oracle::random_vector(rng, m);
    CHECK(oracle::close_rel(dmas_pixel_naive(cspan(v)),
                            dmas_pixel_fast(cspan(v))));
    if (m >= 3)
      CHECK(oracle::close_rel(dsdmas_pixel_naive(cspan(v)),
                              dsdmas_pixel_fast(cspan(v))));
  }
}

TEST_CASE("complex kernels reduce to the real kernels on real vectors") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    int m = 3 + int(rng() % 12);
    auto v = oracle::random_vector(rng, m);
    std::vector<cplx> vc(v.begin(), v.end());
    std::span<const cplx> sc(vc);
    CHECK(oracle::close_rel(dmas_pixel_fast(sc).real(),
                            dmas_pixel_fast(cspan(v)), 1e-12, 1e-15));
    CHECK(std::abs(dmas_pixel_fast(sc).imag()) < 1e-12);
    CHECK(oracle::close_rel(dsdmas_pixel_fast(sc).real(),
                            dsdmas_pixel_fast(cspan(v)), 1e-12, 1e-15));
  }
}

TEST_CASE("positive homogeneity of degree 1") {
  std::mt19937_64 rng(41);
  for (double alpha : {2.0, 0.25, 3.7}) {
    for (int trial = 0; trial < 100; ++trial) {
      int m = 3 + int(rng() % 12);
      auto v = oracle::random_vector(rng, m);
      auto scaled = v;
      for (double& x : scaled) x *= alpha;
      CHECK(oracle::close_rel(das_pixel(cspan(scaled)),
                              alpha * das_pixel(cspan(v))));
      CHECK(oracle::close_rel(dmas_pixel_fast(cspan(scaled)),
                              alpha * dmas_pixel_fast(cspan(v))));
      CHECK(oracle::close_rel(dsdmas_pixel_fast(cspan(scaled)),
                              alpha * dsdmas_pixel_fast(cspan(v))));
    }
  }
}

TEST_CASE("parity: DAS odd, DMAS and DS-DMAS even") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    int m = 3 + int(rng() % 12);
    auto v = oracle::random_vector(rng, m);
    auto neg = v;
    for (double& x : neg) x = -x;
    CHECK(oracle::close_rel(das_pixel(cspan(neg)), -das_pixel(cspan(v))));
    CHECK(oracle::close_rel(dmas_pixel_fast(cspan(neg)),
                            dmas_pixel_fast(cspan(v))));
    CHECK(oracle::close_rel(dsdmas_pixel_fast(cspan(neg)),
                            dsdmas_pixel_fast(cspan(v))));
  }
}

TEST_CASE("DAS is additive; DMAS is deliberately not") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    int m = 2 + int(rng() % 14);
    auto a = oracle::random_vector(rng, m);
    auto b = oracle::random_vector(rng, m);
    std::vector<double> sum(m);
    for (int i = 0; i < m; ++i) sum[i] = a[i] + b[i];
    CHECK(das_pixel(cspan(sum)) ==
          doctest::Approx(das_pixel(cspan(a)) + das_pixel(cspan(b)))
              .epsilon(1e-12));
  }
  // deterministic counterexample
  std::vector<double> x = {1.0, 0.0}, y = {0.0, 1.0}, s = {1.0, 1.0};
  CHECK(dmas_pixel_fast(cspan(x)) == 0.0);
  CHECK(dmas_pixel_fast(cspan(y)) == 0.0);
  CHECK(dmas_pixel_fast(cspan(s)) == doctest::Approx(1.0));
}

TEST_CASE("coupling counts match the combinatorial formulas") {
  std::mt19937_64 rng(53);
  for (int m : {3, 4, 16, 64, 128}) {
    auto v = oracle::random_vector(rng, m);
    OpTally dmas_tally;
    dmas_pixel_naive(cspan(v), dmas_tally);
    CHECK(dmas_tally.couplings == std::uint64_t(m) * (m - 1) / 2);

    OpTally ds_tally;
    dsdmas_pixel_naive(cspan(v), ds_tally);
    CHECK(ds_tally.couplings ==
          std::uint64_t(m - 1) * (m - 2) / 2 + std::uint64_t(m - 1));
  }
}
