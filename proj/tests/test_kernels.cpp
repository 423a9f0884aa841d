#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "cgbench/kernels.hpp"
#include "oracle.hpp"

using namespace cgbench;

namespace {

DenseVector vec(std::vector<double> v) { return DenseVector::wrap(std::move(v)); }

const KernelVariant kBoth[] = {KernelVariant::Scalar, KernelVariant::Vectorized};

}  // namespace

TEST_CASE("saxpy examples") {
  for (KernelVariant v : kBoth) {
    // zero multiplier passes y through
    CHECK(saxpy(0.0, vec({1, 2, 3}), vec({4, 5, 6}), v) == vec({4, 5, 6}));
    // plain reference loop
    const auto expect = oracle::ref_saxpy(2.0, {1, 2}, {3, 4});
    CHECK(saxpy(2.0, vec({1, 2}), vec({3, 4}), v) == vec(expect));
    CHECK(expect == std::vector<double>{5, 8});
    // identity case
    CHECK(saxpy(1.0, vec({1, 0, 0}), vec({0, 0, 0}), v) == vec({1, 0, 0}));
  }
}

TEST_CASE("dot and norm_sq examples") {
  for (KernelVariant v : kBoth) {
    CHECK(dot(vec({1, 0}), vec({0, 1}), v) == 0.0);
    CHECK(dot(vec({3, 4}), vec({3, 4}), v) == oracle::ref_dot({3, 4}, {3, 4}));
    CHECK(dot(vec({3, 4}), vec({3, 4}), v) == 25.0);
    CHECK(dot(vec({1, 2, 3}), vec({4, 5, 6}), v) == oracle::ref_dot({1, 2, 3}, {4, 5, 6}));
    CHECK(dot(vec({1, 2, 3}), vec({4, 5, 6}), v) == 32.0);
    CHECK(norm_sq(vec({0, 0, 0}), v) == 0.0);
    CHECK(norm_sq(vec({3, 4}), v) == 25.0);
    CHECK(norm_sq(vec({1, 0, 0, 0}), v) == 1.0);
  }
}

TEST_CASE("length mismatch is a dimension error") {
  CHECK_THROWS_AS(saxpy(1.0, vec({1, 2}), vec({1}), KernelVariant::Scalar),
                  DimensionError);
  CHECK_THROWS_AS(dot(vec({1}), vec({1, 2}), KernelVariant::Vectorized),
                  DimensionError);
}

TEST_CASE("from_values rejects non-finite input") {
  CHECK_THROWS_AS(DenseVector::from_values({1.0, std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(DenseVector::from_values({std::numeric_limits<double>::infinity()}),
                  std::invalid_argument);
  CHECK(DenseVector::from_values({1.0, -2.5}).size() == 2);
}

TEST_CASE("scalar and vectorized saxpy agree bitwise") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const index_t n = 1 + static_cast<index_t>(rng() % 300);
    const auto x = oracle::random_vec(rng, n, -1.0, 1.0);
    const auto y = oracle::random_vec(rng, n, -1.0, 1.0);
    const double a = 2.0 * oracle::next_unit(rng) - 1.0;
    const auto zs = saxpy(a, vec(x), vec(y), KernelVariant::Scalar);
    const auto zv = saxpy(a, vec(x), vec(y), KernelVariant::Vectorized);
    REQUIRE(oracle::bits_equal(zs, zv));  // same per-element expression in both loops
    const auto ref = oracle::ref_saxpy(a, x, y);
    for (index_t i = 0; i < n; ++i) {
      REQUIRE(oracle::ulp_distance(zs[i], ref[static_cast<std::size_t>(i)]) <= 4);
    }
  }
}

TEST_CASE("scalar and vectorized reductions agree within 4 ulps on exact inputs") {
  // Dyadic-grid values make every intermediate sum exact, so any
  // disagreement is an indexing or lane bug, not roundoff.
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const index_t n = 1 + static_cast<index_t>(rng() % 4096);
    const auto x = oracle::random_dyadic_vec(rng, n);
    const auto y = oracle::random_dyadic_vec(rng, n);
    const double ds = dot(vec(x), vec(y), KernelVariant::Scalar);
    const double dv = dot(vec(x), vec(y), KernelVariant::Vectorized);
    REQUIRE(oracle::ulp_distance(ds, dv) <= 4);
    REQUIRE(ds == oracle::ref_dot(x, y));
    REQUIRE(oracle::ulp_distance(norm_sq(vec(x), KernelVariant::Scalar),
                                 norm_sq(vec(x), KernelVariant::Vectorized)) <= 4);
  }
}

TEST_CASE("reduction variants stay close on continuous inputs") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const index_t n = 1 + static_cast<index_t>(rng() % 4096);
    const auto x = oracle::random_vec(rng, n, -1.0, 1.0);
    const auto y = oracle::random_vec(rng, n, -1.0, 1.0);
    const double ds = dot(vec(x), vec(y), KernelVariant::Scalar);
    const double dv = dot(vec(x), vec(y), KernelVariant::Vectorized);
    double abs_sum = 0.0;
    for (index_t i = 0; i < n; ++i) {
      abs_sum += std::abs(x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)]);
    }
    REQUIRE(std::abs(ds - dv) <= 1e-12 * std::max(abs_sum, 1.0));
  }
}

TEST_CASE("algebraic identities") {
  std::mt19937_64 rng(17);
  for (KernelVariant v : kBoth) {
    for (int trial = 0; trial < 50; ++trial) {
      const index_t n = 1 + static_cast<index_t>(rng() % 100);
      const auto xs = oracle::random_vec(rng, n, -2.0, 2.0);
      const auto ys = oracle::random_vec(rng, n, -2.0, 2.0);
      const double a = 4.0 * oracle::next_unit(rng) - 2.0;
      const DenseVector x = vec(xs), y = vec(ys), zero(n);

      CHECK(oracle::bits_equal(saxpy(0.0, x, y, v), y));  // bitwise
      const DenseVector ax = saxpy(a, x, zero, v);
      for (index_t i = 0; i < n; ++i) CHECK(ax[i] == a * x[i]);

      CHECK(oracle::bits_equal(dot(x, y, v), dot(y, x, v)));  // bitwise under the fixed order
      CHECK(norm_sq(x, v) >= 0.0);
    }
    CHECK(norm_sq(DenseVector(64), v) == 0.0);
    DenseVector nearly(64);
    nearly[63] = 1e-150;  // square stays above the underflow threshold
    CHECK(norm_sq(nearly, v) > 0.0);
  }
}

TEST_CASE("flop accounting conventions") {
  CHECK(saxpy_flops(1000) == 2000.0);
  CHECK(dot_flops(1000) == 2000.0);
  CHECK(norm_sq_flops(1000) == 2000.0);
  CHECK(spmv_flops(500) == 1000.0);
  CHECK(saxpy_bytes(10) == 240.0);
  CHECK(dot_bytes(10) == 160.0);
}

TEST_CASE("lane width is eight doubles") {
  CHECK(kLaneWidth == 8);
}
