#include <random>
#include <vector>

#include "doctest.h"

#include "jitune/errors.hpp"
#include "jitune/kernels.hpp"

using namespace jitune::kernels;

namespace {

// Reference product, written independently of the library kernels.
Matrix naive_product(const Matrix& a, const Matrix& b) {
  const int n = a.n();
  Matrix c(n);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      int acc = 0;
      for (int inner = 0; inner < n; ++inner) {
        acc += a.at(row, inner) * b.at(inner, col);
      }
      c.at(row, col) = acc;
    }
  }
  return c;
}

Matrix from_rows(const std::vector<std::vector<int>>& rows) {
  Matrix m(static_cast<int>(rows.size()));
  for (int i = 0; i < m.n(); ++i) {
    for (int j = 0; j < m.n(); ++j) {
      m.at(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

constexpr LoopOrder kOrders[] = {LoopOrder::Ijk, LoopOrder::Ikj,
                                 LoopOrder::Jik};

} // namespace

TEST_CASE("saxpy updates y in place") {
  const std::vector<double> x{1.0, 1.0};
  std::vector<double> y{2.0, 3.0};
  saxpy<double>(1.0, x, y, 2);
  CHECK(y == std::vector<double>{3.0, 4.0});

  // a = 0 leaves y unchanged.
  std::vector<double> unchanged{5.0, 6.0};
  saxpy<double>(0.0, x, unchanged, 2);
  CHECK(unchanged == std::vector<double>{5.0, 6.0});
}

TEST_CASE("saxpy matches an elementwise recompute on random data") {
  std::mt19937_64 rng(5);
  std::vector<double> x(257), y(257);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = static_cast<double>(rng() % 1000) / 7.0;
    y[i] = static_cast<double>(rng() % 1000) / 13.0;
  }
  const double a = 2.75;
  std::vector<double> expected(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    expected[i] = a * x[i] + y[i];
  }

  std::vector<double> plain = y;
  saxpy<double>(a, x, plain, plain.size());
  CHECK(plain == expected);

  for (const long long strip : {1LL, 3LL, 16LL, 257LL, 1000LL}) {
    std::vector<double> stripped = y;
    saxpy_strip<double>(a, x, stripped, stripped.size(), strip);
    CHECK(stripped == expected);
  }
}

TEST_CASE("saxpy rejects short spans") {
  const std::vector<float> x{1.0f};
  std::vector<float> y{1.0f, 2.0f};
  CHECK_THROWS_AS(saxpy<float>(1.0f, x, y, 2),
                  jitune::DimensionMismatchError);
}

TEST_CASE("every loop order multiplies by identity correctly") {
  const Matrix a = random_matrix(9, 17);
  const Matrix id = identity(9);
  for (const LoopOrder order : kOrders) {
    CHECK(matmul(order, a, id) == a);
  }
}

TEST_CASE("a hand-checked 2x2 product") {
  const Matrix a = from_rows({{1, 2}, {3, 4}});
  const Matrix b = from_rows({{5, 6}, {7, 8}});
  const Matrix expected = from_rows({{19, 22}, {43, 50}});
  for (const LoopOrder order : kOrders) {
    CHECK(matmul(order, a, b) == expected);
  }
}

TEST_CASE("all loop orders agree with the reference on random input") {
  const Matrix a = random_matrix(16, 3);
  const Matrix b = random_matrix(16, 4);
  const Matrix expected = naive_product(a, b);
  for (const LoopOrder order : kOrders) {
    CHECK(matmul(order, a, b) == expected);
  }
}

TEST_CASE("mismatched dimensions are rejected") {
  const Matrix a = random_matrix(4, 1);
  const Matrix b = random_matrix(5, 2);
  CHECK_THROWS_AS(matmul(LoopOrder::Ijk, a, b),
                  jitune::DimensionMismatchError);
  CHECK_THROWS_AS(blocked_matmul(2, a, b), jitune::DimensionMismatchError);
}

TEST_CASE("degenerate tilings equal the naive product") {
  const Matrix a = random_matrix(7, 21);
  const Matrix b = random_matrix(7, 22);
  const Matrix expected = naive_product(a, b);
  CHECK(blocked_matmul(1, a, b) == expected);
  CHECK(blocked_matmul(7, a, b) == expected);
  CHECK(blocked_matmul(100, a, b) == expected); // block > n is one tile
}

TEST_CASE("non-divisible blocks still compute the exact product") {
  const Matrix a = random_matrix(12, 31);
  const Matrix b = random_matrix(12, 32);
  const Matrix expected = naive_product(a, b);
  for (const long long block : {2LL, 4LL, 8LL}) {
    CHECK(blocked_matmul(block, a, b) == expected);
  }
}

TEST_CASE("blocked matmul rejects non-positive blocks") {
  const Matrix a = random_matrix(4, 1);
  const Matrix b = random_matrix(4, 2);
  CHECK_THROWS_AS(blocked_matmul(0, a, b), jitune::Error);
  CHECK_THROWS_AS(blocked_matmul(-3, a, b), jitune::Error);
}

TEST_CASE("variants agree with the reference across sizes and blocks") {
  std::uint64_t seed = 100;
  for (const int n : {4, 12, 16, 33}) {
    const Matrix a = random_matrix(n, seed++);
    const Matrix b = random_matrix(n, seed++);
    const Matrix expected = naive_product(a, b);
    for (const LoopOrder order : kOrders) {
      CHECK(matmul(order, a, b) == expected);
    }
    for (const long long block :
         {1LL, 2LL, 3LL, 8LL, static_cast<long long>(n)}) {
      CHECK(blocked_matmul(block, a, b) == expected);
    }
  }
}
