#include "jitune/kernels.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "jitune/errors.hpp"

namespace jitune::kernels {

namespace {

void require_same_size(const Matrix& a, const Matrix& b, const Matrix& out) {
  if (a.n() != b.n() || a.n() != out.n()) {
    throw DimensionMismatchError(
        "matrix sizes differ: " + std::to_string(a.n()) + ", " +
        std::to_string(b.n()) + ", " + std::to_string(out.n()));
  }
}

} // namespace

void Matrix::fill_zero() { std::fill(elems_.begin(), elems_.end(), 0); }

Matrix random_matrix(int n, std::uint64_t seed) {
  Matrix m(n);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // Small values keep n^3 accumulation well inside int range.
      m.at(i, j) = static_cast<int>(rng() % 10);
    }
  }
  return m;
}

Matrix identity(int n) {
  Matrix m(n);
  for (int i = 0; i < n; ++i) {
    m.at(i, i) = 1;
  }
  return m;
}

void matmul(LoopOrder order, const Matrix& a, const Matrix& b, Matrix& out) {
  require_same_size(a, b, out);
  const int n = a.n();
  out.fill_zero();
  switch (order) {
  case LoopOrder::Ijk:
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          out.at(i, j) += a.at(i, k) * b.at(k, j);
        }
      }
    }
    break;
  case LoopOrder::Ikj:
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
          out.at(i, j) += a.at(i, k) * b.at(k, j);
        }
      }
    }
    break;
  case LoopOrder::Jik:
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
          out.at(i, j) += a.at(i, k) * b.at(k, j);
        }
      }
    }
    break;
  }
}

Matrix matmul(LoopOrder order, const Matrix& a, const Matrix& b) {
  Matrix out(a.n());
  matmul(order, a, b, out);
  return out;
}

void blocked_matmul(long long block, const Matrix& a, const Matrix& b,
                    Matrix& out) {
  require_same_size(a, b, out);
  if (block < 1) {
    throw Error("block size must be at least 1, got " + std::to_string(block));
  }
  const int n = a.n();
  const int step = static_cast<int>(std::min<long long>(block, n));
  out.fill_zero();
  for (int i = 0; i < n; i += step) {
    for (int k = 0; k < n; k += step) {
      for (int j = 0; j < n; j += step) {
        const int i_end = std::min(i + step, n);
        const int k_end = std::min(k + step, n);
        const int j_end = std::min(j + step, n);
        for (int ii = i; ii < i_end; ++ii) {
          for (int kk = k; kk < k_end; ++kk) {
            const int a_ik = a.at(ii, kk);
            for (int jj = j; jj < j_end; ++jj) {
              out.at(ii, jj) += a_ik * b.at(kk, jj);
            }
          }
        }
      }
    }
  }
}

Matrix blocked_matmul(long long block, const Matrix& a, const Matrix& b) {
  Matrix out(a.n());
  blocked_matmul(block, a, b, out);
  return out;
}

template <typename T>
void saxpy(T a, std::span<const T> x, std::span<T> y, std::size_t count) {
  if (x.size() < count || y.size() < count) {
    throw DimensionMismatchError("saxpy spans shorter than count");
  }
  for (std::size_t i = 0; i < count; ++i) {
    y[i] = a * x[i] + y[i];
  }
}

template <typename T>
void saxpy_strip(T a, std::span<const T> x, std::span<T> y, std::size_t count,
                 long long strip) {
  if (x.size() < count || y.size() < count) {
    throw DimensionMismatchError("saxpy spans shorter than count");
  }
  if (strip < 1) {
    throw Error("strip length must be at least 1, got " +
                std::to_string(strip));
  }
  const std::size_t step = static_cast<std::size_t>(strip);
  for (std::size_t i = 0; i < count; i += step) {
    const std::size_t end = std::min(count, i + step);
    for (std::size_t j = i; j < end; ++j) {
      y[j] = a * x[j] + y[j];
    }
  }
}

template void saxpy<float>(float, std::span<const float>, std::span<float>,
                           std::size_t);
template void saxpy<double>(double, std::span<const double>, std::span<double>,
                            std::size_t);
template void saxpy_strip<float>(float, std::span<const float>,
                                 std::span<float>, std::size_t, long long);
template void saxpy_strip<double>(double, std::span<const double>,
                                  std::span<double>, std::size_t, long long);

} // namespace jitune::kernels
