#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace jitune::kernels {

/// Square integer matrix, row-major.
class Matrix {
public:
  Matrix() = default;
  explicit Matrix(int n) : n_(n), elems_(static_cast<std::size_t>(n) * n, 0) {}

  int n() const { return n_; }

  int& at(int row, int col) {
    return elems_[static_cast<std::size_t>(row) * n_ + col];
  }
  int at(int row, int col) const {
    return elems_[static_cast<std::size_t>(row) * n_ + col];
  }

  void fill_zero();

  bool operator==(const Matrix& other) const = default;

private:
  int n_ = 0;
  std::vector<int> elems_;
};

/// n×n matrix with elements drawn deterministically from `seed`.
Matrix random_matrix(int n, std::uint64_t seed);

Matrix identity(int n);

/// Traversal order of the matmul triple loop. All orders produce the same
/// product; they differ only in memory-access pattern.
enum class LoopOrder { Ijk, Ikj, Jik };

/// out = a × b with the given loop order. out is zeroed first.
/// Throws DimensionMismatchError unless a, b, out have equal size.
void matmul(LoopOrder order, const Matrix& a, const Matrix& b, Matrix& out);
Matrix matmul(LoopOrder order, const Matrix& a, const Matrix& b);

/// Tiled out = a × b: the i/k/j loops step by `block` and the inner loops
/// are min-bounded, so block sizes that do not divide n are handled by
/// partial tiles. block = 1 and block = n degenerate to the naive product.
/// Throws on block < 1 or mismatched sizes.
void blocked_matmul(long long block, const Matrix& a, const Matrix& b,
                    Matrix& out);
Matrix blocked_matmul(long long block, const Matrix& a, const Matrix& b);

/// y[i] = a·x[i] + y[i] for the first `count` elements.
/// Throws DimensionMismatchError when either span is shorter than count.
template <typename T>
void saxpy(T a, std::span<const T> x, std::span<T> y, std::size_t count);

/// Strip-mined saxpy: processes `count` elements in chunks of `strip`.
/// Same result as saxpy; the strip length is the tunable.
template <typename T>
void saxpy_strip(T a, std::span<const T> x, std::span<T> y, std::size_t count,
                 long long strip);

extern template void saxpy<float>(float, std::span<const float>,
                                  std::span<float>, std::size_t);
extern template void saxpy<double>(double, std::span<const double>,
                                   std::span<double>, std::size_t);
extern template void saxpy_strip<float>(float, std::span<const float>,
                                        std::span<float>, std::size_t,
                                        long long);
extern template void saxpy_strip<double>(double, std::span<const double>,
                                         std::span<double>, std::size_t,
                                         long long);

} // namespace jitune::kernels
