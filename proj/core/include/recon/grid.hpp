#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "recon/errors.hpp"

namespace recon {

using Complex = std::complex<double>;

/// Dense N x M matrix addressed either by storage position (i, j) with
/// 0 <= i < N, 0 <= j < M, or by centered index (k1, k2) with
/// k1 in {-floor(N/2), ..., N - floor(N/2) - 1} (likewise for k2).
/// Row-major storage.
template <class T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(checked(rows, cols)), fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  /// Offset between storage row and centered row index.
  int row_center() const { return rows_ / 2; }
  int col_center() const { return cols_ / 2; }

  T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const T& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  T& at(int k1, int k2) { return (*this)(k1 + row_center(), k2 + col_center()); }
  const T& at(int k1, int k2) const { return (*this)(k1 + row_center(), k2 + col_center()); }

  /// Centered access with periodic wrap of both indices.
  const T& wrapped(int k1, int k2) const {
    return (*this)(wrap(k1 + row_center(), rows_), wrap(k2 + col_center(), cols_));
  }

  std::span<T> row(int i) { return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)}; }
  std::span<const T> row(int i) const {
    return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)};
  }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  bool same_shape(const Grid& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  template <class U>
  bool same_shape(const Grid<U>& o) const {
    return rows_ == o.rows() && cols_ == o.cols();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

  static int wrap(int i, int n) {
    const int r = i % n;
    return r < 0 ? r + n : r;
  }

 private:
  static long checked(int rows, int cols) {
    if (rows < 0 || cols < 0) throw ConfigError("grid dimensions must be nonnegative");
    return static_cast<long>(rows) * cols;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using Image = Grid<double>;
using ComplexImage = Grid<Complex>;

/// Centered 2D DFT coefficients of an image. Kept distinct from ComplexImage
/// so that spatial and frequency data cannot be mixed by accident.
class Spectrum : public Grid<Complex> {
 public:
  Spectrum() = default;
  Spectrum(int rows, int cols, Complex fill = {}) : Grid<Complex>(rows, cols, fill) {}
  explicit Spectrum(Grid<Complex> g) : Grid<Complex>(std::move(g)) {}
};

template <class T>
void require_same_shape(const Grid<T>& a, const auto& b, const char* what) {
  if (!a.same_shape(b)) throw ConfigError(std::string("dimension mismatch: ") + what);
}

ComplexImage to_complex(const Image& a);
Image real_part(const ComplexImage& a);
Image imag_part(const ComplexImage& a);

/// Frobenius norms and inner products. The inner product is sum a * conj(b).
double frobenius_norm(const Image& a);
double frobenius_norm(const Grid<Complex>& a);
double squared_distance(const Image& a, const Image& b);
double squared_distance(const Grid<Complex>& a, const Grid<Complex>& b);

}  // namespace recon
