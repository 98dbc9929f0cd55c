#pragma once

#include <cassert>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace adtrack {

struct GridSize {
  int rows = 0;
  int cols = 0;

  std::size_t area() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
  bool operator==(const GridSize&) const = default;
};

/// Dense row-major 2-D array.
template <typename T>
class Array2D {
 public:
  Array2D() = default;
  Array2D(int rows, int cols, T fill = T{}) : rows_(rows), cols_(cols), data_(checked_area(rows, cols), fill) {}
  explicit Array2D(GridSize g, T fill = T{}) : Array2D(g.rows, g.cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  GridSize size() const { return {rows_, cols_}; }
  std::size_t numel() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int r, int c) {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  const T& operator()(int r, int c) const {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::span<T> span() { return data_; }
  std::span<const T> span() const { return data_; }
  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  bool operator==(const Array2D&) const = default;

 private:
  static std::size_t checked_area(int rows, int cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("Array2D: negative dimension");
    return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using Complex = std::complex<double>;
using RealMap = Array2D<double>;
using SpectrumMap = Array2D<Complex>;

/// Integer offset that maps index `i` on an `n`-periodic grid into [-n/2, n/2).
inline int wrap_offset(int i, int n) { return i < (n + 1) / 2 ? i : i - n; }

}  // namespace adtrack
