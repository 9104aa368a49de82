// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace wmr {

/// Dense row-major 2D array. Row index is the first (q) axis, column the second (p) axis.
template <class T>
class Array2D {
 public:
  Array2D() = default;
  Array2D(std::size_t rows, std::size_t cols, T value = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }
  const T& operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }

  std::span<T> flat() noexcept { return data_; }
  std::span<const T> flat() const noexcept { return data_; }
  std::vector<T>& storage() noexcept { return data_; }
  const std::vector<T>& storage() const noexcept { return data_; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  Array2D& operator+=(const Array2D& other) {
    assert(other.size() == size());
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
  }
  Array2D& operator-=(const Array2D& other) {
    assert(other.size() == size());
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
  }
  Array2D& operator*=(T s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend Array2D operator+(Array2D a, const Array2D& b) { return a += b; }
  friend Array2D operator-(Array2D a, const Array2D& b) { return a -= b; }
  friend Array2D operator*(Array2D a, T s) { return a *= s; }
  friend Array2D operator*(T s, Array2D a) { return a *= s; }

  bool operator==(const Array2D&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using Grid2D = Array2D<double>;

inline double sum_squares(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

inline double l2_norm(std::span<const double> v) { return std::sqrt(sum_squares(v)); }

/// ||a - b|| / ||b||, or ||a|| when b is identically zero.
inline double relative_l2(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num += (a[k] - b[k]) * (a[k] - b[k]);
    den += b[k] * b[k];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline double relative_l2(const Grid2D& a, const Grid2D& b) { return relative_l2(a.flat(), b.flat()); }

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline int log2_exact(std::size_t n) {
  int level = 0;
  while ((std::size_t{1} << level) < n) ++level;
  return level;
}

}  // namespace wmr
