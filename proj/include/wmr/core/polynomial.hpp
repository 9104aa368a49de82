// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <cstddef>
#include <vector>

namespace wmr {

/// Univariate polynomial, coefficients in ascending powers.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients) : c_(std::move(coefficients)) { trim(); }

  static Polynomial monomial(double coefficient, int power) {
    std::vector<double> c(static_cast<std::size_t>(power) + 1, 0.0);
    c.back() = coefficient;
    return Polynomial(std::move(c));
  }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<double>& coefficients() const { return c_; }
  double coefficient(int k) const {
    return k >= 0 && k < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(k)] : 0.0;
  }

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial derivative(int order = 1) const {
    if (order <= 0) return *this;
    if (order > degree()) return {};
    std::vector<double> out(c_.size() - static_cast<std::size_t>(order));
    for (std::size_t k = 0; k < out.size(); ++k) {
      double falling = 1.0;
      for (int t = 0; t < order; ++t) falling *= static_cast<double>(k + static_cast<std::size_t>(order) - static_cast<std::size_t>(t));
      out[k] = c_[k + static_cast<std::size_t>(order)] * falling;
    }
    return Polynomial(std::move(out));
  }

  Polynomial& operator+=(const Polynomial& other) {
    if (other.c_.size() > c_.size()) c_.resize(other.c_.size(), 0.0);
    for (std::size_t k = 0; k < other.c_.size(); ++k) c_[k] += other.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator*=(double s) {
    for (double& v : c_) v *= s;
    trim();
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }

  bool operator==(const Polynomial&) const = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }
  std::vector<double> c_;
};

}  // namespace wmr
