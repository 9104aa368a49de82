// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "wmr/core/array2d.hpp"
#include "wmr/core/error.hpp"
#include "wmr/core/polynomial.hpp"
#include "wmr/moyal/terms.hpp"
#include "wmr/wavelet/connection.hpp"
#include "wmr/wavelet/filter.hpp"

namespace wmr::moyal {

/// Periodic banded n x n matrix: entry (l, (l + o) mod n) for |o| <= radius.
/// Offsets that wrap onto the same column simply add.
struct BandedOperator {
  std::size_t n = 0;
  int radius = 0;
  std::vector<double> values;  ///< values[l * (2 radius + 1) + o + radius]

  BandedOperator() = default;
  BandedOperator(std::size_t size, int r) : n(size), radius(r), values(size * static_cast<std::size_t>(2 * r + 1), 0.0) {}

  static BandedOperator identity(std::size_t size, double scale = 1.0) {
    BandedOperator op(size, 0);
    for (double& v : op.values) v = scale;
    return op;
  }

  std::size_t width() const { return static_cast<std::size_t>(2 * radius + 1); }
  double& at(std::size_t l, int o) { return values[l * width() + static_cast<std::size_t>(o + radius)]; }
  double at(std::size_t l, int o) const { return values[l * width() + static_cast<std::size_t>(o + radius)]; }
  std::size_t column(std::size_t l, int o) const {
    const long long c = (static_cast<long long>(l) + o) % static_cast<long long>(n);
    return static_cast<std::size_t>(c < 0 ? c + static_cast<long long>(n) : c);
  }

  /// this * rhs
  BandedOperator compose(const BandedOperator& rhs) const {
    BandedOperator out(n, radius + rhs.radius);
    for (std::size_t l = 0; l < n; ++l) {
      for (int a = -radius; a <= radius; ++a) {
        const double x = at(l, a);
        if (x == 0.0) continue;
        const std::size_t mid = column(l, a);
        for (int b = -rhs.radius; b <= rhs.radius; ++b) out.at(l, a + b) += x * rhs.at(mid, b);
      }
    }
    return out;
  }

  std::vector<double> column_sums() const {
    std::vector<double> s(n, 0.0);
    for (std::size_t l = 0; l < n; ++l) {
      for (int o = -radius; o <= radius; ++o) s[column(l, o)] += at(l, o);
    }
    return s;
  }

  Eigen::SparseMatrix<double, Eigen::RowMajor> to_sparse() const {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(n * width());
    for (std::size_t l = 0; l < n; ++l) {
      for (int o = -radius; o <= radius; ++o) {
        const double v = at(l, o);
        if (v != 0.0) trip.emplace_back(static_cast<int>(l), static_cast<int>(column(l, o)), v);
      }
    }
    Eigen::SparseMatrix<double, Eigen::RowMajor> m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
  }
};

/// d^k/dx^k on scaling coefficients of spacing h: entry (l, l + o) = h^-k Gamma^(k)_{-o}.
inline BandedOperator derivative_operator(const wavelet::WaveletFilter& filter, int order, std::size_t n, double h) {
  if (order == 0) return BandedOperator::identity(n);
  if (order >= filter.order) {
    fail(ErrorKind::unsupported_order,
         "derivative of order " + std::to_string(order) + " needs Daubechies order >= " + std::to_string(order + 1) +
             " (configured " + std::to_string(filter.order) + "); raise the wavelet order or use the oracle scheme");
  }
  const auto table = wavelet::connection_coefficients(filter, order);
  const int r = table.support_radius;
  BandedOperator op(n, r);
  const double scale = std::pow(h, -order);
  for (std::size_t l = 0; l < n; ++l) {
    for (int o = -r; o <= r; ++o) op.at(l, o) = scale * table(-o);
  }
  return op;
}

/// Multiplication by P(x) on scaling coefficients whose sample positions are x0 + l h:
/// entry (l, l + m) = sum_r P^(r)(x_l) / r! h^r J^r_m, with J the centred moment table.
inline BandedOperator multiplication_operator(const wavelet::WaveletFilter& filter, const Polynomial& poly,
                                              std::size_t n, double x0, double h) {
  if (poly.degree() <= 0) return BandedOperator::identity(n, poly.coefficient(0));
  const auto moments = wavelet::moment_table(filter);
  require(poly.degree() <= moments.max_power, ErrorKind::invalid_argument,
          "multiplication_operator: polynomial degree exceeds the moment table");
  const int r = moments.support_radius;
  BandedOperator op(n, r);
  std::vector<Polynomial> taylor;
  for (int k = 0; k <= poly.degree(); ++k) taylor.push_back(poly.derivative(k));
  for (std::size_t l = 0; l < n; ++l) {
    const double x = x0 + static_cast<double>(l) * h;
    double hk = 1.0;
    double fact = 1.0;
    for (int k = 0; k <= poly.degree(); ++k) {
      if (k > 0) {
        hk *= h;
        fact *= k;
      }
      const double c = taylor[static_cast<std::size_t>(k)](x) * hk / fact;
      if (c == 0.0) continue;
      for (int m = -r; m <= r; ++m) op.at(l, m) += c * moments.centered(k, m);
    }
  }
  return op;
}

/// Galerkin realization of one axis factor on an axis of n samples starting at x0.
inline BandedOperator axis_operator(const wavelet::WaveletFilter& filter, const AxisFactor& f, std::size_t n, double x0,
                                    double h) {
  const auto mult = multiplication_operator(filter, f.poly, n, x0, h);
  if (f.derivative == 0) return mult;
  const auto diff = derivative_operator(filter, f.derivative, n, h);
  if (mult.radius == 0 && f.poly.degree() <= 0) {
    BandedOperator out = diff;
    for (double& v : out.values) v *= f.poly.coefficient(0);
    return out;
  }
  return f.derivative_outside ? diff.compose(mult) : mult.compose(diff);
}

/// out(i, j) += scale * sum_o A(i, o) in(i + o, j)
inline void apply_rows(const BandedOperator& a, const Grid2D& in, Grid2D& out, double scale = 1.0) {
  const std::size_t m = in.cols();
  for (std::size_t i = 0; i < a.n; ++i) {
    auto dst = out.row(i);
    for (int o = -a.radius; o <= a.radius; ++o) {
      const double c = scale * a.at(i, o);
      if (c == 0.0) continue;
      const auto src = in.row(a.column(i, o));
      for (std::size_t j = 0; j < m; ++j) dst[j] += c * src[j];
    }
  }
}

/// out(i, j) += scale * sum_o B(j, o) in(i, j + o)
inline void apply_cols(const BandedOperator& b, const Grid2D& in, Grid2D& out, double scale = 1.0) {
  const std::size_t rows = in.rows();
  for (std::size_t i = 0; i < rows; ++i) {
    const auto src = in.row(i);
    auto dst = out.row(i);
    for (std::size_t j = 0; j < b.n; ++j) {
      double acc = 0.0;
      for (int o = -b.radius; o <= b.radius; ++o) acc += b.at(j, o) * src[b.column(j, o)];
      dst[j] += scale * acc;
    }
  }
}

}  // namespace wmr::moyal
