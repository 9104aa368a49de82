// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wmr/core/error.hpp"
#include "wmr/wavelet/filter.hpp"

namespace wmr::wavelet {

/// Gamma_k = int phi(x) phi^(d)(x + k) dx for |k| <= 2N - 2, normalized so that
/// sum_k k^d Gamma_k = (-1)^d d!.
struct ConnectionTable {
  int wavelet_order = 0;
  int derivative_order = 0;
  int support_radius = 0;
  std::vector<double> values;  ///< values[k + support_radius]

  double operator()(int k) const {
    if (k < -support_radius || k > support_radius) return 0.0;
    return values[static_cast<std::size_t>(k + support_radius)];
  }
};

namespace detail {

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

/// a_s = sum_i h_i h_{i+s}.
inline double filter_autocorrelation(const WaveletFilter& f, int s) {
  double acc = 0.0;
  const int n = static_cast<int>(f.length());
  for (int i = 0; i < n; ++i) {
    const int j = i + s;
    if (j >= 0 && j < n) acc += f.low_pass[static_cast<std::size_t>(i)] * f.low_pass[static_cast<std::size_t>(j)];
  }
  return acc;
}

/// T[k][l] = a_{2k-l} on shifts k, l in [-R, R]; the two-scale operator acting on
/// translation-indexed integrals of products of scaling functions.
inline Eigen::MatrixXd two_scale_matrix(const WaveletFilter& f) {
  const int r = 2 * f.order - 2;
  const int n = 2 * r + 1;
  Eigen::MatrixXd t(n, n);
  for (int k = -r; k <= r; ++k) {
    for (int l = -r; l <= r; ++l) t(k + r, l + r) = filter_autocorrelation(f, 2 * k - l);
  }
  return t;
}

inline ConnectionTable build_connection_table(const WaveletFilter& f, int d) {
  const int r = 2 * f.order - 2;
  const int n = 2 * r + 1;
  Eigen::MatrixXd system(n + 1, n);
  system.topRows(n) = std::ldexp(1.0, d) * two_scale_matrix(f) - Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  for (int k = -r; k <= r; ++k) system(n, k + r) = ipow(static_cast<double>(k), d);
  rhs[n] = (d % 2 == 0 ? 1.0 : -1.0) * factorial(d);
  Eigen::VectorXd gamma = system.colPivHouseholderQr().solve(rhs);

  ConnectionTable table;
  table.wavelet_order = f.order;
  table.derivative_order = d;
  table.support_radius = r;
  // Gamma_{-k} = (-1)^d Gamma_k holds exactly; the least-squares solve only to ~1e-9 for d >= 4.
  const double parity = d % 2 == 0 ? 1.0 : -1.0;
  table.values.resize(static_cast<std::size_t>(n));
  for (int k = -r; k <= r; ++k) table.values[static_cast<std::size_t>(k + r)] = 0.5 * (gamma[k + r] + parity * gamma[r - k]);
  return table;
}

}  // namespace detail

/// Connection coefficients for the d-th derivative, from the eigenproblem of the
/// refinement relation with moment normalization. Requires d < N. Cached per (N, d).
inline ConnectionTable connection_coefficients(const WaveletFilter& filter, int derivative_order) {
  require(derivative_order >= 1, ErrorKind::invalid_argument, "connection_coefficients: derivative order must be >= 1");
  if (derivative_order >= filter.order) {
    fail(ErrorKind::unsupported_order,
         "connection_coefficients: derivative order " + std::to_string(derivative_order) +
             " needs a Daubechies order above " + std::to_string(derivative_order) + " (have " +
             std::to_string(filter.order) + "); use a higher wavelet order or the oracle derivative scheme");
  }
  static std::mutex mutex;
  static std::map<std::pair<int, int>, ConnectionTable> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(filter.order, derivative_order);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto table = detail::build_connection_table(filter, derivative_order);
  cache.emplace(key, table);
  return table;
}

/// Writes "k,gamma_k" rows.
inline void write_connection_csv(const ConnectionTable& table, const std::string& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::io, "cannot open " + path + " for writing");
  out << "k,gamma_k\n" << std::setprecision(17);
  for (int k = -table.support_radius; k <= table.support_radius; ++k) out << k << ',' << table(k) << '\n';
  require(static_cast<bool>(out), ErrorKind::io, "write failed for " + path);
}

/// Integrals of polynomial weights against products of shifted scaling functions:
/// centered(r, m) = int (x - M1)^r phi(x) phi(x - m) dx with M1 = int x phi(x) dx.
struct MomentTable {
  int wavelet_order = 0;
  int max_power = 0;
  int support_radius = 0;
  double first_moment = 0.0;
  std::vector<std::vector<double>> centered_values;  ///< [r][m + R]

  double centered(int r, int m) const {
    if (m < -support_radius || m > support_radius) return 0.0;
    return centered_values[static_cast<std::size_t>(r)][static_cast<std::size_t>(m + support_radius)];
  }
};

namespace detail {

inline MomentTable build_moment_table(const WaveletFilter& f, int max_power) {
  const int taps = static_cast<int>(f.length());
  const auto& h = f.low_pass;

  // Moments of phi: M_k (1 - 2^-k) = 2^-k / sqrt2 sum_i h_i sum_{r<k} C(k,r) i^(k-r) M_r.
  std::vector<double> phi_moments(static_cast<std::size_t>(max_power) + 1, 0.0);
  phi_moments[0] = 1.0;
  for (int k = 1; k <= max_power; ++k) {
    double acc = 0.0;
    for (int i = 0; i < taps; ++i) {
      for (int r = 0; r < k; ++r) {
        acc += h[static_cast<std::size_t>(i)] * binomial(k, r) * ipow(i, k - r) * phi_moments[static_cast<std::size_t>(r)];
      }
    }
    phi_moments[static_cast<std::size_t>(k)] = std::ldexp(acc, -k) / std::sqrt(2.0) / (1.0 - std::ldexp(1.0, -k));
  }

  // Raw product moments I^k_m = int x^k phi(x) phi(x-m) dx from
  // I^k_m = 2^-k sum_{i,j} h_i h_j sum_r C(k,r) i^(k-r) I^r_{2m+j-i}.
  const int rad = 2 * f.order - 2;
  const int n = 2 * rad + 1;
  const Eigen::MatrixXd t = two_scale_matrix(f);
  std::vector<Eigen::VectorXd> raw;
  raw.push_back(Eigen::VectorXd::Zero(n));
  raw[0][rad] = 1.0;
  auto raw_at = [&](int r, int m) { return (m < -rad || m > rad) ? 0.0 : raw[static_cast<std::size_t>(r)][m + rad]; };
  for (int k = 1; k <= max_power; ++k) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (int m = -rad; m <= rad; ++m) {
      double acc = 0.0;
      for (int i = 0; i < taps; ++i) {
        for (int j = 0; j < taps; ++j) {
          const double hij = h[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(j)];
          for (int r = 0; r < k; ++r) acc += hij * binomial(k, r) * ipow(i, k - r) * raw_at(r, 2 * m + j - i);
        }
      }
      rhs[m + rad] = std::ldexp(acc, -k);
    }
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n, n) - std::ldexp(1.0, -k) * t;
    raw.push_back(lhs.partialPivLu().solve(rhs));
  }

  MomentTable table;
  table.wavelet_order = f.order;
  table.max_power = max_power;
  table.support_radius = rad;
  table.first_moment = max_power >= 1 ? phi_moments[1] : 0.0;
  const double shift = table.first_moment;
  table.centered_values.assign(static_cast<std::size_t>(max_power) + 1, std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int r = 0; r <= max_power; ++r) {
    for (int m = -rad; m <= rad; ++m) {
      double acc = 0.0;
      for (int s = 0; s <= r; ++s) acc += binomial(r, s) * ipow(-shift, r - s) * raw_at(s, m);
      table.centered_values[static_cast<std::size_t>(r)][static_cast<std::size_t>(m + rad)] = acc;
    }
  }
  return table;
}

}  // namespace detail

inline constexpr int kMaxMomentPower = 12;

/// Moment table up to power 12, cached per wavelet order.
inline MomentTable moment_table(const WaveletFilter& filter) {
  static std::mutex mutex;
  static std::map<int, MomentTable> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(filter.order); it != cache.end()) return it->second;
  auto table = detail::build_moment_table(filter, kMaxMomentPower);
  cache.emplace(filter.order, table);
  return table;
}

}  // namespace wmr::wavelet
