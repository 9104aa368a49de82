// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>

#include "wmr/core/error.hpp"

namespace wmr::wavelet {

inline constexpr int kMinOrder = 1;
inline constexpr int kMaxOrder = 10;

/// Orthonormal Daubechies filter pair. `order` is the number of vanishing moments N;
/// both filters have 2N taps.
struct WaveletFilter {
  int order = 1;
  std::vector<double> low_pass;
  std::vector<double> high_pass;

  std::size_t length() const noexcept { return low_pass.size(); }
  /// Scaling function support is [0, 2N-1].
  int support_width() const noexcept { return 2 * order - 1; }
  bool operator==(const WaveletFilter&) const = default;
};

namespace detail {

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Minimum-phase spectral factorization: the Daubechies polynomial
// P(y) = sum_k C(N-1+k, k) y^k with y = sin^2(w/2), mapped to z via
// y = (2 - z - 1/z)/4; keep the root of each quadratic inside the unit circle.
inline WaveletFilter build_daubechies(int order) {
  using cplx = std::complex<double>;
  std::vector<cplx> taps{cplx(1.0)};
  auto convolve = [&taps](cplx a, cplx b) {
    std::vector<cplx> out(taps.size() + 1, cplx(0.0));
    for (std::size_t k = 0; k < taps.size(); ++k) {
      out[k] += a * taps[k];
      out[k + 1] += b * taps[k];
    }
    taps = std::move(out);
  };
  for (int k = 0; k < order; ++k) convolve(1.0, 1.0);

  if (order > 1) {
    Eigen::VectorXd poly(order);
    for (int k = 0; k < order; ++k) poly[k] = binomial(order - 1 + k, k);
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
    solver.compute(poly);
    for (const cplx& y : solver.roots()) {
      // z^2 - (2 - 4y) z + 1 = 0; the two roots are reciprocal.
      const cplx b = -(2.0 - 4.0 * y);
      const cplx disc = std::sqrt(b * b - 4.0);
      const cplx z1 = (-b + disc) / 2.0;
      const cplx z2 = (-b - disc) / 2.0;
      const cplx z = std::abs(z1) < std::abs(z2) ? z1 : z2;
      convolve(1.0, -z);
    }
  }

  WaveletFilter f;
  f.order = order;
  f.low_pass.resize(taps.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < taps.size(); ++k) {
    f.low_pass[k] = taps[k].real();
    sum += f.low_pass[k];
  }
  for (double& h : f.low_pass) h *= std::sqrt(2.0) / sum;
  const std::size_t n = f.low_pass.size();
  f.high_pass.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    f.high_pass[k] = (k % 2 == 0 ? 1.0 : -1.0) * f.low_pass[n - 1 - k];
  }
  return f;
}

}  // namespace detail

/// Daubechies minimum-phase filter with `order` vanishing moments (1 = Haar).
/// Results are computed once per order and cached; safe to call concurrently.
inline WaveletFilter daubechies_filter(int order) {
  if (order < kMinOrder || order > kMaxOrder) {
    fail(ErrorKind::invalid_argument, "daubechies_filter: order " + std::to_string(order) +
                                          " outside supported range [" + std::to_string(kMinOrder) +
                                          ", " + std::to_string(kMaxOrder) + "]");
  }
  static std::mutex mutex;
  static std::array<std::optional<WaveletFilter>, kMaxOrder + 1> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[static_cast<std::size_t>(order)];
  if (!slot) slot = detail::build_daubechies(order);
  return *slot;
}

}  // namespace wmr::wavelet
