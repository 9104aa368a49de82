// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "wmr/core/array2d.hpp"
#include "wmr/moyal/galerkin.hpp"

namespace wmr::solver {

/// Real-axis/imaginary-axis extent of the classical RK4 stability region used for dt.
inline constexpr double kRk4StabilityExtent = 2.7;
inline constexpr double kStabilitySafety = 0.8;
inline constexpr int kPowerIterations = 500;

struct StabilityEstimate {
  double dt_max = std::numeric_limits<double>::infinity();
  double spectral_radius = 0.0;
  int iterations = 0;
  bool converged = true;  ///< false: spectral_radius is a lower bound
};

using LinearMap = std::function<void(std::span<const double>, std::span<double>)>;

/// Power iteration on L^2, so conjugate pairs on the imaginary axis (rotation) converge
/// like a single real eigenvalue. rho = sqrt(||L^2 x|| / ||x||) at convergence;
/// dt_max = 0.8 * 2.7 / rho, +infinity for the zero map.
inline StabilityEstimate stability_estimate(const LinearMap& apply, std::size_t dimension, std::uint64_t seed = 0) {
  StabilityEstimate out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> x(dimension);
  std::vector<double> y(dimension);
  std::vector<double> z(dimension);
  for (double& v : x) v = dist(rng);
  double nx = l2_norm(x);
  if (nx == 0.0) return out;
  for (double& v : x) v /= nx;

  double rho = 0.0;
  double running_max = 0.0;
  out.converged = false;
  for (int it = 1; it <= kPowerIterations; ++it) {
    apply(x, y);
    apply(y, z);
    const double nz = l2_norm(z);
    out.iterations = it;
    if (nz == 0.0) {
      // L^2 x = 0 for a generic x: treat as the zero map.
      const double ny = l2_norm(y);
      if (ny == 0.0) {
        out.spectral_radius = 0.0;
        out.converged = true;
        return out;
      }
      rho = ny;
      out.converged = true;
      break;
    }
    const double next = std::sqrt(nz);
    running_max = std::max(running_max, next);
    const bool settled = it > 5 && std::abs(next - rho) <= 1e-4 * next;
    rho = next;
    for (std::size_t k = 0; k < dimension; ++k) x[k] = z[k] / nz;
    if (settled) {
      out.converged = true;
      break;
    }
  }
  out.spectral_radius = out.converged ? rho : running_max;
  out.dt_max = out.spectral_radius > 0.0 ? kStabilitySafety * kRk4StabilityExtent / out.spectral_radius
                                         : std::numeric_limits<double>::infinity();
  return out;
}

inline StabilityEstimate stability_estimate(const moyal::GalerkinOperator& op, double t = 0.0, std::uint64_t seed = 0) {
  if (op.nonzeros() == 0) return {};
  return stability_estimate([&](std::span<const double> in, std::span<double> out) { op.apply(in, out, t); },
                            op.dimension(), seed);
}

}  // namespace wmr::solver
