// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "wmr/core/error.hpp"
#include "wmr/wavelet/filter.hpp"

namespace wmr::wavelet {

inline constexpr double kCascadeTolerance = 1e-8;
inline constexpr int kCascadeMaxIterations = 30;

/// Scaling function sampled on the dyadic points j / 2^level of [0, 2N-1].
struct ScalingSamples {
  int level = 0;
  std::vector<double> values;
  double residual = 0.0;  ///< max |phi(x) - sqrt2 sum_k h_k phi(2x-k)| over the samples
  int iterations = 0;

  double spacing() const { return std::ldexp(1.0, -level); }
  std::size_t per_unit() const { return std::size_t{1} << level; }
  /// phi at j / 2^level, zero outside the support.
  double at(long j) const {
    if (j < 0 || j >= static_cast<long>(values.size())) return 0.0;
    return values[static_cast<std::size_t>(j)];
  }
};

namespace detail {

// phi(j) = sqrt2 sum_k h_k phi(2j - k) restricted to the integers 0..2N-1.
inline std::vector<double> integer_refinement(const WaveletFilter& filter, const std::vector<double>& v) {
  const long n = static_cast<long>(v.size());
  std::vector<double> out(v.size(), 0.0);
  for (long j = 0; j < n; ++j) {
    double acc = 0.0;
    for (long k = 0; k < static_cast<long>(filter.length()); ++k) {
      const long idx = 2 * j - k;
      if (idx >= 0 && idx < n) acc += filter.low_pass[static_cast<std::size_t>(k)] * v[static_cast<std::size_t>(idx)];
    }
    out[static_cast<std::size_t>(j)] = std::sqrt(2.0) * acc;
  }
  return out;
}

}  // namespace detail

/// Cascade evaluation of the scaling function. Integer-node values come from power
/// iteration of the refinement relation until the
/// update falls below 1e-8 or 30 sweeps; finer dyadic levels are then filled one level
/// at a time from the two-scale relation. Samples are normalized so sum_k phi(k) = 1.
inline ScalingSamples cascade_evaluate(const WaveletFilter& filter, int refinement_level) {
  require(refinement_level >= 1, ErrorKind::invalid_argument,
          "cascade_evaluate: refinement_level must be >= 1");
  const int width = filter.support_width();

  // For N >= 2 phi vanishes at both ends of its support, so the start is a unit impulse
  // at the first interior node; the end nodes decouple from the interior iteration.
  std::vector<double> nodes(static_cast<std::size_t>(width) + 1, 0.0);
  nodes[filter.order > 1 ? 1 : 0] = 1.0;
  ScalingSamples s;
  s.level = refinement_level;
  for (int it = 0; it < kCascadeMaxIterations; ++it) {
    auto next = detail::integer_refinement(filter, nodes);
    double total = 0.0;
    for (double v : next) total += v;
    double change = 0.0;
    for (std::size_t j = 0; j < next.size(); ++j) {
      next[j] /= total;
      change = std::max(change, std::abs(next[j] - nodes[j]));
    }
    nodes.swap(next);
    s.iterations = it + 1;
    if (change < kCascadeTolerance) break;
  }

  const long unit = 1L << refinement_level;
  const std::size_t n = static_cast<std::size_t>(width * unit + 1);
  s.values.assign(n, 0.0);
  for (int j = 0; j <= width; ++j) s.values[static_cast<std::size_t>(j * unit)] = nodes[static_cast<std::size_t>(j)];
  const double root2 = std::sqrt(2.0);
  for (int lvl = 1; lvl <= refinement_level; ++lvl) {
    // New points at level lvl sit at odd multiples of stride; their images 2x-k lie on level lvl-1.
    const long stride = unit >> lvl;
    for (long j = stride; j < static_cast<long>(n); j += 2 * stride) {
      double acc = 0.0;
      for (std::size_t k = 0; k < filter.length(); ++k) {
        const long idx = 2 * j - static_cast<long>(k) * unit;
        if (idx >= 0 && idx < static_cast<long>(n)) acc += filter.low_pass[k] * s.values[static_cast<std::size_t>(idx)];
      }
      s.values[static_cast<std::size_t>(j)] = root2 * acc;
    }
  }

  s.residual = 0.0;
  for (long j = 0; j < static_cast<long>(n); ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < filter.length(); ++k) {
      const long idx = 2 * j - static_cast<long>(k) * unit;
      if (idx >= 0 && idx < static_cast<long>(n)) acc += filter.low_pass[k] * s.values[static_cast<std::size_t>(idx)];
    }
    s.residual = std::max(s.residual, std::abs(root2 * acc - s.values[static_cast<std::size_t>(j)]));
  }
  return s;
}

}  // namespace wmr::wavelet
