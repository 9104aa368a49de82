// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "wmr/core/error.hpp"
#include "wmr/wavelet/transform.hpp"

namespace wmr::solver {

struct CompressionResult {
  wavelet::CoefficientPyramid pyramid;
  std::size_t kept = 0;
  std::size_t total = 0;
  double kept_fraction = 1.0;
  double relative_error = 0.0;  ///< ||dropped|| / ||c||, equal to the reconstruction error by orthogonality
};

/// Zeroes every coefficient with |c| < eps * max|c|.
inline CompressionResult threshold_compress(const wavelet::CoefficientPyramid& pyramid, double eps) {
  require(eps >= 0.0 && std::isfinite(eps), ErrorKind::invalid_argument, "threshold_compress: eps must be >= 0");
  CompressionResult out;
  out.pyramid = pyramid;
  double cmax = 0.0;
  double energy = 0.0;
  for (const auto& [key, band] : pyramid.bands) {
    for (double c : band.flat()) {
      cmax = std::max(cmax, std::abs(c));
      energy += c * c;
    }
  }
  const double cut = eps * cmax;
  double dropped = 0.0;
  for (auto& [key, band] : out.pyramid.bands) {
    for (double& c : band.flat()) {
      ++out.total;
      if (std::abs(c) < cut) {
        dropped += c * c;
        c = 0.0;
      } else {
        ++out.kept;
      }
    }
  }
  out.kept_fraction = out.total == 0 ? 1.0 : static_cast<double>(out.kept) / static_cast<double>(out.total);
  out.relative_error = energy > 0.0 ? std::sqrt(dropped / energy) : 0.0;
  // Each dropped |c| < eps max|c| <= eps ||c||, hence the bound below.
  require(out.relative_error <= eps * std::sqrt(static_cast<double>(out.total)) + 1e-15, ErrorKind::precondition,
          "threshold_compress: error bound violated");
  return out;
}

}  // namespace wmr::solver
