// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wmr/core/array2d.hpp"
#include "wmr/core/error.hpp"
#include "wmr/phase_space/field.hpp"
#include "wmr/wavelet/transform.hpp"

namespace wmr::phase {

namespace detail {
inline void add_into(Grid2D& dst, const Grid2D& src) { dst += src; }
inline void add_into(std::vector<double>& dst, const std::vector<double>& src) {
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
}
}  // namespace detail

/// Slow part plus one component per dyadic detail level l in [cutoff, top_level).
/// Energies are sums of squared orthogonal coefficients, so
/// slow_energy + sum band_energy equals the squared sample norm.
template <class Part>
struct MultiscaleDecomposition {
  int cutoff = 0;
  int top_level = 0;
  Part slow_part;
  double slow_energy = 0.0;
  std::map<int, Part> band_parts;
  std::map<int, double> band_energy;

  double total_energy() const {
    double e = slow_energy;
    for (const auto& [l, v] : band_energy) e += v;
    return e;
  }

  Part reconstruct() const {
    Part out = slow_part;
    for (const auto& [l, part] : band_parts) detail::add_into(out, part);
    return out;
  }
};

using FieldDecomposition = MultiscaleDecomposition<Grid2D>;

/// Series decompositions live on the reflection-padded series; `original_length`
/// marks the prefix that holds the input samples.
struct SeriesDecomposition : MultiscaleDecomposition<std::vector<double>> {
  std::size_t original_length = 0;
};

/// Pads to the next power of two by half-sample symmetric reflection
/// (x0..x[n-1], x[n-1]..x0, x0..).
inline std::vector<double> reflect_pad_dyadic(std::span<const double> series) {
  require(!series.empty(), ErrorKind::invalid_argument, "reflect_pad_dyadic: empty series");
  const std::size_t n = series.size();
  std::size_t padded = 1;
  while (padded < n) padded <<= 1;
  std::vector<double> out(padded);
  for (std::size_t k = 0; k < padded; ++k) {
    const std::size_t m = k % (2 * n);
    out[k] = m < n ? series[m] : series[2 * n - 1 - m];
  }
  return out;
}

inline FieldDecomposition decompose_multiscale(const WignerField& field, const wavelet::WaveletFilter& filter,
                                               int cutoff) {
  const int top = wavelet::dyadic_level_of(field.values, "decompose_multiscale");
  require(cutoff >= 0 && cutoff <= top, ErrorKind::invalid_argument,
          "decompose_multiscale: cutoff " + std::to_string(cutoff) + " outside [0, " + std::to_string(top) + "]");
  FieldDecomposition out;
  out.cutoff = cutoff;
  out.top_level = top;
  if (cutoff == top) {
    out.slow_part = field.values;
    out.slow_energy = sum_squares(field.values.flat());
    return out;
  }
  const auto pyr = wavelet::dwt_2d(field.values, filter, top - cutoff);
  auto zeroed = pyr;
  for (auto& [key, band] : zeroed.bands) band *= 0.0;

  auto slow = zeroed;
  const wavelet::BandKey approx_key{cutoff, 0, wavelet::Direction::approx};
  slow.bands[approx_key] = pyr.bands.at(approx_key);
  out.slow_part = wavelet::inverse_dwt_2d(slow);
  out.slow_energy = sum_squares(pyr.bands.at(approx_key).flat());

  for (int l = cutoff; l < top; ++l) {
    auto only = zeroed;
    double e = 0.0;
    for (int c = 1; c < 4; ++c) {
      const wavelet::BandKey key{l, c, wavelet::direction_of_child(c)};
      only.bands[key] = pyr.bands.at(key);
      e += sum_squares(pyr.bands.at(key).flat());
    }
    out.band_parts[l] = wavelet::inverse_dwt_2d(only);
    out.band_energy[l] = e;
  }
  return out;
}

inline SeriesDecomposition decompose_multiscale(std::span<const double> series, const wavelet::WaveletFilter& filter,
                                                int cutoff) {
  const auto padded = reflect_pad_dyadic(series);
  const int top = log2_exact(padded.size());
  require(cutoff >= 0 && cutoff <= top, ErrorKind::invalid_argument,
          "decompose_multiscale: cutoff " + std::to_string(cutoff) + " outside [0, " + std::to_string(top) + "]");
  SeriesDecomposition out;
  out.cutoff = cutoff;
  out.top_level = top;
  out.original_length = series.size();
  const auto bands = wavelet::dwt_1d(padded, filter, top - cutoff);
  // bands[0] is the level-cutoff approximation; bands[b] the detail at level cutoff + b - 1.
  auto zeroed = bands;
  for (auto& b : zeroed) std::fill(b.begin(), b.end(), 0.0);

  auto slow = zeroed;
  slow[0] = bands[0];
  out.slow_part = wavelet::inverse_dwt_1d(slow, filter);
  out.slow_energy = sum_squares(bands[0]);
  for (std::size_t b = 1; b < bands.size(); ++b) {
    const int l = cutoff + static_cast<int>(b) - 1;
    auto only = zeroed;
    only[b] = bands[b];
    out.band_parts[l] = wavelet::inverse_dwt_1d(only, filter);
    out.band_energy[l] = sum_squares(bands[b]);
  }
  return out;
}

}  // namespace wmr::phase
