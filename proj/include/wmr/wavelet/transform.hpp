// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <array>
#include <compare>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wmr/core/array2d.hpp"
#include "wmr/core/error.hpp"
#include "wmr/wavelet/filter.hpp"

namespace wmr::wavelet {

/// Orientation of a 2D band. `detail_p` is low-pass in q and high-pass in p.
enum class Direction { approx = 0, detail_p = 1, detail_q = 2, diagonal = 3 };

inline Direction direction_of_child(int child) { return static_cast<Direction>(child & 3); }

/// Band address. For a packet node at depth d below the field, level = J - d and the
/// index is the base-4 path from the root (child c of node i is 4i + c).
struct BandKey {
  int level = 0;
  int index = 0;
  Direction direction = Direction::approx;
  auto operator<=>(const BandKey&) const = default;
};

/// Orthogonal multiresolution coefficients of a 2^J x 2^J field.
struct CoefficientPyramid {
  int base_level = 0;
  int top_level = 0;
  WaveletFilter filter;
  std::map<BandKey, Grid2D> bands;

  std::size_t coefficient_count() const {
    std::size_t n = 0;
    for (const auto& [key, band] : bands) n += band.size();
    return n;
  }

  /// Coefficients concatenated in band-key order.
  std::vector<double> flatten() const {
    std::vector<double> out;
    out.reserve(coefficient_count());
    for (const auto& [key, band] : bands) out.insert(out.end(), band.flat().begin(), band.flat().end());
    return out;
  }

  void assign(std::span<const double> values) {
    require(values.size() == coefficient_count(), ErrorKind::invalid_argument,
            "CoefficientPyramid::assign: size mismatch");
    std::size_t k = 0;
    for (auto& [key, band] : bands) {
      for (double& v : band.flat()) v = values[k++];
    }
  }

  double energy() const {
    double e = 0.0;
    for (const auto& [key, band] : bands) e += sum_squares(band.flat());
    return e;
  }
};

namespace detail {

// One periodic analysis step on a strided sequence of even length n.
inline void analyze_1d(const WaveletFilter& f, const double* in, std::size_t n, std::size_t stride,
                       double* lo, double* hi, std::size_t out_stride) {
  const std::size_t half = n / 2;
  const std::size_t taps = f.length();
  for (std::size_t k = 0; k < half; ++k) {
    double a = 0.0;
    double d = 0.0;
    for (std::size_t t = 0; t < taps; ++t) {
      const double x = in[((2 * k + t) % n) * stride];
      a += f.low_pass[t] * x;
      d += f.high_pass[t] * x;
    }
    lo[k * out_stride] = a;
    hi[k * out_stride] = d;
  }
}

inline void synthesize_1d(const WaveletFilter& f, const double* lo, const double* hi, std::size_t half,
                          std::size_t in_stride, double* out, std::size_t stride) {
  const std::size_t n = 2 * half;
  const std::size_t taps = f.length();
  for (std::size_t m = 0; m < n; ++m) out[m * stride] = 0.0;
  for (std::size_t k = 0; k < half; ++k) {
    const double a = lo[k * in_stride];
    const double d = hi[k * in_stride];
    for (std::size_t t = 0; t < taps; ++t) {
      out[((2 * k + t) % n) * stride] += f.low_pass[t] * a + f.high_pass[t] * d;
    }
  }
}

}  // namespace detail

/// Single-level 1D periodic analysis: returns {approximation, detail}.
inline std::pair<std::vector<double>, std::vector<double>> dwt_step(std::span<const double> x,
                                                                    const WaveletFilter& f) {
  require(x.size() >= 2 && x.size() % 2 == 0, ErrorKind::invalid_argument, "dwt_step: length must be even");
  std::vector<double> lo(x.size() / 2);
  std::vector<double> hi(x.size() / 2);
  detail::analyze_1d(f, x.data(), x.size(), 1, lo.data(), hi.data(), 1);
  return {std::move(lo), std::move(hi)};
}

inline std::vector<double> idwt_step(std::span<const double> lo, std::span<const double> hi,
                                     const WaveletFilter& f) {
  std::vector<double> out(2 * lo.size());
  detail::synthesize_1d(f, lo.data(), hi.data(), lo.size(), 1, out.data(), 1);
  return out;
}

/// 2D single-level split into the four children LL, LH, HL, HH (child index order).
inline std::array<Grid2D, 4> split_2d(const Grid2D& in, const WaveletFilter& f) {
  const std::size_t n = in.rows();
  const std::size_t m = in.cols();
  const std::size_t hn = n / 2;
  const std::size_t hm = m / 2;
  // Along q (rows) first.
  Grid2D lo_q(hn, m);
  Grid2D hi_q(hn, m);
  for (std::size_t j = 0; j < m; ++j) {
    detail::analyze_1d(f, in.flat().data() + j, n, m, lo_q.flat().data() + j, hi_q.flat().data() + j, m);
  }
  std::array<Grid2D, 4> out{Grid2D(hn, hm), Grid2D(hn, hm), Grid2D(hn, hm), Grid2D(hn, hm)};
  for (std::size_t i = 0; i < hn; ++i) {
    detail::analyze_1d(f, lo_q.row(i).data(), m, 1, out[0].row(i).data(), out[1].row(i).data(), 1);
    detail::analyze_1d(f, hi_q.row(i).data(), m, 1, out[2].row(i).data(), out[3].row(i).data(), 1);
  }
  return out;
}

inline Grid2D merge_2d(const Grid2D& ll, const Grid2D& lh, const Grid2D& hl, const Grid2D& hh,
                       const WaveletFilter& f) {
  const std::size_t hn = ll.rows();
  const std::size_t hm = ll.cols();
  Grid2D lo_q(hn, 2 * hm);
  Grid2D hi_q(hn, 2 * hm);
  for (std::size_t i = 0; i < hn; ++i) {
    detail::synthesize_1d(f, ll.row(i).data(), lh.row(i).data(), hm, 1, lo_q.row(i).data(), 1);
    detail::synthesize_1d(f, hl.row(i).data(), hh.row(i).data(), hm, 1, hi_q.row(i).data(), 1);
  }
  const std::size_t m = 2 * hm;
  Grid2D out(2 * hn, m);
  for (std::size_t j = 0; j < m; ++j) {
    detail::synthesize_1d(f, lo_q.flat().data() + j, hi_q.flat().data() + j, hn, m, out.flat().data() + j, m);
  }
  return out;
}

inline int dyadic_level_of(const Grid2D& field, const char* who) {
  if (field.rows() != field.cols() || !is_power_of_two(field.rows()) || field.rows() < 2) {
    fail(ErrorKind::invalid_argument, std::string(who) + ": field must be 2^J x 2^J with J >= 1, got " +
                                          std::to_string(field.rows()) + " x " + std::to_string(field.cols()));
  }
  return log2_exact(field.rows());
}

/// Periodic orthogonal 2D wavelet transform with `levels` decomposition steps.
inline CoefficientPyramid dwt_2d(const Grid2D& field, const WaveletFilter& filter, int levels) {
  const int top = dyadic_level_of(field, "dwt_2d");
  require(levels >= 1 && levels <= top, ErrorKind::invalid_argument,
          "dwt_2d: levels must lie in [1, " + std::to_string(top) + "]");
  CoefficientPyramid pyr;
  pyr.top_level = top;
  pyr.base_level = top - levels;
  pyr.filter = filter;
  Grid2D approx = field;
  for (int d = 1; d <= levels; ++d) {
    auto parts = split_2d(approx, filter);
    const int level = top - d;
    for (int c = 1; c < 4; ++c) pyr.bands[{level, c, direction_of_child(c)}] = std::move(parts[static_cast<std::size_t>(c)]);
    approx = std::move(parts[0]);
  }
  pyr.bands[{pyr.base_level, 0, Direction::approx}] = std::move(approx);
  return pyr;
}

namespace detail {

inline Grid2D reconstruct_node(const CoefficientPyramid& pyr, int depth, int index) {
  const int level = pyr.top_level - depth;
  const Direction dir = depth == 0 ? Direction::approx : direction_of_child(index);
  if (auto it = pyr.bands.find({level, index, dir}); it != pyr.bands.end()) return it->second;
  require(level > pyr.base_level, ErrorKind::invalid_argument,
          "inverse transform: band (level " + std::to_string(level) + ", index " + std::to_string(index) +
              ") missing from pyramid");
  return merge_2d(reconstruct_node(pyr, depth + 1, 4 * index + 0), reconstruct_node(pyr, depth + 1, 4 * index + 1),
                  reconstruct_node(pyr, depth + 1, 4 * index + 2), reconstruct_node(pyr, depth + 1, 4 * index + 3),
                  pyr.filter);
}

}  // namespace detail

/// Inverse of dwt_2d. Also reconstructs packet pyramids whose bands form any admissible
/// quadtree tiling.
inline Grid2D inverse_dwt_2d(const CoefficientPyramid& pyramid) { return detail::reconstruct_node(pyramid, 0, 0); }

/// 1D multilevel periodic transform: element 0 holds the coarsest approximation, then
/// details from coarse to fine.
inline std::vector<std::vector<double>> dwt_1d(std::span<const double> x, const WaveletFilter& f, int levels) {
  require(is_power_of_two(x.size()), ErrorKind::invalid_argument, "dwt_1d: length must be a power of two");
  require(levels >= 0 && (std::size_t{1} << levels) <= x.size(), ErrorKind::invalid_argument,
          "dwt_1d: too many levels for signal length");
  std::vector<std::vector<double>> details;
  std::vector<double> approx(x.begin(), x.end());
  for (int d = 0; d < levels; ++d) {
    auto [lo, hi] = dwt_step(approx, f);
    details.push_back(std::move(hi));
    approx = std::move(lo);
  }
  std::vector<std::vector<double>> out;
  out.push_back(std::move(approx));
  for (auto it = details.rbegin(); it != details.rend(); ++it) out.push_back(std::move(*it));
  return out;
}

inline std::vector<double> inverse_dwt_1d(const std::vector<std::vector<double>>& bands, const WaveletFilter& f) {
  std::vector<double> approx = bands.front();
  for (std::size_t b = 1; b < bands.size(); ++b) approx = idwt_step(approx, bands[b], f);
  return approx;
}

}  // namespace wmr::wavelet
