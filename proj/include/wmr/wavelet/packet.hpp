// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <span>
#include <vector>

#include "wmr/core/array2d.hpp"
#include "wmr/core/error.hpp"
#include "wmr/wavelet/transform.hpp"

namespace wmr::wavelet {

/// Normalized Shannon entropy -sum p_i ln p_i with p_i = c_i^2 / sum c^2 (natural log).
inline double shannon_entropy(std::span<const double> coefficients) {
  const double total = sum_squares(coefficients);
  require(total > 0.0, ErrorKind::invalid_argument, "shannon_entropy: all coefficients are zero");
  double h = 0.0;
  for (double c : coefficients) {
    const double p = c * c / total;
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

struct PacketNode {
  int depth = 0;
  int index = 0;
  auto operator<=>(const PacketNode&) const = default;
};

/// Quadtree over 2D packet bands; every leaf is a retained band.
struct BasisTree {
  int max_depth = 0;
  std::vector<PacketNode> leaves;
  double entropy_total = 0.0;

  /// True when the leaves cover the finest-depth index range [0, 4^max_depth) exactly once.
  bool tiles_exactly() const {
    const std::size_t cells = std::size_t{1} << (2 * max_depth);
    std::vector<int> hits(cells, 0);
    for (const auto& leaf : leaves) {
      if (leaf.depth < 0 || leaf.depth > max_depth) return false;
      const std::size_t span = std::size_t{1} << (2 * (max_depth - leaf.depth));
      const std::size_t first = static_cast<std::size_t>(leaf.index) * span;
      if (first + span > cells) return false;
      for (std::size_t k = first; k < first + span; ++k) ++hits[k];
    }
    return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
  }
};

/// Leaves of the standard (Mallat) wavelet tree with `levels` steps.
inline BasisTree standard_tree(int levels) {
  BasisTree t;
  t.max_depth = levels;
  for (int d = 1; d <= levels; ++d) {
    for (int c = 1; c < 4; ++c) t.leaves.push_back({d, c});
  }
  t.leaves.push_back({levels, 0});
  return t;
}

struct BestBasisResult {
  BasisTree tree;
  CoefficientPyramid coefficients;
};

namespace detail {

inline constexpr double kEntropyTieTolerance = 1e-12;

struct BestBasisSearch {
  const WaveletFilter& filter;
  int top_level;
  int max_depth;
  double total_energy;
  BestBasisResult* out;

  // Additive cost with the global normalization; summing it over a tiling gives the
  // Shannon entropy of the union of its coefficients.
  double cost(const Grid2D& band) const {
    double h = 0.0;
    for (double c : band.flat()) {
      const double p = c * c / total_energy;
      if (p > 0.0) h -= p * std::log(p);
    }
    return h;
  }

  // Returns the best cost below `node`; appends the chosen leaves and bands.
  double visit(const Grid2D& band, PacketNode node) {
    const double own = cost(band);
    if (node.depth == max_depth) {
      keep(band, node);
      return own;
    }
    auto children = split_2d(band, filter);
    BestBasisResult scratch;
    BestBasisResult* saved = out;
    out = &scratch;
    double below = 0.0;
    for (int c = 0; c < 4; ++c) below += visit(children[static_cast<std::size_t>(c)], {node.depth + 1, 4 * node.index + c});
    out = saved;
    if (below < own - kEntropyTieTolerance) {
      for (auto& leaf : scratch.tree.leaves) out->tree.leaves.push_back(leaf);
      for (auto& [key, b] : scratch.coefficients.bands) out->coefficients.bands[key] = std::move(b);
      return below;
    }
    keep(band, node);
    return own;
  }

  void keep(const Grid2D& band, PacketNode node) {
    out->tree.leaves.push_back(node);
    const Direction dir = node.depth == 0 ? Direction::approx : direction_of_child(node.index);
    out->coefficients.bands[{top_level - node.depth, node.index, dir}] = band;
  }
};

}  // namespace detail

/// Coifman-Wickerhauser bottom-up best-basis search over the 2D wavelet-packet quadtree.
/// Children replace their parent only when they lower the entropy by more than 1e-12.
inline BestBasisResult best_basis(const Grid2D& field, const WaveletFilter& filter, int max_depth) {
  const int top = dyadic_level_of(field, "best_basis");
  require(max_depth >= 0 && max_depth <= top, ErrorKind::invalid_argument,
          "best_basis: max_depth must lie in [0, " + std::to_string(top) + "]");
  const double energy = sum_squares(field.flat());
  require(energy > 0.0, ErrorKind::invalid_argument, "best_basis: field is identically zero");

  BestBasisResult result;
  result.tree.max_depth = max_depth;
  result.coefficients.top_level = top;
  result.coefficients.base_level = top - max_depth;
  result.coefficients.filter = filter;
  detail::BestBasisSearch search{filter, top, max_depth, energy, &result};
  result.tree.entropy_total = search.visit(field, {0, 0});
  std::sort(result.tree.leaves.begin(), result.tree.leaves.end());
  return result;
}

}  // namespace wmr::wavelet
