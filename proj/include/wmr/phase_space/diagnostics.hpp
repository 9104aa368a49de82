// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wmr/phase_space/field.hpp"
#include "wmr/phase_space/hamiltonian.hpp"
#include "wmr/wavelet/packet.hpp"
#include "wmr/wavelet/transform.hpp"

namespace wmr::phase {

/// 2 pi hbar int W^2 dq dp.
inline double purity(const WignerField& w, const PhysicalParams& params) {
  return 2.0 * std::numbers::pi * params.hbar * sum_squares(w.values.flat()) * w.grid.cell_area();
}

/// int |W| - int W, i.e. twice the negative mass; equals int |W| - 1 for a normalized field.
inline double negativity_volume(const WignerField& w) {
  double negative = 0.0;
  for (double v : w.values.flat()) {
    if (v < 0.0) negative -= v;
  }
  return 2.0 * negative * w.grid.cell_area();
}

struct Marginals {
  std::vector<double> position;  ///< int W dp at each q_i
  std::vector<double> momentum;  ///< int W dq at each p_j
};

inline Marginals marginals(const WignerField& w) {
  const std::size_t n = w.grid.size();
  Marginals m{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m.position[i] += w.values(i, j);
      m.momentum[j] += w.values(i, j);
    }
  }
  for (double& v : m.position) v *= w.grid.dp();
  for (double& v : m.momentum) v *= w.grid.dq();
  return m;
}

/// int H W dq dp
inline double energy(const WignerField& w, const PolynomialHamiltonian& h, const PhysicalParams& params) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.grid.size(); ++i) {
    for (std::size_t j = 0; j < w.grid.size(); ++j) {
      acc += h.value(w.grid.q(i), w.grid.p(j), params.mass, w.time) * w.values(i, j);
    }
  }
  return acc * w.grid.cell_area();
}

inline constexpr double kDefaultSparsityThreshold = 1e-6;

struct CoefficientStatistics {
  double entropy = 0.0;
  double sparsity = 0.0;  ///< fraction of coefficients with c^2 >= threshold * sum c^2
};

inline CoefficientStatistics coefficient_statistics(std::span<const double> coefficients,
                                                    double threshold = kDefaultSparsityThreshold) {
  CoefficientStatistics s;
  const double total = sum_squares(coefficients);
  if (total <= 0.0 || coefficients.empty()) return s;
  s.entropy = wavelet::shannon_entropy(coefficients);
  std::size_t kept = 0;
  for (double c : coefficients) {
    if (c * c >= threshold * total) ++kept;
  }
  s.sparsity = static_cast<double>(kept) / static_cast<double>(coefficients.size());
  return s;
}

inline CoefficientStatistics coefficient_statistics(const WignerField& w, const wavelet::WaveletFilter& filter,
                                                    int depth, double threshold = kDefaultSparsityThreshold) {
  const auto pyr = wavelet::dwt_2d(w.values, filter, std::clamp(depth, 1, w.grid.level));
  return coefficient_statistics(pyr.flatten(), threshold);
}

enum class Regime { localized, entangled_like, chaotic_like, waveleton, unclassified };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::localized: return "localized";
    case Regime::entangled_like: return "entangled_like";
    case Regime::chaotic_like: return "chaotic_like";
    case Regime::waveleton: return "waveleton";
    case Regime::unclassified: return "unclassified";
  }
  return "unclassified";
}

inline std::optional<Regime> regime_from_string(std::string_view s) {
  for (Regime r : {Regime::localized, Regime::entangled_like, Regime::chaotic_like, Regime::waveleton,
                   Regime::unclassified}) {
    if (s == to_string(r)) return r;
  }
  return std::nullopt;
}

/// Diagnostics at one time point. `change_rate` is ||W(t) - W(t')|| / (||W(t)|| (t - t')) against
/// the previous record (infinity when unknown).
struct DiagnosticsRecord {
  double time = 0.0;
  double norm = 0.0;
  double purity = 0.0;
  double negativity_volume = 0.0;
  double shannon_entropy = 0.0;
  double sparsity = 0.0;
  double energy = 0.0;
  Regime regime = Regime::unclassified;
  double change_rate = std::numeric_limits<double>::infinity();
};

inline constexpr const char* kDiagnosticsCsvHeader =
    "time,norm,purity,negativity_volume,shannon_entropy,sparsity,energy,regime,change_rate";

inline void write_csv_row(std::ostream& os, const DiagnosticsRecord& r) {
  const auto old = os.precision(17);
  os << r.time << ',' << r.norm << ',' << r.purity << ',' << r.negativity_volume << ',' << r.shannon_entropy << ','
     << r.sparsity << ',' << r.energy << ',' << to_string(r.regime) << ',' << r.change_rate << '\n';
  os.precision(old);
}

/// Thresholds for the rule-based regime labels.
struct ClassifierConfig {
  double negativity_threshold = 0.02;   // eps_neg
  double localized_sparsity = 0.05;     // s_loc
  double chaotic_sparsity = 0.30;       // s_chaos
  double chaotic_entropy = 4.0;         // nats
  double stationarity_rate = 1e-4;      // eps_stat, relative L2 change per unit time
  std::size_t stationarity_window = 10;
  double sparsity_threshold = kDefaultSparsityThreshold;

  bool operator==(const ClassifierConfig&) const = default;
};

/// Rule-based label. `history` holds earlier records, oldest first; the stationarity
/// window counts `record` itself. Without a full window the waveleton rule is skipped.
inline Regime classify_state(const DiagnosticsRecord& record, std::span<const DiagnosticsRecord> history,
                             const ClassifierConfig& cfg = {}) {
  const bool negative = record.negativity_volume > cfg.negativity_threshold;
  if (negative) return Regime::entangled_like;
  const bool sparse = record.sparsity <= cfg.localized_sparsity;
  if (sparse && cfg.stationarity_window > 0 && history.size() + 1 >= cfg.stationarity_window) {
    bool stationary = record.change_rate <= cfg.stationarity_rate;
    const std::size_t needed = cfg.stationarity_window - 1;
    for (std::size_t k = history.size() - needed; stationary && k < history.size(); ++k) {
      stationary = history[k].change_rate <= cfg.stationarity_rate;
    }
    if (stationary) return Regime::waveleton;
  }
  if (sparse) return Regime::localized;
  if (record.sparsity > cfg.chaotic_sparsity && record.shannon_entropy > cfg.chaotic_entropy) return Regime::chaotic_like;
  return Regime::unclassified;
}

/// Every diagnostic except the regime label.
inline DiagnosticsRecord measure(const WignerField& w, const PolynomialHamiltonian& h, const PhysicalParams& params,
                                 const wavelet::WaveletFilter& filter, int depth,
                                 double sparsity_threshold = kDefaultSparsityThreshold) {
  DiagnosticsRecord r;
  r.time = w.time;
  r.norm = norm(w);
  r.purity = purity(w, params);
  r.negativity_volume = negativity_volume(w);
  const auto stats = coefficient_statistics(w, filter, depth, sparsity_threshold);
  r.shannon_entropy = stats.entropy;
  r.sparsity = stats.sparsity;
  r.energy = energy(w, h, params);
  return r;
}

}  // namespace wmr::phase
