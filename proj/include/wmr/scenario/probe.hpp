// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "wmr/core/error.hpp"
#include "wmr/phase_space/field.hpp"

namespace wmr::scenario {

struct FringeDecay {
  double rate = 0.0;            ///< fitted decay rate of the fringe amplitude
  double reference_rate = 0.0;  ///< 4 D q0^2 / hbar^2
  std::vector<double> times;
  std::vector<double> amplitudes;  ///< usable points only
};

/// Amplitude of the cat-state interference term: the Fourier component of W(q = 0, p)
/// at p-frequency k = 2 q0 / hbar, i.e. sum_j W(0, p_j) cos(k p_j) dp. The lobes at
/// q = +-q0 contribute at order exp(-q0^2 / sigma^2) and are ignored.
inline double fringe_amplitude(const phase::WignerField& w, double q0, double hbar) {
  const auto& g = w.grid;
  const std::size_t n = g.size();
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(g.q(i)) < std::abs(g.q(i0))) i0 = i;
  }
  const double k = 2.0 * q0 / hbar;
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += w.values(i0, j) * std::cos(k * g.p(j));
  return s * g.dp();
}

/// Least-squares slope of log|amplitude| against time, negated. Points whose amplitude is
/// non-finite or below 1e-12 of the first are unusable; fewer than 4 usable points raise
/// insufficient_data.
inline FringeDecay fringe_decay_probe(std::span<const phase::WignerField> snapshots, double q0,
                                      const phase::PhysicalParams& params) {
  require(params.hbar > 0.0, ErrorKind::invalid_argument, "fringe_decay_probe: hbar must be > 0");
  FringeDecay out;
  out.reference_rate = 4.0 * params.diffusion * q0 * q0 / (params.hbar * params.hbar);
  double first = 0.0;
  for (const auto& w : snapshots) {
    const double a = std::abs(fringe_amplitude(w, q0, params.hbar));
    if (out.amplitudes.empty()) first = a;
    if (!std::isfinite(a) || a <= 0.0 || a < 1e-12 * first) continue;
    out.times.push_back(w.time);
    out.amplitudes.push_back(a);
  }
  require(out.amplitudes.size() >= 4, ErrorKind::insufficient_data,
          "fringe_decay_probe: need at least 4 usable snapshots, found " + std::to_string(out.amplitudes.size()));
  const double m = static_cast<double>(out.times.size());
  double st = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < out.times.size(); ++k) {
    st += out.times[k];
    sy += std::log(out.amplitudes[k]);
  }
  const double tbar = st / m;
  const double ybar = sy / m;
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < out.times.size(); ++k) {
    const double dt = out.times[k] - tbar;
    num += dt * (std::log(out.amplitudes[k]) - ybar);
    den += dt * dt;
  }
  require(den > 0.0, ErrorKind::insufficient_data, "fringe_decay_probe: snapshots share a single time stamp");
  out.rate = -num / den;
  return out;
}

}  // namespace wmr::scenario
