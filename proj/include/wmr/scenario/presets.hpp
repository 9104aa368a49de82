// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wmr/core/error.hpp"
#include "wmr/scenario/config.hpp"

namespace wmr::scenario {

struct Preset {
  std::string_view name;
  std::string_view summary;
  std::string_view text;  ///< config text accepted by parse_config
};

inline constexpr std::string_view kHarmonicCoherent = R"(# Coherent state rotating in a harmonic well; closed unitary dynamics.
name = harmonic-coherent
mode = evolve
grid.level = 7
hamiltonian.potential = [0, 0, 0.5]
initial.kind = coherent
initial.q0 = 2
initial.p0 = 0
initial.sigma = 1
terms.friction = false
terms.diffusion = false
schedule.t_final = 6.283185307179586
schedule.record_every = 10
schedule.snapshot_every = 100
wavelet.order = 3
output.dir = harmonic-coherent
)";

inline constexpr std::string_view kCatDecoherence = R"(# Two-lobe cat state in a harmonic well losing its fringes to the environment.
name = cat-decoherence
mode = evolve
grid.level = 7
physics.gamma = 0.05
physics.diffusion = 0.1
hamiltonian.potential = [0, 0, 0.5]
initial.kind = cat
initial.q0 = 3
initial.sigma = 1
schedule.t_final = 6.283185307179586
schedule.record_every = 10
schedule.snapshot_every = 50
wavelet.order = 3
output.dir = cat-decoherence
)";

// hbar = 0.1 keeps the zero-point energy below the barrier so the stationary state is
// bimodal and nonnegative; D8 is needed for the third-order quantum term.
inline constexpr std::string_view kDoublewellWaveleton = R"(# Stationary state of a damped quartic double well.
name = doublewell-waveleton
mode = steady_state
grid.q_min = -4
grid.q_max = 4
grid.p_min = -4
grid.p_max = 4
grid.level = 7
physics.hbar = 0.1
physics.gamma = 0.1
physics.diffusion = 0.05
hamiltonian.potential = [0, 0, -0.5, 0, 0.25]
initial.kind = coherent
initial.q0 = 1
initial.sigma = 0.5
steady.tolerance = 1e-8
steady.verify_steps = 100
schedule.record_every = 10
wavelet.order = 4
output.dir = doublewell-waveleton
)";

inline std::span<const Preset> presets() {
  static const Preset table[] = {
      {"harmonic-coherent", "coherent state at (2, 0) rotating for one period, no environment", kHarmonicCoherent},
      {"cat-decoherence", "cat state q0 = 3 with gamma = 0.05, D = 0.1 over one period", kCatDecoherence},
      {"doublewell-waveleton", "steady state of the quartic double well, hbar = 0.1, gamma = 0.1, D = 0.05",
       kDoublewellWaveleton},
  };
  return table;
}

inline const Preset& find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  std::string known;
  for (const auto& p : presets()) known += (known.empty() ? "" : ", ") + std::string(p.name);
  throw ConfigError({"unknown preset '" + std::string(name) + "' (known: " + known + ")"});
}

inline Scenario load_preset(std::string_view name, const std::vector<std::string>& overrides = {}) {
  return parse_config(find_preset(name).text, overrides);
}

}  // namespace wmr::scenario
