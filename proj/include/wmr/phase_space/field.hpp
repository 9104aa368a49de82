// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "wmr/core/array2d.hpp"
#include "wmr/core/error.hpp"

namespace wmr::phase {

inline constexpr int kMinGridLevel = 4;
inline constexpr int kMaxGridLevel = 12;

/// Periodic (q, p) box sampled on a 2^J x 2^J grid; sample (i, j) sits at
/// (q_min + i dq, p_min + j dp).
struct PhaseSpaceGrid {
  double q_min = -10.0;
  double q_max = 10.0;
  double p_min = -10.0;
  double p_max = 10.0;
  int level = 7;

  std::size_t size() const { return std::size_t{1} << level; }
  double dq() const { return (q_max - q_min) / static_cast<double>(size()); }
  double dp() const { return (p_max - p_min) / static_cast<double>(size()); }
  double cell_area() const { return dq() * dp(); }
  double q(std::size_t i) const { return q_min + static_cast<double>(i) * dq(); }
  double p(std::size_t j) const { return p_min + static_cast<double>(j) * dp(); }

  void validate() const {
    require(std::isfinite(q_min) && std::isfinite(q_max) && q_max > q_min, ErrorKind::invalid_argument,
            "grid: q_max must exceed q_min");
    require(std::isfinite(p_min) && std::isfinite(p_max) && p_max > p_min, ErrorKind::invalid_argument,
            "grid: p_max must exceed p_min");
    require(level >= kMinGridLevel && level <= kMaxGridLevel, ErrorKind::invalid_argument,
            "grid: level must lie in [" + std::to_string(kMinGridLevel) + ", " + std::to_string(kMaxGridLevel) + "]");
  }

  bool operator==(const PhaseSpaceGrid&) const = default;
};

/// hbar, mass, friction rate gamma and momentum diffusion D.
struct PhysicalParams {
  double hbar = 1.0;
  double mass = 1.0;
  double gamma = 0.0;
  double diffusion = 0.0;

  void validate() const {
    require(hbar > 0.0, ErrorKind::invalid_argument, "hbar must be > 0");
    require(mass > 0.0, ErrorKind::invalid_argument, "mass must be > 0");
    require(gamma >= 0.0, ErrorKind::invalid_argument, "gamma must be >= 0");
    require(diffusion >= 0.0, ErrorKind::invalid_argument, "diffusion must be >= 0");
  }

  bool operator==(const PhysicalParams&) const = default;
};

struct WignerField {
  PhaseSpaceGrid grid;
  Grid2D values;
  double time = 0.0;

  static WignerField zeros(const PhaseSpaceGrid& grid, double time = 0.0) {
    return {grid, Grid2D(grid.size(), grid.size(), 0.0), time};
  }
};

/// Riemann sum with cell weight dq dp.
inline double integrate(const PhaseSpaceGrid& grid, const Grid2D& values) {
  double s = 0.0;
  for (double v : values.flat()) s += v;
  return s * grid.cell_area();
}

inline double norm(const WignerField& w) { return integrate(w.grid, w.values); }

inline void normalize(WignerField& w) {
  const double mass = norm(w);
  require(mass != 0.0 && std::isfinite(mass), ErrorKind::invalid_argument, "cannot normalize a field with zero mass");
  w.values *= 1.0 / mass;
}

inline constexpr double kNormalizationTolerance = 1e-6;

inline bool is_normalized(const WignerField& w, double tolerance = kNormalizationTolerance) {
  return std::abs(norm(w) - 1.0) <= tolerance;
}

inline std::string describe(const PhaseSpaceGrid& g) {
  std::ostringstream os;
  os << "[" << g.q_min << ", " << g.q_max << "] x [" << g.p_min << ", " << g.p_max << "], J=" << g.level;
  return os.str();
}

}  // namespace wmr::phase
