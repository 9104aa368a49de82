// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "wmr/core/error.hpp"
#include "wmr/core/polynomial.hpp"

namespace wmr::phase {

inline constexpr int kMaxHamiltonianDegree = 10;

/// c q^i p^j
struct MixedTerm {
  double coefficient = 0.0;
  int q_power = 0;
  int p_power = 0;
  bool operator==(const MixedTerm&) const = default;
};

/// Scale factor applied to the potential at time t (linear interpolation, clamped).
struct TimeSample {
  double time = 0.0;
  double factor = 1.0;
  bool operator==(const TimeSample&) const = default;
};

/// H(q, p, t) = p^2 / 2m + s(t) U(q) + sum c q^i p^j. The kinetic term comes from the mass.
struct PolynomialHamiltonian {
  Polynomial potential;
  std::vector<MixedTerm> mixed_terms;
  std::vector<TimeSample> time_table;

  bool time_dependent() const { return !time_table.empty(); }

  double potential_scale(double t) const {
    if (time_table.empty()) return 1.0;
    if (t <= time_table.front().time) return time_table.front().factor;
    if (t >= time_table.back().time) return time_table.back().factor;
    auto hi = std::upper_bound(time_table.begin(), time_table.end(), t,
                               [](double v, const TimeSample& s) { return v < s.time; });
    auto lo = hi - 1;
    const double w = (t - lo->time) / (hi->time - lo->time);
    return (1.0 - w) * lo->factor + w * hi->factor;
  }

  /// Largest total degree over kinetic, potential and mixed monomials.
  int total_degree() const {
    int d = std::max(2, potential.degree());
    for (const auto& m : mixed_terms) {
      if (m.coefficient != 0.0) d = std::max(d, m.q_power + m.p_power);
    }
    return d;
  }

  double value(double q, double p, double mass, double t = 0.0) const {
    double h = p * p / (2.0 * mass) + potential_scale(t) * potential(q);
    for (const auto& m : mixed_terms) h += m.coefficient * std::pow(q, m.q_power) * std::pow(p, m.p_power);
    return h;
  }

  void validate() const {
    require(potential.degree() <= kMaxHamiltonianDegree, ErrorKind::invalid_argument,
            "hamiltonian: potential degree " + std::to_string(potential.degree()) + " exceeds " +
                std::to_string(kMaxHamiltonianDegree));
    for (const auto& m : mixed_terms) {
      require(m.q_power >= 0 && m.p_power >= 0, ErrorKind::invalid_argument, "hamiltonian: negative monomial power");
      require(m.q_power + m.p_power <= kMaxHamiltonianDegree, ErrorKind::invalid_argument,
              "hamiltonian: mixed term degree " + std::to_string(m.q_power + m.p_power) + " exceeds " +
                  std::to_string(kMaxHamiltonianDegree));
    }
    for (std::size_t k = 1; k < time_table.size(); ++k) {
      require(time_table[k].time > time_table[k - 1].time, ErrorKind::invalid_argument,
              "hamiltonian: time_table stamps must strictly increase");
    }
  }

  bool operator==(const PolynomialHamiltonian&) const = default;
};

/// U(q) = 0.5 m omega^2 q^2.
inline PolynomialHamiltonian harmonic_hamiltonian(double mass = 1.0, double omega = 1.0) {
  return {Polynomial({0.0, 0.0, 0.5 * mass * omega * omega}), {}, {}};
}

}  // namespace wmr::phase
