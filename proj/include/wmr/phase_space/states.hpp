// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <span>
#include <vector>

#include "wmr/core/error.hpp"
#include "wmr/phase_space/field.hpp"

namespace wmr::phase {

using Wavefunction = std::vector<std::complex<double>>;

inline constexpr double kMarginWidths = 4.0;

/// Throws domain_too_small unless (q0, p0) sits 4 sigma inside the q range and
/// 4 hbar / (2 sigma) inside the p range.
inline void check_margins(const PhaseSpaceGrid& grid, double q0, double p0, double sigma, double hbar) {
  require(sigma > 0.0, ErrorKind::invalid_argument, "sigma must be > 0");
  const double mq = kMarginWidths * sigma;
  const double mp = kMarginWidths * hbar / (2.0 * sigma);
  const bool ok = q0 - mq >= grid.q_min && q0 + mq <= grid.q_max && p0 - mp >= grid.p_min && p0 + mp <= grid.p_max;
  if (!ok) {
    std::ostringstream os;
    os << "state at (q0=" << q0 << ", p0=" << p0 << ", sigma=" << sigma << ") needs a box covering ["
       << q0 - mq << ", " << q0 + mq << "] x [" << p0 - mp << ", " << p0 + mp << "]; grid is " << describe(grid);
    fail(ErrorKind::domain_too_small, os.str());
  }
}

/// W = exp(-(q-q0)^2/sigma^2 - sigma^2 (p-p0)^2 / hbar^2) / (pi hbar), rescaled so the grid
/// quadrature is exactly 1.
inline WignerField gaussian_coherent_state(const PhaseSpaceGrid& grid, double q0, double p0, double sigma,
                                           const PhysicalParams& params) {
  grid.validate();
  check_margins(grid, q0, p0, sigma, params.hbar);
  WignerField w = WignerField::zeros(grid);
  const double hb = params.hbar;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double xq = (grid.q(i) - q0) / sigma;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double xp = sigma * (grid.p(j) - p0) / hb;
      w.values(i, j) = std::exp(-xq * xq - xp * xp) / (std::numbers::pi * hb);
    }
  }
  normalize(w);
  return w;
}

/// (pi sigma^2)^(-1/4) exp(-(q-q0)^2 / (2 sigma^2) + i p0 q / hbar) on the q grid.
inline Wavefunction gaussian_wavefunction(const PhaseSpaceGrid& grid, double q0, double sigma, double p0 = 0.0,
                                          double hbar = 1.0) {
  Wavefunction psi(grid.size());
  const double amp = std::pow(std::numbers::pi * sigma * sigma, -0.25);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = (grid.q(i) - q0) / sigma;
    psi[i] = amp * std::exp(-0.5 * x * x) * std::polar(1.0, p0 * grid.q(i) / hbar);
  }
  return psi;
}

inline double wavefunction_norm(std::span<const std::complex<double>> psi, const PhaseSpaceGrid& grid) {
  double s = 0.0;
  for (const auto& v : psi) s += std::norm(v);
  return s * grid.dq();
}

inline constexpr double kImaginaryResidueTolerance = 1e-10;

/// W(q,p) = (1/(pi hbar)) int psi*(q+y) psi(q-y) exp(2ipy/hbar) dy. The y integral runs over
/// the largest symmetric window inside the grid (trapezoid rule, psi zero outside).
inline WignerField wigner_from_wavefunction(std::span<const std::complex<double>> psi, const PhaseSpaceGrid& grid,
                                            const PhysicalParams& params) {
  grid.validate();
  const std::size_t n = grid.size();
  require(psi.size() == n, ErrorKind::invalid_argument, "wigner_from_wavefunction: psi length must match the grid");
  const double nrm = wavefunction_norm(psi, grid);
  require(std::abs(nrm - 1.0) <= 1e-6, ErrorKind::invalid_argument,
          "wigner_from_wavefunction: psi is not normalized (sum |psi|^2 dq = " + std::to_string(nrm) + ")");

  const double hb = params.hbar;
  const double dq = grid.dq();
  const std::size_t half = n / 2;
  // phase[j][k] = exp(2 i p_j k dq / hbar)
  std::vector<std::complex<double>> phase(n * (half + 1));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k <= half; ++k) {
      phase[j * (half + 1) + k] = std::polar(1.0, 2.0 * grid.p(j) * static_cast<double>(k) * dq / hb);
    }
  }

  WignerField w = WignerField::zeros(grid);
  double max_abs = 0.0;
  double max_imag = 0.0;
  std::vector<std::complex<double>> plus(half + 1);
  std::vector<std::complex<double>> minus(half + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t window = std::min(i, n - 1 - i);
    for (std::size_t k = 0; k <= window; ++k) {
      const double weight = (k == window && k > 0) ? 0.5 : 1.0;
      plus[k] = weight * std::conj(psi[i + k]) * psi[i - k];   // y = +k dq
      minus[k] = weight * std::conj(psi[i - k]) * psi[i + k];  // y = -k dq
    }
    for (std::size_t j = 0; j < n; ++j) {
      const auto* ph = &phase[j * (half + 1)];
      std::complex<double> acc = plus[0];
      for (std::size_t k = 1; k <= window; ++k) acc += plus[k] * ph[k] + minus[k] * std::conj(ph[k]);
      acc *= dq / (std::numbers::pi * hb);
      w.values(i, j) = acc.real();
      max_abs = std::max(max_abs, std::abs(acc.real()));
      max_imag = std::max(max_imag, std::abs(acc.imag()));
    }
  }
  require(max_imag <= kImaginaryResidueTolerance * std::max(1.0, max_abs), ErrorKind::invalid_argument,
          "wigner_from_wavefunction: imaginary residue " + std::to_string(max_imag) + " exceeds tolerance");
  const double mass = norm(w);
  require(std::abs(mass - 1.0) <= 1e-4, ErrorKind::domain_too_small,
          "wigner_from_wavefunction: quadrature normalization " + std::to_string(mass) +
              " off by more than 1e-4; enlarge the momentum box");
  w.values *= 1.0 / mass;
  return w;
}

/// Wigner function of N (psi_+ + psi_-) with Gaussians centred at +q0 and -q0.
inline WignerField cat_state(const PhaseSpaceGrid& grid, double q0, double sigma, const PhysicalParams& params) {
  grid.validate();
  check_margins(grid, q0, 0.0, sigma, params.hbar);
  check_margins(grid, -q0, 0.0, sigma, params.hbar);
  auto plus = gaussian_wavefunction(grid, q0, sigma);
  const auto minus = gaussian_wavefunction(grid, -q0, sigma);
  for (std::size_t i = 0; i < plus.size(); ++i) plus[i] += minus[i];
  const double scale = 1.0 / std::sqrt(wavefunction_norm(plus, grid));
  for (auto& v : plus) v *= scale;
  return wigner_from_wavefunction(plus, grid, params);
}

}  // namespace wmr::phase
