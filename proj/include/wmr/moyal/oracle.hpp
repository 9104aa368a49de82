// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <cmath>
#include <vector>

#include "wmr/core/array2d.hpp"
#include "wmr/core/error.hpp"
#include "wmr/moyal/terms.hpp"
#include "wmr/phase_space/field.hpp"
#include "wmr/phase_space/hamiltonian.hpp"

// Grid-space reference implementation. It shares no code with the Galerkin path beyond the
// term flags: H derivatives are evaluated pointwise from monomials and W derivatives use
// fourth-order central differences on the periodic grid.
namespace wmr::moyal {

/// Fornberg weights for the `order`-th derivative at 0 from nodes -m..m (unit spacing).
inline std::vector<double> fornberg_weights(int order, int m) {
  const int npts = 2 * m + 1;
  std::vector<double> x(static_cast<std::size_t>(npts));
  for (int i = 0; i < npts; ++i) x[static_cast<std::size_t>(i)] = i - m;
  // c[j][k]: weight of node j for derivative k.
  std::vector<std::vector<double>> c(static_cast<std::size_t>(npts), std::vector<double>(static_cast<std::size_t>(order) + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0];
  c[0][0] = 1.0;
  for (int i = 1; i < npts; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[ui];
    for (int j = 0; j < i; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const double c3 = x[ui] - x[uj];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          const auto uk = static_cast<std::size_t>(k);
          c[ui][uk] = c1 * (k * c[ui - 1][uk - 1] - c5 * c[ui - 1][uk]) / c2;
        }
        c[ui][0] = -c1 * c5 * c[ui - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        const auto uk = static_cast<std::size_t>(k);
        c[uj][uk] = (c4 * c[uj][uk] - k * c[uj][uk - 1]) / c3;
      }
      c[uj][0] = c4 * c[uj][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(npts));
  for (int j = 0; j < npts; ++j) w[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)][static_cast<std::size_t>(order)];
  return w;
}

/// Half-width of the fourth-order central stencil for derivative `order`.
inline int oracle_half_width(int order) { return (order + 1) / 2 + 1; }

enum class Axis { q, p };

/// Fourth-order periodic central difference of the given order along one axis.
inline Grid2D finite_difference(const Grid2D& in, Axis axis, int order, double h) {
  if (order == 0) return in;
  const int m = oracle_half_width(order);
  const auto w = fornberg_weights(order, m);
  const double scale = std::pow(h, -order);
  const std::size_t n = in.rows();
  const std::size_t cols = in.cols();
  Grid2D out(n, cols, 0.0);
  for (int o = -m; o <= m; ++o) {
    const double c = scale * w[static_cast<std::size_t>(o + m)];
    if (c == 0.0) continue;
    if (axis == Axis::q) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t src = (i + n + static_cast<std::size_t>(o + static_cast<int>(n))) % n;
        const auto s = in.row(src);
        auto d = out.row(i);
        for (std::size_t j = 0; j < cols; ++j) d[j] += c * s[j];
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        const auto s = in.row(i);
        auto d = out.row(i);
        for (std::size_t j = 0; j < cols; ++j) d[j] += c * s[(j + cols + static_cast<std::size_t>(o + static_cast<int>(cols))) % cols];
      }
    }
  }
  return out;
}

namespace detail {

/// d_q^a d_p^b H at (q, p), potential scaled by s(t).
inline double hamiltonian_partial(const phase::PolynomialHamiltonian& h, const phase::PhysicalParams& params, int a,
                                  int b, double q, double p, double scale) {
  auto mono = [&](double c, int i, int j) {
    if (i < a || j < b) return 0.0;
    double v = c;
    for (int t = 0; t < a; ++t) v *= i - t;
    for (int t = 0; t < b; ++t) v *= j - t;
    return v * std::pow(q, i - a) * std::pow(p, j - b);
  };
  double acc = mono(1.0 / (2.0 * params.mass), 0, 2);
  const auto& c = h.potential.coefficients();
  for (std::size_t k = 0; k < c.size(); ++k) acc += scale * mono(c[k], static_cast<int>(k), 0);
  for (const auto& m : h.mixed_terms) acc += mono(m.coefficient, m.q_power, m.p_power);
  return acc;
}

inline bool hamiltonian_partial_nonzero(const phase::PolynomialHamiltonian& h, int a, int b) {
  if (a == 0 && b <= 2) return true;
  const auto& c = h.potential.coefficients();
  if (b == 0) {
    for (std::size_t k = static_cast<std::size_t>(a); k < c.size(); ++k) {
      if (c[k] != 0.0) return true;
    }
  }
  for (const auto& m : h.mixed_terms) {
    if (m.coefficient != 0.0 && m.q_power >= a && m.p_power >= b) return true;
  }
  return false;
}

}  // namespace detail

/// Full right-hand side on the grid by finite differences.
inline Grid2D finite_difference_rhs_oracle(const phase::PolynomialHamiltonian& h, const phase::PhysicalParams& params,
                                           const RhsTerms& terms, const phase::WignerField& w) {
  h.validate();
  const auto& g = w.grid;
  const std::size_t n = g.size();
  const double scale = h.potential_scale(w.time);
  Grid2D out(n, n, 0.0);

  const int degree = h.total_degree();
  for (int s = 1; s <= degree; s += 2) {
    if (s == 1 && !terms.include_liouville) continue;
    if (s > 1 && !terms.include_quantum) continue;
    const double pref = series_prefactor(s, params.hbar);
    double binom = 1.0;
    for (int r = 0; r <= s; ++r) {
      if (r > 0) binom = binom * (s - r + 1) / r;
      if (!detail::hamiltonian_partial_nonzero(h, s - r, r)) continue;
      const Grid2D dw = finite_difference(finite_difference(w.values, Axis::q, r, g.dq()), Axis::p, s - r, g.dp());
      const double c = pref * binom * (r % 2 == 0 ? 1.0 : -1.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          out(i, j) += c * detail::hamiltonian_partial(h, params, s - r, r, g.q(i), g.p(j), scale) * dw(i, j);
        }
      }
    }
  }
  if (terms.include_friction && params.gamma != 0.0) {
    Grid2D pw = w.values;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) pw(i, j) *= g.p(j);
    }
    out += (2.0 * params.gamma) * finite_difference(pw, Axis::p, 1, g.dp());
  }
  if (terms.include_diffusion && params.diffusion != 0.0) {
    out += params.diffusion * finite_difference(w.values, Axis::p, 2, g.dp());
  }
  return out;
}

}  // namespace wmr::moyal
