// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include "wmr/core/array2d.hpp"
#include "wmr/moyal/galerkin.hpp"
#include "wmr/moyal/oracle.hpp"
#include "wmr/moyal/terms.hpp"
#include "wmr/phase_space/field.hpp"
#include "wmr/phase_space/hamiltonian.hpp"
#include "wmr/wavelet/filter.hpp"

namespace wmr::moyal {

/// Right-hand side of the selected terms at W.time via the chosen scheme.
inline Grid2D evaluate_rhs(const phase::PolynomialHamiltonian& h, const phase::PhysicalParams& params,
                           const RhsTerms& terms, const phase::WignerField& w, const SchemeOptions& opts = {}) {
  params.validate();
  if (!terms.any()) return Grid2D(w.grid.size(), w.grid.size(), 0.0);
  if (opts.scheme == DerivativeScheme::oracle) return finite_difference_rhs_oracle(h, params, terms, w);
  const auto filter = wavelet::daubechies_filter(opts.wavelet_order);
  return apply_terms_galerkin(rhs_terms(h, params, terms), filter, w, h.potential_scale(w.time));
}

/// Classical flow {H, W}: U'(q) dW/dp - (p/m) dW/dq (plus mixed first-order terms).
inline Grid2D liouville_rhs(const phase::PolynomialHamiltonian& h, const phase::WignerField& w,
                            const phase::PhysicalParams& params, const SchemeOptions& opts = {}) {
  return evaluate_rhs(h, params, {true, false, false, false}, w, opts);
}

/// Odd series orders s >= 3; empty (zero) for quadratic H.
inline Grid2D quantum_correction_rhs(const phase::PolynomialHamiltonian& h, const phase::WignerField& w,
                                     const phase::PhysicalParams& params, const SchemeOptions& opts = {}) {
  return evaluate_rhs(h, params, {false, true, false, false}, w, opts);
}

/// Full finite sine series of the bracket, all orders s = 1, 3, ..., deg H.
inline Grid2D moyal_bracket(const phase::PolynomialHamiltonian& h, const phase::WignerField& w,
                            const phase::PhysicalParams& params, const SchemeOptions& opts = {}) {
  return evaluate_rhs(h, params, RhsTerms::hamiltonian_only(), w, opts);
}

/// 2 gamma d_p(p W) + D d_p^2 W.
inline Grid2D decoherence_rhs(const phase::WignerField& w, const phase::PhysicalParams& params,
                              const SchemeOptions& opts = {}) {
  return evaluate_rhs(phase::PolynomialHamiltonian{}, params, RhsTerms::decoherence_only(), w, opts);
}

}  // namespace wmr::moyal
