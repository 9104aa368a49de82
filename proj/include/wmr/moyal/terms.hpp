// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wmr/core/error.hpp"
#include "wmr/core/polynomial.hpp"
#include "wmr/phase_space/field.hpp"
#include "wmr/phase_space/hamiltonian.hpp"

namespace wmr::moyal {

/// Which pieces of the evolution equation enter the right-hand side.
struct RhsTerms {
  bool include_liouville = true;
  bool include_quantum = true;
  bool include_friction = true;
  bool include_diffusion = true;

  bool any() const { return include_liouville || include_quantum || include_friction || include_diffusion; }
  void validate() const { require(any(), ErrorKind::invalid_argument, "RhsTerms: at least one term must be enabled"); }

  static RhsTerms none() { return {false, false, false, false}; }
  static RhsTerms hamiltonian_only() { return {true, true, false, false}; }
  static RhsTerms decoherence_only() { return {false, false, true, true}; }

  bool operator==(const RhsTerms&) const = default;
};

enum class DerivativeScheme { galerkin, oracle };

inline const char* to_string(DerivativeScheme s) { return s == DerivativeScheme::galerkin ? "galerkin" : "oracle"; }

inline std::optional<DerivativeScheme> scheme_from_string(std::string_view s) {
  if (s == "galerkin") return DerivativeScheme::galerkin;
  if (s == "oracle") return DerivativeScheme::oracle;
  return std::nullopt;
}

/// Derivative scheme plus the Daubechies order used by the Galerkin path.
struct SchemeOptions {
  DerivativeScheme scheme = DerivativeScheme::galerkin;
  int wavelet_order = 3;
};

enum class TermKind { liouville, quantum, friction, diffusion };

inline const char* to_string(TermKind k) {
  switch (k) {
    case TermKind::liouville: return "liouville";
    case TermKind::quantum: return "quantum";
    case TermKind::friction: return "friction";
    case TermKind::diffusion: return "diffusion";
  }
  return "unknown";
}

/// One axis of a separable operator: poly(x) * d^k/dx^k, or d^k/dx^k (poly(x) .) when
/// `derivative_outside` is set.
struct AxisFactor {
  Polynomial poly = Polynomial({1.0});
  int derivative = 0;
  bool derivative_outside = false;

  bool is_identity() const { return derivative == 0 && poly == Polynomial({1.0}); }
  bool operator==(const AxisFactor&) const = default;
};

/// (q-factor) tensor (p-factor). Potential-derived terms carry `potential_scaled` so a
/// time table can rescale them without re-assembly.
struct SeparableTerm {
  TermKind kind = TermKind::liouville;
  AxisFactor q;
  AxisFactor p;
  bool potential_scaled = false;
  /// Moyal series order s = 2n + 1 (0 for decoherence terms).
  int series_order = 0;
};

namespace detail {

struct Monomial {
  double coefficient;
  int q_power;
  int p_power;
  bool potential;
};

inline std::vector<Monomial> monomials(const phase::PolynomialHamiltonian& h, const phase::PhysicalParams& params) {
  std::vector<Monomial> out;
  out.push_back({1.0 / (2.0 * params.mass), 0, 2, false});
  const auto& c = h.potential.coefficients();
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] != 0.0) out.push_back({c[k], static_cast<int>(k), 0, true});
  }
  for (const auto& m : h.mixed_terms) {
    if (m.coefficient != 0.0) out.push_back({m.coefficient, m.q_power, m.p_power, false});
  }
  return out;
}

inline double falling_factorial(int n, int k) {
  double r = 1.0;
  for (int t = 0; t < k; ++t) r *= static_cast<double>(n - t);
  return r;
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int t = 1; t <= k; ++t) r = r * static_cast<double>(n - k + t) / static_cast<double>(t);
  return r;
}

inline double factorial(int n) { return falling_factorial(n, n); }

}  // namespace detail

/// Prefactor of the order-s term of the sine series: (-1)^n (hbar/2)^(2n) / (2n+1)!, s = 2n+1.
inline double series_prefactor(int s, double hbar) {
  const int n = (s - 1) / 2;
  return (n % 2 == 0 ? 1.0 : -1.0) * std::pow(0.5 * hbar, 2 * n) / detail::factorial(s);
}

/// Terms of the Moyal bracket of H with W, restricted to orders s in [s_min, s_max]:
///   sum_s c_s sum_r C(s,r) (-1)^r (d_q^(s-r) d_p^r H) (d_p^(s-r) d_q^r W).
/// Terms sharing derivative orders, p-polynomial and scaling are merged.
inline std::vector<SeparableTerm> bracket_terms(const phase::PolynomialHamiltonian& h,
                                                const phase::PhysicalParams& params, int s_min, int s_max) {
  h.validate();
  const auto mono = detail::monomials(h, params);
  std::vector<SeparableTerm> out;
  for (int s = std::max(1, s_min | 1); s <= s_max; s += 2) {
    const double pref = series_prefactor(s, params.hbar);
    for (int r = 0; r <= s; ++r) {
      for (const auto& m : mono) {
        if (m.q_power < s - r || m.p_power < r) continue;
        const double c = m.coefficient * pref * detail::binomial(s, r) * (r % 2 == 0 ? 1.0 : -1.0) *
                         detail::falling_factorial(m.q_power, s - r) * detail::falling_factorial(m.p_power, r);
        const Polynomial qpoly = Polynomial::monomial(c, m.q_power - (s - r));
        const Polynomial ppoly = Polynomial::monomial(1.0, m.p_power - r);
        SeparableTerm t;
        t.kind = s == 1 ? TermKind::liouville : TermKind::quantum;
        t.q = {qpoly, r, false};
        t.p = {ppoly, s - r, false};
        t.potential_scaled = m.potential;
        t.series_order = s;
        bool merged = false;
        for (auto& e : out) {
          if (e.series_order == s && e.potential_scaled == t.potential_scaled && e.q.derivative == r &&
              e.p == t.p) {
            e.q.poly += qpoly;
            merged = true;
            break;
          }
        }
        if (!merged) out.push_back(std::move(t));
      }
    }
  }
  std::erase_if(out, [](const SeparableTerm& t) { return t.q.poly.is_zero() || t.p.poly.is_zero(); });
  return out;
}

/// 2 gamma d_p(p W) and D d_p^2 W.
inline std::vector<SeparableTerm> decoherence_terms(const phase::PhysicalParams& params, bool friction = true,
                                                    bool diffusion = true) {
  std::vector<SeparableTerm> out;
  if (friction && params.gamma != 0.0) {
    SeparableTerm t;
    t.kind = TermKind::friction;
    t.q = {Polynomial({1.0}), 0, false};
    t.p = {Polynomial({0.0, 2.0 * params.gamma}), 1, true};
    out.push_back(t);
  }
  if (diffusion && params.diffusion != 0.0) {
    SeparableTerm t;
    t.kind = TermKind::diffusion;
    t.q = {Polynomial({1.0}), 0, false};
    t.p = {Polynomial({params.diffusion}), 2, false};
    out.push_back(t);
  }
  return out;
}

/// Highest series order with a nonzero contribution (at least 1).
inline int max_series_order(const phase::PolynomialHamiltonian& h) {
  int d = h.total_degree();
  return d % 2 == 0 ? d - 1 : d;
}

inline std::vector<SeparableTerm> rhs_terms(const phase::PolynomialHamiltonian& h, const phase::PhysicalParams& params,
                                            const RhsTerms& terms) {
  std::vector<SeparableTerm> out;
  if (terms.include_liouville) {
    auto t = bracket_terms(h, params, 1, 1);
    out.insert(out.end(), t.begin(), t.end());
  }
  if (terms.include_quantum) {
    auto t = bracket_terms(h, params, 3, max_series_order(h));
    out.insert(out.end(), t.begin(), t.end());
  }
  auto d = decoherence_terms(params, terms.include_friction, terms.include_diffusion);
  out.insert(out.end(), d.begin(), d.end());
  return out;
}

}  // namespace wmr::moyal
