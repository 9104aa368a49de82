// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/SparseCore>
#include <unsupported/Eigen/KroneckerProduct>

#include "wmr/core/array2d.hpp"
#include "wmr/core/error.hpp"
#include "wmr/core/parallel.hpp"
#include "wmr/moyal/banded.hpp"
#include "wmr/moyal/terms.hpp"
#include "wmr/phase_space/field.hpp"
#include "wmr/phase_space/hamiltonian.hpp"
#include "wmr/wavelet/filter.hpp"
#include "wmr/wavelet/transform.hpp"

namespace wmr::moyal {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Banded realization of one separable term on a grid.
struct TermOperators {
  BandedOperator q;
  BandedOperator p;
};

inline TermOperators term_operators(const wavelet::WaveletFilter& filter, const SeparableTerm& t,
                                    const phase::PhaseSpaceGrid& g) {
  return {axis_operator(filter, t.q, g.size(), g.q_min, g.dq()), axis_operator(filter, t.p, g.size(), g.p_min, g.dp())};
}

/// sum over terms of (A_q tensor B_p) W, potential terms scaled by `potential_scale`.
inline Grid2D apply_terms_galerkin(const std::vector<SeparableTerm>& terms, const wavelet::WaveletFilter& filter,
                                   const phase::WignerField& w, double potential_scale) {
  const std::size_t n = w.grid.size();
  Grid2D out(n, n, 0.0);
  for (const auto& t : terms) {
    const auto ops = term_operators(filter, t, w.grid);
    const double s = t.potential_scaled ? potential_scale : 1.0;
    if (s == 0.0) continue;
    Grid2D tmp(n, n, 0.0);
    apply_rows(ops.q, w.values, tmp);
    apply_cols(ops.p, tmp, out, s);
  }
  return out;
}

/// FNV-1a over the Hamiltonian and physical parameters, printed as 16 hex digits.
inline std::string hamiltonian_digest(const phase::PolynomialHamiltonian& h, const phase::PhysicalParams& params) {
  std::uint64_t hash = 1469598103934665603ULL;
  auto mix = [&](const void* data, std::size_t len) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < len; ++k) {
      hash ^= b[k];
      hash *= 1099511628211ULL;
    }
  };
  for (double c : h.potential.coefficients()) mix(&c, sizeof c);
  for (const auto& m : h.mixed_terms) {
    mix(&m.coefficient, sizeof m.coefficient);
    mix(&m.q_power, sizeof m.q_power);
    mix(&m.p_power, sizeof m.p_power);
  }
  for (const auto& s : h.time_table) {
    mix(&s.time, sizeof s.time);
    mix(&s.factor, sizeof s.factor);
  }
  for (double v : {params.hbar, params.mass, params.gamma, params.diffusion}) mix(&v, sizeof v);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

/// Sparse right-hand side on level-J scaling coefficients, a' = (S + s(t) P) a.
/// Vectors are row-major q-then-p, matching WignerField::values. `depth` records the
/// wavelet depth used when the operator acts on transformed coefficients.
struct GalerkinOperator {
  int level = 0;
  int wavelet_order = 0;
  int depth = 0;
  phase::PhaseSpaceGrid grid;
  phase::PhysicalParams params;
  RhsTerms terms;
  phase::PolynomialHamiltonian hamiltonian;
  std::string digest;
  SparseMatrix static_part;
  SparseMatrix potential_part;  ///< empty unless the Hamiltonian carries a time table
  std::map<std::string, SparseMatrix> term_breakdown;

  std::size_t dimension() const { return static_cast<std::size_t>(static_part.rows()); }
  bool time_dependent() const { return potential_part.nonZeros() > 0; }
  double potential_scale(double t) const { return hamiltonian.potential_scale(t); }

  SparseMatrix matrix(double t = 0.0) const {
    if (!time_dependent()) return static_part;
    return SparseMatrix(static_part + potential_scale(t) * potential_part);
  }

  std::size_t nonzeros() const { return static_cast<std::size_t>(static_part.nonZeros() + potential_part.nonZeros()); }

  /// out = L(t) in. Rows are split into contiguous blocks across workers; each row is a
  /// fixed-order dot product, so the result is independent of the worker count.
  void apply(std::span<const double> in, std::span<double> out, double t = 0.0, unsigned workers = 0) const {
    require(in.size() == dimension() && out.size() == dimension(), ErrorKind::invalid_argument,
            "GalerkinOperator::apply: vector length must be " + std::to_string(dimension()));
    if (workers == 0) workers = worker_count();
    const bool td = time_dependent();
    const double s = td ? potential_scale(t) : 0.0;
    parallel_blocks(dimension(), workers, [&](std::size_t b, std::size_t e) {
      for (std::size_t r = b; r < e; ++r) {
        double acc = 0.0;
        const auto row = static_cast<Eigen::Index>(r);
        for (SparseMatrix::InnerIterator it(static_part, row); it; ++it) acc += it.value() * in[static_cast<std::size_t>(it.col())];
        if (td) {
          double pacc = 0.0;
          for (SparseMatrix::InnerIterator it(potential_part, row); it; ++it) pacc += it.value() * in[static_cast<std::size_t>(it.col())];
          acc += s * pacc;
        }
        out[r] = acc;
      }
    });
  }

  Grid2D apply(const Grid2D& in, double t = 0.0, unsigned workers = 0) const {
    Grid2D out(in.rows(), in.cols(), 0.0);
    apply(in.flat(), out.flat(), t, workers);
    return out;
  }

  /// Action on wavelet coefficients: dwt(L idwt(a)) at the stored depth.
  wavelet::CoefficientPyramid apply_wavelet(const wavelet::CoefficientPyramid& a, double t = 0.0) const {
    const Grid2D field = wavelet::inverse_dwt_2d(a);
    return wavelet::dwt_2d(apply(field, t), a.filter, a.top_level - a.base_level);
  }

  /// Max |sum_rows L(i, j)| over columns; zero when the operator conserves sum(a).
  double conservation_defect(double t = 0.0) const {
    const SparseMatrix m = matrix(t);
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(m.cols());
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
      for (SparseMatrix::InnerIterator it(m, r); it; ++it) sums[it.col()] += it.value();
    }
    return sums.cwiseAbs().maxCoeff();
  }
};

namespace detail {

inline SparseMatrix kron_term(const TermOperators& ops) {
  const SparseMatrix a = ops.q.to_sparse();
  const SparseMatrix b = ops.p.to_sparse();
  return Eigen::kroneckerProduct(a, b).eval();
}

}  // namespace detail

/// Assembles the Galerkin operator for the enabled terms. Assembly order is fixed, so
/// identical inputs give bit-identical matrices.
inline GalerkinOperator assemble_galerkin_operator(const phase::PolynomialHamiltonian& h,
                                                   const phase::PhysicalParams& params, const RhsTerms& terms,
                                                   const phase::PhaseSpaceGrid& grid, int wavelet_order, int depth,
                                                   bool keep_breakdown = false) {
  grid.validate();
  params.validate();
  terms.validate();
  h.validate();
  require(depth >= 0 && depth <= grid.level, ErrorKind::invalid_argument,
          "assemble_galerkin_operator: depth must lie in [0, " + std::to_string(grid.level) + "]");
  const auto filter = wavelet::daubechies_filter(wavelet_order);

  GalerkinOperator op;
  op.level = grid.level;
  op.wavelet_order = wavelet_order;
  op.depth = depth;
  op.grid = grid;
  op.params = params;
  op.terms = terms;
  op.hamiltonian = h;
  op.digest = hamiltonian_digest(h, params);

  const auto n = static_cast<Eigen::Index>(grid.size() * grid.size());
  op.static_part = SparseMatrix(n, n);
  op.potential_part = SparseMatrix(n, n);
  const bool split = h.time_dependent();
  for (const auto& t : rhs_terms(h, params, terms)) {
    const SparseMatrix k = detail::kron_term(term_operators(filter, t, grid));
    if (split && t.potential_scaled) {
      op.potential_part += k;
    } else {
      op.static_part += k;
    }
    if (keep_breakdown) {
      auto& slot = op.term_breakdown[to_string(t.kind)];
      if (slot.rows() == 0) slot = SparseMatrix(n, n);
      slot += k;
    }
  }
  op.static_part.makeCompressed();
  op.potential_part.makeCompressed();
  return op;
}

/// Matrix Market coordinate export of L(t); metadata goes in '%' comment lines.
inline void write_matrix_market(const GalerkinOperator& op, const std::string& path, double t = 0.0) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::io, "cannot open " + path + " for writing");
  const SparseMatrix m = op.matrix(t);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << "% level=" << op.level << " wavelet_order=" << op.wavelet_order << " depth=" << op.depth
      << " hamiltonian_digest=" << op.digest << " time=" << t << '\n';
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  char buf[64];
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << buf << '\n';
    }
  }
  require(static_cast<bool>(out), ErrorKind::io, "write failed for " + path);
}

}  // namespace wmr::moyal
