// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "wmr/core/error.hpp"
#include "wmr/moyal/galerkin.hpp"
#include "wmr/phase_space/field.hpp"

namespace wmr::solver {

struct SteadyStateResult {
  phase::WignerField field;
  double residual = 0.0;  ///< ||L a|| / ||a||
  int iterations = 0;
  bool converged = false;
  std::string method;  ///< linear solver used for the inverse iteration
};

inline constexpr std::size_t kDenseSteadyLimit = 4096;
inline constexpr double kIlutDropTolerance = 1e-3;
inline constexpr int kIlutFillFactor = 10;

namespace detail {

/// -1e-7 * max row |L|_1: small enough that the null direction dominates after a
/// couple of inverse iterations, large enough to keep the shifted system regular.
inline double steady_shift(const moyal::SparseMatrix& l) {
  double norm1 = 0.0;
  for (Eigen::Index r = 0; r < l.outerSize(); ++r) {
    double s = 0.0;
    for (moyal::SparseMatrix::InnerIterator it(l, r); it; ++it) s += std::abs(it.value());
    norm1 = std::max(norm1, s);
  }
  return -1e-7 * std::max(norm1, 1.0);
}

}  // namespace detail

/// Null vector of L(0) by shifted inverse power iteration, normalized to unit mass.
/// Systems up to 4096 unknowns use a dense LU; larger ones use BiCGSTAB with an
/// incomplete-LU preconditioner and fall back to a sparse LU when it stalls.
inline SteadyStateResult steady_state(const moyal::GalerkinOperator& op, double tolerance = 1e-8,
                                      int max_iterations = 50) {
  require(op.params.gamma > 0.0 && op.params.diffusion > 0.0, ErrorKind::precondition,
          "steady_state requires gamma > 0 and diffusion > 0: with gamma = 0 or D = 0 every function of H "
          "is stationary and the null space is degenerate");
  require(op.terms.include_friction && op.terms.include_diffusion, ErrorKind::precondition,
          "steady_state requires an operator assembled with friction and diffusion terms");
  require(max_iterations >= 1, ErrorKind::invalid_argument, "steady_state: max_iterations must be >= 1");

  const moyal::SparseMatrix l = op.matrix(0.0);
  const Eigen::Index n = l.rows();
  const double sigma = detail::steady_shift(l);
  moyal::SparseMatrix shifted = l;
  for (Eigen::Index k = 0; k < n; ++k) shifted.coeffRef(k, k) -= sigma;
  shifted.makeCompressed();

  SteadyStateResult out;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> solve;
  Eigen::PartialPivLU<Eigen::MatrixXd> dense;
  Eigen::SparseMatrix<double> col_major;
  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> iterative;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> direct;
  bool use_direct = false;

  if (static_cast<std::size_t>(n) <= kDenseSteadyLimit) {
    dense.compute(Eigen::MatrixXd(shifted));
    out.method = "dense-lu";
    solve = [&](const Eigen::VectorXd& b) { return Eigen::VectorXd(dense.solve(b)); };
  } else {
    col_major = shifted;
    iterative.preconditioner().setDroptol(kIlutDropTolerance);
    iterative.preconditioner().setFillfactor(kIlutFillFactor);
    iterative.setTolerance(1e-13);
    iterative.setMaxIterations(2000);
    iterative.compute(col_major);
    out.method = "bicgstab-ilut";
    solve = [&](const Eigen::VectorXd& b) -> Eigen::VectorXd {
      if (!use_direct) {
        Eigen::VectorXd x = iterative.solve(b);
        if (iterative.info() == Eigen::Success && x.allFinite()) return x;
        use_direct = true;
        direct.analyzePattern(col_major);
        direct.factorize(col_major);
        require(direct.info() == Eigen::Success, ErrorKind::non_convergence,
                "steady_state: sparse LU factorization failed");
        out.method = "sparse-lu";
      }
      return direct.solve(b);
    };
  }

  Eigen::VectorXd a = Eigen::VectorXd::Ones(n);
  a /= a.sum();
  double best_residual = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best = a;
  for (int it = 1; it <= max_iterations; ++it) {
    Eigen::VectorXd next = solve(a);
    const double s = next.sum();
    require(std::isfinite(s) && s != 0.0, ErrorKind::non_convergence, "steady_state: iterate lost its mass");
    a = next / s;
    const Eigen::VectorXd la = l * a;
    const double residual = la.norm() / a.norm();
    out.iterations = it;
    if (residual < best_residual) {
      best_residual = residual;
      best = a;
    }
    if (residual <= tolerance) break;
  }
  out.residual = best_residual;
  out.converged = best_residual <= tolerance;
  out.field = phase::WignerField::zeros(op.grid);
  for (Eigen::Index k = 0; k < n; ++k) out.field.values.flat()[static_cast<std::size_t>(k)] = best[k];
  phase::normalize(out.field);
  return out;
}

}  // namespace wmr::solver
