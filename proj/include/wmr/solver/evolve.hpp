// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "wmr/core/array2d.hpp"
#include "wmr/core/error.hpp"
#include "wmr/moyal/galerkin.hpp"
#include "wmr/moyal/oracle.hpp"
#include "wmr/moyal/terms.hpp"
#include "wmr/phase_space/diagnostics.hpp"
#include "wmr/phase_space/field.hpp"
#include "wmr/phase_space/hamiltonian.hpp"
#include "wmr/solver/compress.hpp"
#include "wmr/solver/stability.hpp"
#include "wmr/wavelet/filter.hpp"

namespace wmr::solver {

/// rhs(t, in, out) writes L(t) in into out.
using Rhs = std::function<void(double, std::span<const double>, std::span<double>)>;

/// One classical RK4 step of a' = L(t) a. Throws NumericalBlowup at t + dt on non-finite output.
inline std::vector<double> step_rk4(std::span<const double> a, const Rhs& rhs, double dt, double t = 0.0) {
  require(dt > 0.0, ErrorKind::invalid_argument, "step_rk4: dt must be > 0");
  const std::size_t n = a.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n), out(n);
  rhs(t, a, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = a[i] + 0.5 * dt * k1[i];
  rhs(t + 0.5 * dt, tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = a[i] + 0.5 * dt * k2[i];
  rhs(t + 0.5 * dt, tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = a[i] + dt * k3[i];
  rhs(t + dt, tmp, k4);
  bool finite = true;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    finite = finite && std::isfinite(out[i]);
  }
  if (!finite) {
    std::ostringstream os;
    os << "non-finite values after RK4 step ending at t=" << t + dt;
    throw NumericalBlowup(t + dt, os.str());
  }
  return out;
}

inline std::vector<double> step_rk4(std::span<const double> a, const moyal::GalerkinOperator& op, double dt,
                                    double t = 0.0) {
  return step_rk4(a, [&op](double tt, std::span<const double> in, std::span<double> out) { op.apply(in, out, tt); },
                  dt, t);
}

/// dt <= 0 requests the stability bound.
struct EvolutionSchedule {
  double dt = 0.0;
  double t_final = 1.0;
  int record_every = 1;
  int snapshot_every = 0;  ///< 0 disables intermediate snapshots (initial and final are always kept)
  bool renormalize = true;
  double threshold_eps = 0.0;

  void validate() const {
    require(std::isfinite(dt), ErrorKind::invalid_argument, "schedule: dt must be finite");
    require(t_final >= 0.0 && std::isfinite(t_final), ErrorKind::invalid_argument, "schedule: t_final must be >= 0");
    require(record_every >= 1, ErrorKind::invalid_argument, "schedule: record_every must be >= 1");
    require(snapshot_every >= 0, ErrorKind::invalid_argument, "schedule: snapshot_every must be >= 0");
    require(threshold_eps >= 0.0, ErrorKind::invalid_argument, "schedule: threshold_eps must be >= 0");
  }
  bool operator==(const EvolutionSchedule&) const = default;
};

/// Derivative scheme, analysis basis and classifier settings for a run.
struct SolverOptions {
  moyal::SchemeOptions scheme;
  int depth = 4;  ///< wavelet depth for diagnostics and compression (clamped to [1, J])
  phase::ClassifierConfig classifier;
  std::uint64_t seed = 0;
};

inline constexpr double kMaxStepDrift = 1e-4;
inline constexpr double kMaxRenormalization = 1e-6;
inline constexpr double kMassTolerance = 1e-5;
inline constexpr double kBoundaryAmplitude = 1e-8;

struct Trajectory {
  std::vector<phase::DiagnosticsRecord> records;
  std::vector<phase::WignerField> snapshots;
  phase::WignerField final_field;
  double dt = 0.0;
  std::size_t steps = 0;
  StabilityEstimate stability;
  double max_step_drift = 0.0;     ///< largest |mass change| over one step before correction
  double max_mass_error = 0.0;     ///< largest |mass - 1| after each accepted step
  double total_renormalization = 0.0;
  double compression_kept_fraction = 1.0;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
};

namespace detail {

inline double boundary_ratio(const Grid2D& v) {
  const std::size_t n = v.rows();
  double edge = 0.0;
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double a = std::abs(v(i, j));
      peak = std::max(peak, a);
      if (i == 0 || j == 0 || i == n - 1 || j == n - 1) edge = std::max(edge, a);
    }
  }
  return peak > 0.0 ? edge / peak : 0.0;
}

}  // namespace detail

/// Explicit RK4 evolution with diagnostics. With the Galerkin scheme `prebuilt` may supply
/// an operator assembled for the same inputs.
inline Trajectory evolve(const phase::WignerField& initial, const phase::PolynomialHamiltonian& h,
                         const phase::PhysicalParams& params, const moyal::RhsTerms& terms,
                         const EvolutionSchedule& schedule, const SolverOptions& options = {},
                         const moyal::GalerkinOperator* prebuilt = nullptr) {
  const auto start = std::chrono::steady_clock::now();
  schedule.validate();
  params.validate();
  terms.validate();
  initial.grid.validate();
  require(phase::is_normalized(initial), ErrorKind::invalid_argument,
          "evolve: initial field is not normalized (mass " + std::to_string(phase::norm(initial)) + ")");

  const auto& grid = initial.grid;
  const auto filter = wavelet::daubechies_filter(options.scheme.wavelet_order);
  const int depth = std::clamp(options.depth, 1, grid.level);

  std::optional<moyal::GalerkinOperator> owned;
  const moyal::GalerkinOperator* op = nullptr;
  if (options.scheme.scheme == moyal::DerivativeScheme::galerkin) {
    if (prebuilt != nullptr) {
      op = prebuilt;
    } else {
      owned = moyal::assemble_galerkin_operator(h, params, terms, grid, options.scheme.wavelet_order, depth);
      op = &*owned;
    }
  }

  phase::WignerField work = initial;
  Rhs rhs;
  if (op != nullptr) {
    rhs = [op](double t, std::span<const double> in, std::span<double> out) { op->apply(in, out, t); };
  } else {
    rhs = [&](double t, std::span<const double> in, std::span<double> out) {
      phase::WignerField tmp{grid, Grid2D(grid.size(), grid.size()), t};
      std::copy(in.begin(), in.end(), tmp.values.flat().begin());
      const Grid2D r = moyal::finite_difference_rhs_oracle(h, params, terms, tmp);
      std::copy(r.flat().begin(), r.flat().end(), out.begin());
    };
  }

  Trajectory traj;
  traj.stability = stability_estimate(
      [&](std::span<const double> in, std::span<double> out) { rhs(initial.time, in, out); },
      grid.size() * grid.size(), options.seed);
  if (!traj.stability.converged) traj.warnings.push_back("stability power iteration did not converge; dt bound is approximate");
  double dt = schedule.dt > 0.0 ? schedule.dt : traj.stability.dt_max;
  if (schedule.dt > traj.stability.dt_max) {
    std::ostringstream os;
    os << "requested dt=" << schedule.dt << " exceeds the stability bound " << traj.stability.dt_max;
    traj.warnings.push_back(os.str());
  }
  std::size_t steps = 0;
  if (schedule.t_final > 0.0) {
    require(std::isfinite(dt), ErrorKind::invalid_argument,
            "evolve: cannot derive dt from a zero operator; set schedule.dt explicitly");
    steps = static_cast<std::size_t>(std::ceil(schedule.t_final / dt - 1e-9));
    steps = std::max<std::size_t>(steps, 1);
    dt = schedule.t_final / static_cast<double>(steps);
  }
  traj.dt = dt;
  traj.steps = steps;

  const double t0 = initial.time;
  std::optional<Grid2D> last_record_values;
  double last_record_time = t0;
  bool boundary_warned = false;

  auto record = [&](std::size_t step) {
    auto r = phase::measure(work, h, params, filter, depth, options.classifier.sparsity_threshold);
    if (last_record_values) {
      const double span_t = work.time - last_record_time;
      const double denom = l2_norm(work.values.flat()) * span_t;
      Grid2D diff = work.values - *last_record_values;
      r.change_rate = denom > 0.0 ? l2_norm(diff.flat()) / denom : std::numeric_limits<double>::infinity();
    }
    r.regime = phase::classify_state(r, traj.records, options.classifier);
    traj.records.push_back(r);
    last_record_values = work.values;
    last_record_time = work.time;
    if (!boundary_warned && detail::boundary_ratio(work.values) > kBoundaryAmplitude) {
      std::ostringstream os;
      os << "field amplitude at the box edge exceeds " << kBoundaryAmplitude << " of its peak at t=" << work.time
         << "; periodic wrap may alias";
      traj.warnings.push_back(os.str());
      boundary_warned = true;
    }
    (void)step;
  };

  auto snapshot = [&]() {
    if (schedule.threshold_eps > 0.0) {
      auto pyr = wavelet::dwt_2d(work.values, filter, depth);
      const auto c = threshold_compress(pyr, schedule.threshold_eps);
      traj.compression_kept_fraction = c.kept_fraction;
      work.values = wavelet::inverse_dwt_2d(c.pyramid);
      phase::normalize(work);
    }
    traj.snapshots.push_back(work);
  };

  record(0);
  snapshot();
  double mass = phase::norm(work);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = t0 + static_cast<double>(k - 1) * dt;
    auto next = step_rk4(work.values.flat(), rhs, dt, t);
    std::copy(next.begin(), next.end(), work.values.flat().begin());
    work.time = t0 + static_cast<double>(k) * dt;
    const double new_mass = phase::norm(work);
    const double drift = std::abs(new_mass - mass);
    traj.max_step_drift = std::max(traj.max_step_drift, drift);
    if (drift > kMaxStepDrift) {
      std::ostringstream os;
      os << "mass changed by " << drift << " in one step at t=" << work.time << " (limit " << kMaxStepDrift << ")";
      fail(ErrorKind::conservation_violation, os.str());
    }
    const double err = new_mass - 1.0;
    if (schedule.renormalize && err != 0.0 && std::abs(err) <= kMaxRenormalization) {
      work.values *= 1.0 / new_mass;
      traj.total_renormalization += std::abs(err);
    }
    mass = phase::norm(work);
    traj.max_mass_error = std::max(traj.max_mass_error, std::abs(mass - 1.0));
    if (std::abs(mass - 1.0) > kMassTolerance) {
      std::ostringstream os;
      os << "mass " << mass << " drifted beyond " << kMassTolerance << " at t=" << work.time;
      fail(ErrorKind::conservation_violation, os.str());
    }
    const bool last = k == steps;
    if (k % static_cast<std::size_t>(schedule.record_every) == 0 || last) record(k);
    if ((schedule.snapshot_every > 0 && k % static_cast<std::size_t>(schedule.snapshot_every) == 0) || last) {
      snapshot();
      mass = phase::norm(work);
    }
  }
  traj.final_field = work;
  traj.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return traj;
}

}  // namespace wmr::solver
