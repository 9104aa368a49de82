// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wmr/core/error.hpp"
#include "wmr/moyal/galerkin.hpp"
#include "wmr/phase_space/diagnostics.hpp"
#include "wmr/phase_space/multiscale.hpp"
#include "wmr/phase_space/states.hpp"
#include "wmr/scenario/config.hpp"
#include "wmr/scenario/probe.hpp"
#include "wmr/scenario/snapshot.hpp"
#include "wmr/solver/compress.hpp"
#include "wmr/solver/evolve.hpp"
#include "wmr/solver/stability.hpp"
#include "wmr/solver/steady.hpp"
#include "wmr/wavelet/packet.hpp"
#include "wmr/wavelet/transform.hpp"

namespace wmr::scenario {

/// Process exit codes, one per error class.
enum ExitCode : int {
  kExitSuccess = 0,
  kExitConfig = 2,
  kExitBlowup = 3,
  kExitConservation = 4,
  kExitNonConvergence = 5,
  kExitIo = 10,
};

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::numerical_blowup: return kExitBlowup;
    case ErrorKind::conservation_violation: return kExitConservation;
    case ErrorKind::non_convergence: return kExitNonConvergence;
    case ErrorKind::io: return kExitIo;
    case ErrorKind::invalid_argument:
    case ErrorKind::unsupported_order:
    case ErrorKind::domain_too_small:
    case ErrorKind::insufficient_data:
    case ErrorKind::precondition:
    case ErrorKind::config: return kExitConfig;
  }
  return kExitConfig;
}

inline constexpr const char* kManifestFile = "MANIFEST";
inline constexpr const char* kConfigEchoFile = "config.txt";
inline constexpr const char* kDiagnosticsFile = "diagnostics.csv";
inline constexpr const char* kSummaryFile = "summary.json";
inline constexpr const char* kOperatorFile = "operator.mtx";
inline constexpr const char* kSnapshotDir = "snapshots";
inline constexpr double kCompressionProbeEps = 1e-6;

struct RunResult {
  int exit_code = kExitSuccess;
  std::string error;  ///< empty on success
  std::filesystem::path directory;
  nlohmann::json summary;
  std::optional<solver::Trajectory> trajectory;
  std::optional<solver::SteadyStateResult> steady;
};

namespace detail {

inline std::string snapshot_stem(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%05zu", k);
  return buf;
}

inline phase::WignerField initial_field(const Scenario& s) {
  switch (s.initial.kind) {
    case InitialKind::coherent:
      return phase::gaussian_coherent_state(s.grid, s.initial.q0, s.initial.p0, s.initial.sigma, s.params);
    case InitialKind::cat: return phase::cat_state(s.grid, s.initial.q0, s.initial.sigma, s.params);
    case InitialKind::file: {
      auto snap = read_snapshot_csv(s.initial.path);
      require(snap.field.grid == s.grid, ErrorKind::config,
              "initial.path grid " + phase::describe(snap.field.grid) + " differs from the configured grid " +
                  phase::describe(s.grid));
      snap.field.time = 0.0;
      phase::normalize(snap.field);
      return snap.field;
    }
  }
  fail(ErrorKind::config, "unknown initial state kind");
}

inline nlohmann::json record_json(const phase::DiagnosticsRecord& r) {
  return {{"time", r.time},
          {"norm", r.norm},
          {"purity", r.purity},
          {"negativity_volume", r.negativity_volume},
          {"shannon_entropy", r.shannon_entropy},
          {"sparsity", r.sparsity},
          {"energy", r.energy},
          {"regime", phase::to_string(r.regime)}};
}

/// Wavelet statistics of one field: standard versus best-basis entropy, coefficient
/// sparsity and the kept fraction under thresholding at 1e-6.
inline nlohmann::json basis_statistics(const phase::WignerField& w, const wavelet::WaveletFilter& filter, int depth,
                                       double sparsity_threshold) {
  nlohmann::json j;
  const auto pyr = wavelet::dwt_2d(w.values, filter, depth);
  const auto flat = pyr.flatten();
  const auto stats = phase::coefficient_statistics(flat, sparsity_threshold);
  j["depth"] = depth;
  j["coefficients"] = flat.size();
  j["standard_entropy"] = stats.entropy;
  j["sparsity"] = stats.sparsity;
  if (sum_squares(w.values.flat()) > 0.0) {
    const auto best = wavelet::best_basis(w.values, filter, depth);
    j["best_basis_entropy"] = wavelet::shannon_entropy(best.coefficients.flatten());
    j["best_basis_leaves"] = best.tree.leaves.size();
  }
  const auto c = solver::threshold_compress(pyr, kCompressionProbeEps);
  j["threshold_eps"] = kCompressionProbeEps;
  j["kept_fraction"] = c.kept_fraction;
  j["relative_error"] = c.relative_error;
  return j;
}

/// Band energies of each diagnostic time series; the slow part is the coarsest
/// approximation (cutoff 0), so every dyadic time scale gets its own band.
inline nlohmann::json time_scale_energies(const std::vector<phase::DiagnosticsRecord>& records,
                                          const wavelet::WaveletFilter& filter) {
  nlohmann::json j = nlohmann::json::object();
  if (records.size() < 2) return j;
  auto series = [&](auto member) {
    std::vector<double> v;
    for (const auto& r : records) v.push_back(r.*member);
    const auto d = phase::decompose_multiscale(std::span<const double>(v), filter, 0);
    nlohmann::json bands = nlohmann::json::object();
    for (const auto& [l, e] : d.band_energy) bands[std::to_string(l)] = e;
    return nlohmann::json{{"slow_energy", d.slow_energy}, {"band_energy", bands}};
  };
  j["purity"] = series(&phase::DiagnosticsRecord::purity);
  j["negativity_volume"] = series(&phase::DiagnosticsRecord::negativity_volume);
  j["energy"] = series(&phase::DiagnosticsRecord::energy);
  return j;
}

struct RunWriter {
  std::filesystem::path dir;
  std::vector<std::string> files;

  void write(const std::string& name, std::string_view contents) {
    write_atomic(dir / name, contents);
    files.push_back(name);
  }

  void manifest(bool complete, int code, const std::string& error) {
    std::ostringstream os;
    os << "status = " << (complete ? "complete" : "incomplete") << '\n';
    os << "exit_code = " << code << '\n';
    if (!error.empty()) {
      std::string one_line = error;
      std::replace(one_line.begin(), one_line.end(), '\n', ' ');
      os << "error = " << one_line << '\n';
    }
    for (const auto& f : files) os << "file = " << f << '\n';
    write_atomic(dir / kManifestFile, os.str());
  }
};

}  // namespace detail

/// True when `dir` holds a MANIFEST whose status line reads complete.
inline bool manifest_complete(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir / kManifestFile)) return false;
  return read_file(dir / kManifestFile).rfind("status = complete\n", 0) == 0;
}

/// Runs `s` and writes its artifacts under `out_dir` (default: s.output.dir). Never
/// throws for module errors: they become the exit code, the MANIFEST records the
/// failure and whatever was produced so far stays on disk.
inline RunResult run_scenario(const Scenario& s, std::optional<std::filesystem::path> out_dir = std::nullopt) {
  using clock = std::chrono::steady_clock;
  const auto t_start = clock::now();
  auto seconds_since = [](clock::time_point t0) { return std::chrono::duration<double>(clock::now() - t0).count(); };

  RunResult result;
  result.directory = out_dir ? *out_dir : std::filesystem::path(s.output.dir);
  detail::RunWriter writer{result.directory, {}};
  nlohmann::json& summary = result.summary;
  summary["name"] = s.name;
  summary["mode"] = to_string(s.mode);
  summary["scheme"] = moyal::to_string(s.scheme);
  summary["wavelet"] = {{"order", s.wavelet_order}, {"taps", 2 * s.wavelet_order}, {"depth", s.wavelet_depth}};
  summary["grid"] = {{"q_min", s.grid.q_min}, {"q_max", s.grid.q_max}, {"p_min", s.grid.p_min},
                     {"p_max", s.grid.p_max}, {"level", s.grid.level}};
  summary["params"] = {{"hbar", s.params.hbar}, {"mass", s.params.mass}, {"gamma", s.params.gamma},
                       {"diffusion", s.params.diffusion}};
  nlohmann::json timings = nlohmann::json::object();
  std::vector<std::string> warnings;

  auto finish = [&](int code, const std::string& error) {
    result.exit_code = code;
    result.error = error;
    summary["exit_code"] = code;
    if (!error.empty()) summary["error"] = error;
    timings["total_seconds"] = seconds_since(t_start);
    summary["timings"] = timings;
    summary["warnings"] = warnings;
    try {
      writer.write(kSummaryFile, summary.dump(2) + "\n");
      writer.manifest(code == kExitSuccess, code, error);
    } catch (const Error& e) {
      if (result.exit_code == kExitSuccess) {
        result.exit_code = kExitIo;
        result.error = e.what();
      }
    }
    return result;
  };

  try {
    std::error_code ec;
    std::filesystem::create_directories(result.directory, ec);
    if (ec) fail(ErrorKind::io, "cannot create " + result.directory.string() + ": " + ec.message());
    std::filesystem::remove(result.directory / kManifestFile, ec);
    writer.manifest(false, -1, "run in progress");
    writer.write(kConfigEchoFile, emit_config(s));

    const auto filter = wavelet::daubechies_filter(s.wavelet_order);
    const int depth = std::clamp(s.wavelet_depth, 1, s.grid.level);
    const auto options = s.solver_options();

    std::optional<moyal::GalerkinOperator> op;
    if (s.scheme == moyal::DerivativeScheme::galerkin) {
      const auto t0 = clock::now();
      op = moyal::assemble_galerkin_operator(s.hamiltonian, s.params, s.terms, s.grid, s.wavelet_order, depth);
      timings["assembly_seconds"] = seconds_since(t0);
      summary["operator"] = {{"dimension", op->dimension()},
                             {"nonzeros", op->nonzeros()},
                             {"conservation_defect", op->conservation_defect()},
                             {"hamiltonian_digest", op->digest}};
      if (s.output.operator_market) {
        moyal::write_matrix_market(*op, (result.directory / kOperatorFile).string());
        writer.files.push_back(kOperatorFile);
      }
    } else if (s.mode == Mode::steady_state) {
      fail(ErrorKind::config, "mode = steady_state needs the assembled operator; use solver.scheme = galerkin");
    }

    phase::WignerField start;
    solver::EvolutionSchedule schedule = s.schedule;
    if (s.mode == Mode::steady_state) {
      const auto t0 = clock::now();
      auto st = solver::steady_state(*op, s.steady.tolerance, s.steady.max_iterations);
      timings["steady_seconds"] = seconds_since(t0);
      summary["steady"] = {{"residual", st.residual},
                           {"iterations", st.iterations},
                           {"converged", st.converged},
                           {"method", st.method}};
      result.steady = st;
      if (!st.converged) {
        std::ostringstream os;
        os << "steady_state did not reach tolerance " << s.steady.tolerance << " (best residual " << st.residual
           << " after " << st.iterations << " iterations)";
        fail(ErrorKind::non_convergence, os.str());
      }
      start = st.field;
      // Closed-loop check: verify_steps RK4 steps at the stability bound.
      const auto stab = solver::stability_estimate(*op, 0.0, s.seed);
      schedule.dt = stab.dt_max;
      schedule.t_final = static_cast<double>(s.steady.verify_steps) * stab.dt_max;
      schedule.snapshot_every = 0;
      schedule.threshold_eps = 0.0;
    } else {
      start = detail::initial_field(s);
    }

    const auto t_evolve = clock::now();
    auto traj = solver::evolve(start, s.hamiltonian, s.params, s.terms, schedule, options, op ? &*op : nullptr);
    timings["evolve_seconds"] = seconds_since(t_evolve);
    warnings.insert(warnings.end(), traj.warnings.begin(), traj.warnings.end());

    if (s.mode == Mode::steady_state) {
      Grid2D diff = traj.final_field.values - start.values;
      summary["steady"]["verify_steps"] = traj.steps;
      summary["steady"]["verify_relative_change"] = l2_norm(diff.flat()) / l2_norm(start.values.flat());
      // The reported field is the solve itself; the short evolution only checks it.
      traj.snapshots = {start};
    }

    {
      std::ostringstream csv;
      csv << phase::kDiagnosticsCsvHeader << '\n';
      for (const auto& r : traj.records) phase::write_csv_row(csv, r);
      writer.write(kDiagnosticsFile, csv.str());
    }
    std::filesystem::create_directories(result.directory / kSnapshotDir, ec);
    if (ec) fail(ErrorKind::io, "cannot create snapshot directory: " + ec.message());
    nlohmann::json snaps = nlohmann::json::array();
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
      const auto stem = std::string(kSnapshotDir) + "/" + detail::snapshot_stem(k);
      const auto& w = traj.snapshots[k];
      if (s.output.csv) writer.write(stem + ".csv", snapshot_csv(w, s.params.hbar));
      if (s.output.pgm) writer.write(stem + ".pgm", snapshot_pgm(w));
      snaps.push_back({{"index", k}, {"time", w.time}});
    }
    summary["snapshots"] = snaps;

    const phase::WignerField& reported = s.mode == Mode::steady_state ? start : traj.final_field;
    const auto& first = traj.records.front();
    const auto& last = traj.records.back();
    summary["initial"] = detail::record_json(first);
    summary["final"] = detail::record_json(last);
    summary["regime"] = phase::to_string(last.regime);
    summary["initial_regime"] = phase::to_string(first.regime);
    summary["purity"] = last.purity;
    summary["purity_drift"] = last.purity - first.purity;
    summary["conservation"] = {{"max_mass_error", traj.max_mass_error},
                               {"max_step_drift", traj.max_step_drift},
                               {"total_renormalization", traj.total_renormalization},
                               {"final_mass", phase::norm(traj.final_field)}};
    summary["time_stepping"] = {{"dt", traj.dt},
                                {"steps", traj.steps},
                                {"spectral_radius", traj.stability.spectral_radius},
                                {"dt_max", traj.stability.dt_max},
                                {"power_iterations", traj.stability.iterations},
                                {"power_converged", traj.stability.converged}};
    summary["basis"] = detail::basis_statistics(reported, filter, depth, s.classifier.sparsity_threshold);
    summary["time_scales"] = detail::time_scale_energies(traj.records, filter);
    if (s.schedule.threshold_eps > 0.0) summary["compression_kept_fraction"] = traj.compression_kept_fraction;
    result.trajectory = std::move(traj);
    return finish(kExitSuccess, "");
  } catch (const Error& e) {
    return finish(exit_code_for(e.kind()), std::string(to_string(e.kind())) + ": " + e.what());
  } catch (const std::exception& e) {
    return finish(kExitIo, std::string("unexpected failure: ") + e.what());
  }
}

/// Snapshots stored in a run directory, in index order.
inline std::vector<phase::WignerField> load_snapshots(const std::filesystem::path& dir) {
  const auto sub = dir / kSnapshotDir;
  require(std::filesystem::is_directory(sub), ErrorKind::io, "no snapshot directory in " + dir.string());
  std::vector<std::filesystem::path> paths;
  for (const auto& e : std::filesystem::directory_iterator(sub)) {
    if (e.path().extension() == ".csv") paths.push_back(e.path());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<phase::WignerField> out;
  for (const auto& p : paths) out.push_back(read_snapshot_csv(p).field);
  return out;
}

/// fringe_decay_probe on a finished run directory; q0 and the physics come from its config echo.
inline FringeDecay probe_fringe_run(const std::filesystem::path& dir) {
  const auto text = read_file(dir / kConfigEchoFile);
  const Scenario s = parse_config(text);
  const auto snaps = load_snapshots(dir);
  return fringe_decay_probe(snaps, s.initial.q0, s.params);
}

}  // namespace wmr::scenario
