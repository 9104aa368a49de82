// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "wmr/moyal/galerkin.hpp"
#include "wmr/moyal/oracle.hpp"
#include "wmr/phase_space/diagnostics.hpp"
#include "wmr/phase_space/states.hpp"
#include "wmr/solver/compress.hpp"
#include "wmr/solver/evolve.hpp"
#include "wmr/solver/stability.hpp"
#include "wmr/solver/steady.hpp"
#include "wmr/wavelet/transform.hpp"

using namespace wmr;
using namespace wmr::solver;
using phase::PhaseSpaceGrid;
using phase::PhysicalParams;
using phase::PolynomialHamiltonian;
using phase::WignerField;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

PhaseSpaceGrid grid_j(int level) {
  PhaseSpaceGrid g;
  g.level = level;
  return g;
}

std::pair<double, double> centroid(const WignerField& w) {
  double q = 0.0, p = 0.0;
  const auto& g = w.grid;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      q += g.q(i) * w.values(i, j) * g.cell_area();
      p += g.p(j) * w.values(i, j) * g.cell_area();
    }
  }
  return {q, p};
}

moyal::GalerkinOperator diffusion_operator(const PhaseSpaceGrid& g, double d) {
  PhysicalParams pp;
  pp.diffusion = d;
  return moyal::assemble_galerkin_operator({}, pp, {false, false, false, true}, g, 3, 0);
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::io;
}

}  // namespace

TEST_CASE("zero operator has an unbounded step", "[stability]") {
  const auto zero = [](std::span<const double>, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); };
  const auto est = stability_estimate(zero, 64);
  CHECK(std::isinf(est.dt_max));
  CHECK(est.spectral_radius == 0.0);
  CHECK(est.converged);

  PhysicalParams pp;
  const auto op = moyal::assemble_galerkin_operator({}, pp, {false, false, true, true}, grid_j(4), 3, 0);
  CHECK(op.nonzeros() == 0);
  CHECK(std::isinf(stability_estimate(op).dt_max));
}

TEST_CASE("pure diffusion step bound scales as dp^2 / D", "[stability]") {
  const double d = 0.3;
  const auto coarse = stability_estimate(diffusion_operator(grid_j(6), d));
  const auto fine = stability_estimate(diffusion_operator(grid_j(7), d));
  CHECK(coarse.converged);
  CHECK(fine.converged);
  CHECK_THAT(fine.dt_max / coarse.dt_max, WithinRel(0.25, 0.1));
  CHECK_THAT(coarse.dt_max, WithinRel(kStabilitySafety * kRk4StabilityExtent / coarse.spectral_radius, 1e-12));

  // Oracle path: the fourth-order symbol peaks at 16 / (3 dp^2), within 2x of 4 D / dp^2.
  const auto g = grid_j(6);
  PhysicalParams pp;
  pp.diffusion = d;
  const auto oracle = [&](std::span<const double> in, std::span<double> out) {
    WignerField w{g, Grid2D(g.size(), g.size()), 0.0};
    std::copy(in.begin(), in.end(), w.values.flat().begin());
    const auto r = moyal::finite_difference_rhs_oracle({}, pp, {false, false, false, true}, w);
    std::copy(r.flat().begin(), r.flat().end(), out.begin());
  };
  const auto fd = stability_estimate(oracle, g.size() * g.size());
  const double analytic = 4.0 * d / (g.dp() * g.dp());
  // Power iteration stops once successive estimates agree to 1e-4, slightly below the peak.
  CHECK_THAT(fd.spectral_radius, WithinRel(16.0 / 3.0 * d / (g.dp() * g.dp()), 1e-2));
  CHECK(fd.spectral_radius >= 0.5 * analytic);
  CHECK(fd.spectral_radius <= 2.0 * analytic);
}

TEST_CASE("Galerkin diffusion spectral radius is within 2x of 4 D / dp^2", "[stability][known-gap]") {
  // The D6 second-derivative connection stencil peaks near 14 / dp^2, not 4 / dp^2.
  const auto g = grid_j(6);
  const double d = 0.3;
  const double analytic = 4.0 * d / (g.dp() * g.dp());
  const auto est = stability_estimate(diffusion_operator(g, d));
  CAPTURE(est.spectral_radius, analytic);
  CHECK(est.spectral_radius >= 0.5 * analytic);
  CHECK(est.spectral_radius <= 2.0 * analytic);
}

TEST_CASE("doubling diffusion halves the step bound", "[stability]") {
  const auto g = grid_j(6);
  const double a = stability_estimate(diffusion_operator(g, 0.2)).dt_max;
  const double b = stability_estimate(diffusion_operator(g, 0.4)).dt_max;
  CHECK_THAT(b / a, WithinRel(0.5, 0.1));
}

TEST_CASE("rotation spectrum is captured through L squared", "[stability]") {
  // L = [[0, -w], [w, 0]] has eigenvalues +-i w; plain power iteration would oscillate.
  const double w = 3.0;
  const auto rot = [w](std::span<const double> in, std::span<double> out) {
    out[0] = -w * in[1];
    out[1] = w * in[0];
  };
  const auto est = stability_estimate(rot, 2, 9);
  CHECK(est.converged);
  CHECK_THAT(est.spectral_radius, WithinRel(w, 1e-10));
}

TEST_CASE("RK4 with a zero operator is the identity", "[rk4]") {
  const std::vector<double> a{1.0, -2.0, 3.5};
  const Rhs zero = [](double, std::span<const double>, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); };
  CHECK(step_rk4(a, zero, 0.3) == a);
  CHECK(kind_of([&] { step_rk4(a, zero, 0.0); }) == ErrorKind::invalid_argument);
}

TEST_CASE("RK4 reproduces the degree-4 Taylor polynomial on a scalar system", "[rk4]") {
  for (double lambda : {-2.0, -0.3, 0.7}) {
    const Rhs rhs = [lambda](double, std::span<const double> in, std::span<double> out) { out[0] = lambda * in[0]; };
    for (double dt : {0.01, 0.1, 0.5}) {
      const double z = lambda * dt;
      const double taylor = 1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0;
      const std::vector<double> a{1.0};
      CHECK_THAT(step_rk4(a, rhs, dt)[0], WithinAbs(taylor, 1e-15));
    }
  }
}

TEST_CASE("non-finite RK4 output raises a blowup at the step end time", "[rk4][errors]") {
  const Rhs bad = [](double t, std::span<const double>, std::span<double> out) {
    out[0] = t > 1.05 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
  };
  const std::vector<double> a{0.0};
  try {
    step_rk4(a, bad, 0.1, 1.0);
    FAIL("expected a blowup");
  } catch (const NumericalBlowup& e) {
    CHECK(e.kind() == ErrorKind::numerical_blowup);
    CHECK_THAT(e.time(), WithinAbs(1.1, 1e-12));
  }
}

TEST_CASE("coherent state rotates rigidly under the harmonic flow", "[evolve]") {
  const PhysicalParams pp;
  const auto initial = phase::gaussian_coherent_state(grid_j(7), 2.0, 0.0, 1.0, pp);
  EvolutionSchedule s;
  s.t_final = std::numbers::pi / 2.0;
  s.record_every = 5;
  const auto traj = evolve(initial, phase::harmonic_hamiltonian(), pp, moyal::RhsTerms::hamiltonian_only(), s);
  const auto [q, p] = centroid(traj.final_field);
  CHECK_THAT(q, WithinAbs(0.0, 0.02));
  CHECK_THAT(p, WithinAbs(-2.0, 0.02));
  CHECK(std::abs(traj.records.back().purity - traj.records.front().purity) <= 1e-3);
  CHECK(traj.max_mass_error <= kMassTolerance);
  CHECK(traj.dt <= traj.stability.dt_max * (1.0 + 1e-12));
  CHECK_THAT(traj.final_field.time, WithinAbs(s.t_final, 1e-12));
}

TEST_CASE("RK4 global order on the rotation system is four", "[evolve][order]") {
  // Richardson: e(dt) - e(dt/2) over e(dt/2) - e(dt/4) tends to 2^4.
  const PhysicalParams pp;
  const auto initial = phase::gaussian_coherent_state(grid_j(6), 2.0, 0.0, 1.0, pp);
  const auto h = phase::harmonic_hamiltonian();
  const auto terms = moyal::RhsTerms::hamiltonian_only();
  SolverOptions opts;
  const auto op = moyal::assemble_galerkin_operator(h, pp, terms, initial.grid, 3, opts.depth);
  const double base = stability_estimate(op).dt_max;
  std::vector<Grid2D> finals;
  for (int k : {1, 2, 4}) {
    EvolutionSchedule s;
    s.t_final = 2.0 * std::numbers::pi;
    s.dt = base / k;
    s.record_every = 1000000;
    s.renormalize = false;
    finals.push_back(evolve(initial, h, pp, terms, s, opts, &op).final_field.values);
  }
  const double coarse = l2_norm((finals[0] - finals[1]).flat());
  const double fine = l2_norm((finals[1] - finals[2]).flat());
  const double order = std::log2(coarse / fine);
  CAPTURE(order);
  CHECK(order >= 3.8);
}

TEST_CASE("diffusion kills cat fringes and leaves the lobes", "[evolve][decoherence]") {
  // Oracle: lobes separated by 6 sigma keep their momentum variance v0 + 2 D t, so
  // purity tends to 0.5 sqrt(v0 / (v0 + 2 D t)). The fringe cos(k p) under a Gaussian
  // envelope of variance v0 shrinks by exp(-k^2 v0 s / (2 (v0 + s))), s = 2 D t.
  PhysicalParams pp;
  pp.diffusion = 0.05;
  const auto initial = phase::cat_state(grid_j(7), 3.0, 1.0, pp);
  EvolutionSchedule s;
  s.t_final = 10.0;
  s.record_every = 5;
  SolverOptions opts;
  opts.scheme.scheme = moyal::DerivativeScheme::oracle;
  // Decoherence terms alone stand in for H = 0; the kinetic term is always part of H.
  const auto traj = evolve(initial, {}, pp, moyal::RhsTerms::decoherence_only(), s, opts);
  const double v0 = 0.5;
  const double expected = 0.5 * std::sqrt(v0 / (v0 + 2.0 * pp.diffusion * s.t_final));
  CHECK(traj.records.front().regime == phase::Regime::entangled_like);
  CHECK(traj.records.back().negativity_volume <= 1e-3);
  CHECK_THAT(traj.records.back().purity, WithinAbs(expected, 2e-3));
  const auto last = traj.records.back().regime;
  CHECK((last == phase::Regime::localized || last == phase::Regime::waveleton || last == phase::Regime::unclassified));
  // Both lobes persist: the q marginal keeps two peaks of equal height.
  const auto m = phase::marginals(traj.final_field);
  const auto& g = traj.final_field.grid;
  const auto at = [&](double q) { return m.position[static_cast<std::size_t>(std::lround((q - g.q_min) / g.dq()))]; };
  CHECK_THAT(at(3.0), WithinRel(at(-3.0), 1e-6));
  CHECK(at(0.0) < 1e-3 * at(3.0));
  // Purity never rises under decoherence.
  for (std::size_t k = 1; k < traj.records.size(); ++k) CHECK(traj.records[k].purity <= traj.records[k - 1].purity + 1e-3);
}

TEST_CASE("unitary quadratic dynamics keep purity over one period", "[evolve]") {
  const PhysicalParams pp;
  const auto initial = phase::gaussian_coherent_state(grid_j(6), 1.0, 1.0, 1.0, pp);
  EvolutionSchedule s;
  s.t_final = 2.0 * std::numbers::pi;
  s.record_every = 10;
  const auto traj = evolve(initial, phase::harmonic_hamiltonian(), pp, moyal::RhsTerms::hamiltonian_only(), s);
  for (const auto& r : traj.records) {
    CHECK(std::abs(r.purity - traj.records.front().purity) <= 2e-3);
    CHECK(r.purity <= 1.0 + 2e-3);
    CHECK(r.purity >= 0.0);
  }
}

TEST_CASE("evolution is deterministic", "[evolve]") {
  PhysicalParams pp;
  pp.gamma = 0.05;
  pp.diffusion = 0.1;
  const auto initial = phase::cat_state(grid_j(7), 2.0, 1.0, pp);
  EvolutionSchedule s;
  s.t_final = 0.5;
  const auto a = evolve(initial, phase::harmonic_hamiltonian(), pp, moyal::RhsTerms{}, s);
  const auto b = evolve(initial, phase::harmonic_hamiltonian(), pp, moyal::RhsTerms{}, s);
  CHECK(a.final_field.values == b.final_field.values);
  CHECK(a.dt == b.dt);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) CHECK(a.records[k].purity == b.records[k].purity);
}

TEST_CASE("Galerkin and oracle trajectories agree over a short harmonic run", "[evolve][oracle]") {
  PhysicalParams pp;
  pp.gamma = 0.1;
  pp.diffusion = 0.2;
  const auto initial = phase::gaussian_coherent_state(grid_j(7), 2.0, 0.0, 1.0, pp);
  EvolutionSchedule s;
  s.t_final = 1.0;
  s.record_every = 100;
  SolverOptions galerkin;
  SolverOptions oracle;
  oracle.scheme.scheme = moyal::DerivativeScheme::oracle;
  const auto h = phase::harmonic_hamiltonian();
  const auto a = evolve(initial, h, pp, moyal::RhsTerms{}, s, galerkin);
  const auto b = evolve(initial, h, pp, moyal::RhsTerms{}, s, oracle);
  CHECK(relative_l2(a.final_field.values, b.final_field.values) <= 2e-2);
}

TEST_CASE("a non-conserving operator aborts with a conservation violation", "[evolve][errors]") {
  const PhysicalParams pp;
  const auto initial = phase::gaussian_coherent_state(grid_j(5), 0.0, 0.0, 1.0, pp);
  auto op = moyal::assemble_galerkin_operator(phase::harmonic_hamiltonian(), pp, moyal::RhsTerms::hamiltonian_only(),
                                              initial.grid, 3, 4);
  // A uniform decay term removes mass at rate 0.01 per unit time.
  for (Eigen::Index k = 0; k < op.static_part.rows(); ++k) op.static_part.coeffRef(k, k) -= 0.01;
  EvolutionSchedule s;
  s.t_final = 1.0;
  s.dt = 0.05;
  CHECK(kind_of([&] {
          evolve(initial, phase::harmonic_hamiltonian(), pp, moyal::RhsTerms::hamiltonian_only(), s, {}, &op);
        }) == ErrorKind::conservation_violation);
}

TEST_CASE("evolve validates its inputs and warns on oversized steps", "[evolve][errors]") {
  const PhysicalParams pp;
  auto initial = phase::gaussian_coherent_state(grid_j(5), 0.0, 0.0, 1.0, pp);
  EvolutionSchedule s;
  s.t_final = 0.2;
  s.dt = 0.1;
  auto unnormalized = initial;
  unnormalized.values *= 2.0;
  CHECK(kind_of([&] { evolve(unnormalized, phase::harmonic_hamiltonian(), pp, moyal::RhsTerms{}, s); }) ==
        ErrorKind::invalid_argument);
  EvolutionSchedule bad = s;
  bad.record_every = 0;
  CHECK(kind_of([&] { evolve(initial, phase::harmonic_hamiltonian(), pp, moyal::RhsTerms{}, bad); }) ==
        ErrorKind::invalid_argument);

  const auto op = moyal::assemble_galerkin_operator(phase::harmonic_hamiltonian(), pp, moyal::RhsTerms::hamiltonian_only(),
                                                    initial.grid, 3, 4);
  EvolutionSchedule big = s;
  big.dt = 2.0 * stability_estimate(op).dt_max;
  big.t_final = big.dt;
  bool warned = false;
  try {
    const auto traj = evolve(initial, phase::harmonic_hamiltonian(), pp, moyal::RhsTerms::hamiltonian_only(), big, {}, &op);
    for (const auto& w : traj.warnings) warned = warned || w.find("exceeds the stability bound") != std::string::npos;
  } catch (const Error&) {
    warned = true;  // a single oversized step may also trip the drift guard; either way it is reported
  }
  CHECK(warned);
}

TEST_CASE("snapshot compression keeps the field normalized", "[evolve][compress]") {
  const PhysicalParams pp;
  const auto initial = phase::gaussian_coherent_state(grid_j(6), 1.0, 0.0, 1.0, pp);
  EvolutionSchedule s;
  s.t_final = 0.5;
  s.snapshot_every = 2;
  s.threshold_eps = 1e-4;
  const auto traj = evolve(initial, phase::harmonic_hamiltonian(), pp, moyal::RhsTerms::hamiltonian_only(), s);
  CHECK(traj.snapshots.size() >= 3);
  CHECK(traj.compression_kept_fraction < 1.0);
  for (const auto& w : traj.snapshots) CHECK_THAT(phase::norm(w), WithinAbs(1.0, 1e-12));
}

TEST_CASE("steady state of the damped oscillator is the thermal Gaussian", "[steady]") {
  PhysicalParams pp;
  pp.gamma = 0.1;
  pp.diffusion = 0.2;
  const auto g = grid_j(7);
  const auto h = phase::harmonic_hamiltonian();
  const auto op = moyal::assemble_galerkin_operator(h, pp, moyal::RhsTerms{}, g, 3, 4);
  const auto r = steady_state(op);
  CAPTURE(r.method, r.iterations, r.residual);
  CHECK(r.converged);
  CHECK(r.residual <= 1e-8);
  CHECK_THAT(phase::norm(r.field), WithinAbs(1.0, 1e-12));

  // Detailed balance: T = D / (2 gamma) = 1.
  const double temperature = pp.diffusion / (2.0 * pp.gamma);
  WignerField thermal = WignerField::zeros(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) thermal.values(i, j) = std::exp(-(0.5 * g.p(j) * g.p(j) + 0.5 * g.q(i) * g.q(i)) / temperature);
  }
  phase::normalize(thermal);
  CHECK(relative_l2(r.field.values, thermal.values) <= 5e-2);

  // Closed loop: 100 steps at the stability bound leave it in place.
  EvolutionSchedule s;
  const double dt = stability_estimate(op).dt_max;
  s.dt = dt;
  s.t_final = 100.0 * dt;
  s.record_every = 1000;
  const auto traj = evolve(r.field, h, pp, moyal::RhsTerms{}, s, {}, &op);
  CHECK(traj.steps == 100);
  CHECK(relative_l2(traj.final_field.values, r.field.values) <= 1e-4);
}

TEST_CASE("small systems take the dense path", "[steady]") {
  PhysicalParams pp;
  pp.gamma = 0.2;
  pp.diffusion = 0.2;
  const auto op = moyal::assemble_galerkin_operator(phase::harmonic_hamiltonian(), pp, moyal::RhsTerms{}, grid_j(6), 3, 4);
  const auto r = steady_state(op);
  CHECK(r.method == "dense-lu");
  CHECK(r.converged);
  for (double v : r.field.values.flat()) CHECK(v >= -1e-3 * 0.5);
}

TEST_CASE("degenerate steady-state inputs are rejected", "[steady][errors]") {
  PhysicalParams pp;
  pp.diffusion = 0.2;
  const auto g = grid_j(5);
  const auto no_friction = moyal::assemble_galerkin_operator(phase::harmonic_hamiltonian(), pp, moyal::RhsTerms{}, g, 3, 4);
  try {
    steady_state(no_friction);
    FAIL("expected a precondition error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precondition);
    CHECK(std::string(e.what()).find("gamma") != std::string::npos);
  }
  pp.gamma = 0.1;
  const auto partial =
      moyal::assemble_galerkin_operator(phase::harmonic_hamiltonian(), pp, moyal::RhsTerms::hamiltonian_only(), g, 3, 4);
  CHECK(kind_of([&] { steady_state(partial); }) == ErrorKind::precondition);
}

TEST_CASE("zero threshold leaves coefficients untouched", "[compress]") {
  const PhysicalParams pp;
  const auto w = phase::cat_state(grid_j(7), 2.0, 1.0, pp);
  const auto pyr = wavelet::dwt_2d(w.values, wavelet::daubechies_filter(3), 4);
  const auto c = threshold_compress(pyr, 0.0);
  CHECK(c.kept_fraction == 1.0);
  CHECK(c.relative_error == 0.0);
  CHECK(c.kept == c.total);
  CHECK(c.total == w.values.size());
  CHECK(kind_of([&] { threshold_compress(pyr, -1.0); }) == ErrorKind::invalid_argument);
}

TEST_CASE("reconstruction error is non-decreasing in the threshold", "[compress]") {
  const PhysicalParams pp;
  const auto w = phase::cat_state(grid_j(7), 3.0, 1.0, pp);
  const auto filter = wavelet::daubechies_filter(3);
  const auto pyr = wavelet::dwt_2d(w.values, filter, 4);
  double previous_error = 0.0;
  std::size_t previous_kept = pyr.bands.size() == 0 ? 0 : w.values.size();
  for (double eps : {1e-10, 1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 1e-1}) {
    const auto c = threshold_compress(pyr, eps);
    CHECK(c.relative_error >= previous_error);
    CHECK(c.kept <= previous_kept);
    // Orthogonality: the reported error equals the reconstruction error.
    const auto back = wavelet::inverse_dwt_2d(c.pyramid);
    CHECK_THAT(relative_l2(back, w.values), WithinAbs(c.relative_error, 1e-9));
    previous_error = c.relative_error;
    previous_kept = c.kept;
  }
}

TEST_CASE("coherent state keeps at most 5% of D6 coefficients at 1e-6", "[compress][known-gap]") {
  const PhysicalParams pp;
  const auto w = phase::gaussian_coherent_state(grid_j(7), 0.0, 0.0, 1.0, pp);
  const auto c = threshold_compress(wavelet::dwt_2d(w.values, wavelet::daubechies_filter(3), SolverOptions{}.depth), 1e-6);
  CAPTURE(c.kept_fraction, c.relative_error);
  CHECK(c.kept_fraction <= 0.05);
}
