// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <thread>

#include <Eigen/Dense>

#include "wmr/wavelet/cascade.hpp"
#include "wmr/wavelet/connection.hpp"
#include "wmr/wavelet/filter.hpp"
#include "wmr/wavelet/packet.hpp"
#include "wmr/wavelet/transform.hpp"

using namespace wmr;
using namespace wmr::wavelet;
using Catch::Matchers::WithinAbs;

namespace {

Grid2D random_field(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  Grid2D g(n, n);
  for (double& v : g.flat()) v = d(rng);
  return g;
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

TEST_CASE("every supported Daubechies filter is orthonormal with sqrt2 sum", "[filter]") {
  for (int n = kMinOrder; n <= kMaxOrder; ++n) {
    const auto f = daubechies_filter(n);
    REQUIRE(f.length() == static_cast<std::size_t>(2 * n));
    double sum = 0.0;
    for (double h : f.low_pass) sum += h;
    CHECK_THAT(sum, WithinAbs(std::numbers::sqrt2, 1e-12));
    for (int m = 0; m < n; ++m) {
      double acc = 0.0;
      for (std::size_t k = 0; k + 2 * m < f.length(); ++k) acc += f.low_pass[k] * f.low_pass[k + 2 * m];
      CHECK_THAT(acc, WithinAbs(m == 0 ? 1.0 : 0.0, 1e-12));
    }
    for (std::size_t k = 0; k < f.length(); ++k) {
      const double sign = k % 2 == 0 ? 1.0 : -1.0;
      CHECK(f.high_pass[k] == sign * f.low_pass[f.length() - 1 - k]);
    }
  }
}

TEST_CASE("Haar and D4 taps match their closed forms", "[filter]") {
  const auto haar = daubechies_filter(1);
  CHECK_THAT(haar.low_pass[0], WithinAbs(1.0 / std::numbers::sqrt2, 1e-15));
  CHECK_THAT(haar.low_pass[1], WithinAbs(1.0 / std::numbers::sqrt2, 1e-15));

  // Oracle: the unique minimum-phase solution of orthonormality plus two vanishing moments.
  const double s3 = std::sqrt(3.0);
  const double d = 4.0 * std::numbers::sqrt2;
  const double oracle[] = {(1 + s3) / d, (3 + s3) / d, (3 - s3) / d, (1 - s3) / d};
  const double frozen[] = {0.4829629131, 0.8365163037, 0.2241438680, -0.1294095226};
  const auto d4 = daubechies_filter(2);
  for (int k = 0; k < 4; ++k) {
    CHECK_THAT(d4.low_pass[k], WithinAbs(oracle[k], 1e-14));
    CHECK_THAT(d4.low_pass[k], WithinAbs(frozen[k], 1e-10));
  }
}

TEST_CASE("filter order outside [1, 10] is rejected", "[filter]") {
  CHECK(kind_of([] { daubechies_filter(11); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([] { daubechies_filter(0); }) == ErrorKind::invalid_argument);
}

TEST_CASE("filter and connection caches are safe under concurrent first use", "[filter][connection]") {
  std::vector<std::thread> threads;
  std::vector<ConnectionTable> tables(8);
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] { tables[static_cast<std::size_t>(t)] = connection_coefficients(daubechies_filter(7), 2); });
  }
  for (auto& t : threads) t.join();
  for (const auto& t : tables) CHECK(t.values == tables.front().values);
}

TEST_CASE("cascade reproduces the Haar indicator", "[cascade]") {
  const auto s = cascade_evaluate(daubechies_filter(1), 6);
  for (long j = 0; j < 64; ++j) CHECK_THAT(s.at(j), WithinAbs(1.0, 1e-12));
  CHECK(s.at(64) == 0.0);
}

TEST_CASE("D4 scaling function at x = 1 matches the refinement eigenvector", "[cascade]") {
  // Oracle: phi at integers solves phi(i) = sqrt2 sum_j h_{2i-j} phi(j), normalized to sum 1.
  const auto f = daubechies_filter(2);
  Eigen::Matrix2d m;
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      const int k = 2 * i - j;
      m(i - 1, j - 1) = k >= 0 && k < 4 ? std::numbers::sqrt2 * f.low_pass[static_cast<std::size_t>(k)] : 0.0;
    }
  }
  Eigen::EigenSolver<Eigen::Matrix2d> es(m);
  int idx = std::abs(es.eigenvalues()[0].real() - 1.0) < std::abs(es.eigenvalues()[1].real() - 1.0) ? 0 : 1;
  Eigen::Vector2d v = es.eigenvectors().col(idx).real();
  v /= v.sum();

  const auto s = cascade_evaluate(f, 10);
  CHECK_THAT(s.at(1024), WithinAbs(v[0], kCascadeTolerance));
  CHECK_THAT(s.at(1024), WithinAbs(1.36603, 1e-5));
}

TEST_CASE("cascade satisfies the two-scale relation, unit integral and partition of unity", "[cascade]") {
  for (int order : {2, 3, 4, 6}) {
    const auto s = cascade_evaluate(daubechies_filter(order), 10);
    CHECK(s.residual < 1e-8);
    double integral = 0.0;
    for (std::size_t k = 0; k + 1 < s.values.size(); ++k) integral += 0.5 * (s.values[k] + s.values[k + 1]) * s.spacing();
    CHECK_THAT(integral, WithinAbs(1.0, 1e-6));
    const long per = static_cast<long>(s.per_unit());
    for (long j = 1; j < per; j += 37) {
      double sum = 0.0;
      for (long shift = -2 * order; shift <= 2 * order; ++shift) sum += s.at(j + shift * per);
      CHECK_THAT(sum, WithinAbs(1.0, 1e-6));
    }
  }
}

TEST_CASE("two-scale residual shrinks with refinement", "[cascade]") {
  const auto f = daubechies_filter(3);
  const double coarse = cascade_evaluate(f, 4).residual;
  const double fine = cascade_evaluate(f, 10).residual;
  CHECK(fine <= coarse + 1e-12);
  CHECK(fine < 1e-8);
}

TEST_CASE("connection coefficients satisfy support, parity and moment identities", "[connection]") {
  for (int n = 2; n <= kMaxOrder; ++n) {
    for (int d = 1; d < n && d <= 4; ++d) {
      const auto t = connection_coefficients(daubechies_filter(n), d);
      CAPTURE(n, d);
      CHECK(t.support_radius == 2 * n - 2);
      CHECK(t(2 * n - 1) == 0.0);
      CHECK(t(-(2 * n - 1)) == 0.0);
      double s0 = 0.0, s1 = 0.0, s2 = 0.0;
      for (int k = -t.support_radius; k <= t.support_radius; ++k) {
        CHECK_THAT(t(-k), WithinAbs((d % 2 == 0 ? 1.0 : -1.0) * t(k), 1e-10));
        s0 += t(k);
        s1 += k * t(k);
        s2 += double(k) * k * t(k);
      }
      CHECK_THAT(s0, WithinAbs(0.0, 1e-10));
      if (d == 1) CHECK_THAT(s1, WithinAbs(-1.0, 1e-10));
      if (d == 2) CHECK_THAT(s2, WithinAbs(2.0, 1e-10));
    }
  }
}

TEST_CASE("first-derivative connection coefficients agree with cascade quadrature", "[connection]") {
  // Oracle: Gamma_k = int phi(x) phi'(x + k) dx with phi sampled by the cascade and phi'
  // by central differences; independent of the eigenproblem used in the library.
  const auto f = daubechies_filter(4);
  const auto s = cascade_evaluate(f, 12);
  const long per = static_cast<long>(s.per_unit());
  const double h = s.spacing();
  const auto t = connection_coefficients(f, 1);
  for (int k = -t.support_radius; k <= t.support_radius; ++k) {
    double acc = 0.0;
    for (long j = 0; j < static_cast<long>(s.values.size()); ++j) {
      const long at = j + k * per;
      acc += s.at(j) * (s.at(at + 1) - s.at(at - 1)) / (2.0 * h) * h;
    }
    CAPTURE(k);
    CHECK_THAT(acc, WithinAbs(t(k), 2e-4));
  }
}

TEST_CASE("Haar has no derivative connection table", "[connection]") {
  CHECK(kind_of([] { connection_coefficients(daubechies_filter(1), 1); }) == ErrorKind::unsupported_order);
  CHECK(kind_of([] { connection_coefficients(daubechies_filter(3), 3); }) == ErrorKind::unsupported_order);
}

TEST_CASE("connection table exports as k,gamma_k CSV", "[connection]") {
  const auto path = std::filesystem::temp_directory_path() / "wmr_connection_test.csv";
  const auto t = connection_coefficients(daubechies_filter(3), 1);
  write_connection_csv(t, path.string());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "k,gamma_k");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 2 * t.support_radius + 1);
  std::filesystem::remove(path);
}

TEST_CASE("Haar transform of a constant field has zero detail bands", "[transform]") {
  Grid2D g(32, 32, 2.5);
  const auto pyr = dwt_2d(g, daubechies_filter(1), 5);
  for (const auto& [key, band] : pyr.bands) {
    if (key.direction == Direction::approx) continue;
    for (double c : band.flat()) CHECK(c == 0.0);
  }
}

TEST_CASE("dwt_2d round-trips and preserves energy", "[transform]") {
  std::mt19937_64 rng(7);
  for (int order : {1, 3, 6, 10}) {
    for (int levels : {1, 3, 6}) {
      const auto g = random_field(64, rng);
      const auto pyr = dwt_2d(g, daubechies_filter(order), levels);
      CHECK(pyr.coefficient_count() == 64 * 64);
      CHECK(relative_l2(inverse_dwt_2d(pyr), g) < 1e-10);
      CHECK_THAT(pyr.energy() / sum_squares(g.flat()), WithinAbs(1.0, 1e-10));
    }
  }
}

TEST_CASE("an injected fine-scale wavelet is recovered as one coefficient", "[transform]") {
  const auto f = daubechies_filter(3);
  auto pyr = dwt_2d(Grid2D(32, 32, 0.0), f, 3);
  const BandKey key{4, 3, Direction::diagonal};
  REQUIRE(pyr.bands.count(key) == 1);
  pyr.bands.at(key)(5, 9) = 1.0;
  const auto back = dwt_2d(inverse_dwt_2d(pyr), f, 3);
  std::size_t nonzero = 0;
  for (const auto& [k, band] : back.bands) {
    for (double c : band.flat()) nonzero += std::abs(c) > 1e-12;
  }
  CHECK(nonzero == 1);
  CHECK_THAT(back.bands.at(key)(5, 9), WithinAbs(1.0, 1e-12));
}

TEST_CASE("non-dyadic fields are rejected", "[transform]") {
  CHECK(kind_of([] { dwt_2d(Grid2D(24, 24, 0.0), daubechies_filter(2), 1); }) == ErrorKind::invalid_argument);
}

TEST_CASE("Shannon entropy of simple distributions", "[entropy]") {
  const std::vector<double> one{0.0, 3.0, 0.0};
  CHECK(shannon_entropy(one) == 0.0);
  const std::vector<double> flat(16, -2.0);
  CHECK_THAT(shannon_entropy(flat), WithinAbs(std::log(16.0), 1e-14));
  const std::vector<double> pair{3.0, 4.0};
  CHECK_THAT(shannon_entropy(pair), WithinAbs(-(9.0 / 25) * std::log(9.0 / 25) - (16.0 / 25) * std::log(16.0 / 25), 1e-15));
  const std::vector<double> zero(4, 0.0);
  CHECK(kind_of([&] { shannon_entropy(zero); }) == ErrorKind::invalid_argument);
}

TEST_CASE("best basis never loses to the standard or full-packet basis", "[packet]") {
  std::mt19937_64 rng(11);
  const auto f = daubechies_filter(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = random_field(32, rng);
    // Mix in smooth structure so the trees differ between trials.
    for (std::size_t i = 0; i < 32; ++i) {
      for (std::size_t j = 0; j < 32; ++j) g(i, j) += (trial % 7) * std::cos(0.3 * trial * i) * std::sin(0.2 * j);
    }
    const auto best = best_basis(g, f, 3);
    const double hb = shannon_entropy(best.coefficients.flatten());
    const double hs = shannon_entropy(dwt_2d(g, f, 3).flatten());
    CHECK(hb <= hs + 1e-12);
    CHECK(best.tree.tiles_exactly());
    CHECK_THAT(best.coefficients.energy() / sum_squares(g.flat()), WithinAbs(1.0, 1e-10));
  }
}

TEST_CASE("best basis of a coarse scaling function has zero entropy", "[packet]") {
  const auto f = daubechies_filter(2);
  auto pyr = dwt_2d(Grid2D(32, 32, 0.0), f, 3);
  pyr.bands.at({2, 0, Direction::approx})(1, 2) = 1.0;
  const auto best = best_basis(inverse_dwt_2d(pyr), f, 3);
  CHECK_THAT(shannon_entropy(best.coefficients.flatten()), WithinAbs(0.0, 1e-9));
}

TEST_CASE("best basis concentrates a band-aligned sinusoid", "[packet]") {
  const std::size_t n = 64;
  const auto f = daubechies_filter(8);
  Grid2D g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) g(i, j) = std::cos(2.0 * std::numbers::pi * 10.0 * i / n) * std::cos(2.0 * std::numbers::pi * 10.0 * j / n);
  }
  const auto best = best_basis(g, f, 3);
  std::vector<double> energies;
  for (const auto& [key, band] : best.coefficients.bands) energies.push_back(sum_squares(band.flat()));
  std::sort(energies.rbegin(), energies.rend());
  const double total = sum_squares(g.flat());
  const double top2 = energies[0] + (energies.size() > 1 ? energies[1] : 0.0);
  CHECK(top2 / total >= 0.9);
  CHECK(best.tree.tiles_exactly());
}

TEST_CASE("standard tree tiles the packet index range", "[packet]") {
  for (int levels = 1; levels <= 4; ++levels) CHECK(standard_tree(levels).tiles_exactly());
  BasisTree broken = standard_tree(2);
  broken.leaves.pop_back();
  CHECK_FALSE(broken.tiles_exactly());
}
