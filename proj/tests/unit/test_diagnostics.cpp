#include <doctest.h>

#include <cmath>
#include <vector>

#include "qbgk/diagnostics.hpp"
#include "qbgk/errors.hpp"

using namespace qbgk;

namespace {

PhaseSpace one_species(Statistics s, int intervals = 8) {
  PhaseSpace p;
  p.set.species = {{"a", 1.0, s}};
  p.set.nu = CollisionFrequencies::uniform(1, 1.0);
  p.grids = {build_grid(1.0, s, {0, 0, 0}, 1.0, intervals)};
  return p;
}

const Moments kM1{1.0, {0.5, 0, 0}, 1.625};
const Moments kM2{1.2, {0.18, 0, 0}, 0.909};

}  // namespace

TEST_CASE("entropy of constant fields") {
  auto p = one_species(Statistics::Fermion);
  const double V = 1728.0;
  Fields half{std::vector<double>(p.grids[0].size(), 0.5)};
  CHECK(total_entropy(p, half, 1.0) == doctest::Approx(-V * std::log(2.0)).epsilon(1e-12));
  Fields zero{std::vector<double>(p.grids[0].size(), 0.0)};
  CHECK(total_entropy(p, zero, 1.0) == 0.0);
  // two cells of width 0.25
  p.cells = 2;
  Fields two{std::vector<double>(2 * p.grids[0].size(), 0.5)};
  CHECK(total_entropy(p, two, 0.25) == doctest::Approx(-0.5 * V * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("entropy domain errors name species, cell and node") {
  auto p = one_species(Statistics::Fermion);
  Fields f{std::vector<double>(p.grids[0].size(), 0.5)};
  f[0][17] = 1.0;
  try {
    total_entropy(p, f, 1.0);
    CHECK(false);
  } catch (const DomainError& e) {
    const std::string w = e.what();
    CHECK(w.find("species 1") != std::string::npos);
    CHECK(w.find("cell 0") != std::string::npos);
    CHECK(w.find("node 17") != std::string::npos);
  }
}

TEST_CASE("physical temperature") {
  const auto a = maxwellian_alpha(Moments{1.0, {0, 0, 0}, 1.5}, 1.0);
  CHECK(physical_temperature(a) == doctest::Approx(1.0));
  IntraAlpha bad;
  bad.a2 = 0.0;
  CHECK_THROWS_AS(physical_temperature(bad), DomainError);
}

TEST_CASE("classical species: physical equals kinetic temperature") {
  auto p = one_species(Statistics::Classical, 24);
  auto f = sample_maxwellian(p.grids[0], 0.9, {0.2, 0, 0}, 0.8);
  const auto m = compute_moments(f, p.grids[0]);
  const auto a = solve_intra(assemble_targets_intra(f, p.grids[0], 1.0), p.grids[0],
                             Statistics::Classical, 1.0);
  CHECK(physical_temperature(a) == doctest::Approx(kinetic_temperature(m, 1.0)).epsilon(1e-8));
  CHECK(kinetic_energy_per_particle(m, 1.0) == doctest::Approx(1.5 * kinetic_temperature(m, 1.0)));
}

TEST_CASE("analytic velocity gap") {
  for (double t : {0.0, 0.5, 2.0, 5.0}) {
    const auto g = analytic_velocity_gap(t, kM1, kM2, 1.0, 1.5, 1.0, 1.0);
    CHECK(g[0] == doctest::Approx(0.4 * std::exp(-t)).epsilon(1e-12));
    CHECK(g[1] == 0.0);
  }
  const Moments same{1.2, {0.6, 0, 0}, 1.0};
  CHECK(analytic_velocity_gap(3.0, kM1, same, 1.0, 1.0, 1.0, 1.0)[0] == doctest::Approx(0.0));
  // rate (nu12 N2 + nu21 N1)/(N1 + N2) with unequal frequencies
  const auto g = analytic_velocity_gap(1.0, kM1, kM2, 1.0, 1.5, 2.0, 0.5);
  CHECK(g[0] == doctest::Approx(0.4 * std::exp(-(2.0 * 1.8 + 0.5 * 1.0) / 2.8)));
}

TEST_CASE("analytic kinetic temperature gap") {
  // t = 0: the initial gap of E/n - |P|^2/(2nN), 1.5 (T1 - T2)
  CHECK(analytic_kinetic_temperature_gap(0.0, kM1, kM2, 1.0, 1.5, Statistics::Classical,
                                         Statistics::Classical, 1.0, {}) ==
        doctest::Approx(0.75));
  // classical-classical needs no history
  const double t = 2.0;
  const double e = std::exp(-t);
  const double N1 = 1.0, N2 = 1.8;
  const double expected = e * 0.75 + 0.5 * 1.5 * (1.2 * N2 - 1.0 * N1) / (2.8 * 2.8) * e * (1 - e) * 0.16;
  CHECK(analytic_kinetic_temperature_gap(t, kM1, kM2, 1.0, 1.5, Statistics::Classical,
                                         Statistics::Classical, 1.0, {}) ==
        doctest::Approx(expected).epsilon(1e-12));
  // quantum pairing without history
  CHECK_THROWS_AS(analytic_kinetic_temperature_gap(t, kM1, kM2, 1.0, 1.5, Statistics::Fermion,
                                                   Statistics::Fermion, 1.0, {}),
                  DomainError);
  const DuhamelSample partial[2] = {{0.0, 1.0, 1.0}, {1.0, 1.0, 1.0}};
  CHECK_THROWS_AS(analytic_kinetic_temperature_gap(t, kM1, kM2, 1.0, 1.5, Statistics::Fermion,
                                                   Statistics::Fermion, 1.0, partial),
                  DomainError);
}

TEST_CASE("equilibrium temperature") {
  const Moments S{1.0, {0, 0, 0}, 1.5 * 15.0};
  const Moments F{6.0, {0, 0, 0}, 1.5 * 6.0 * 15.0};
  const Moments el{53.0, {0, 0, 0}, 1.5 * 53.0 * 100.0};
  const Moments all[3] = {S, F, el};
  const double masses[3] = {58000.0, 34000.0, 1.0};
  CHECK(equilibrium_temperature(all, masses) == doctest::Approx(90.08333).epsilon(1e-6));
  const Moments one[1] = {kM1};
  const double m1[1] = {1.0};
  CHECK(equilibrium_temperature(one, m1) == doctest::Approx(1.0));
}

TEST_CASE("conservation drift") {
  ConservedTotals a{{1.0, 2.0}, {0.5, 0, 0}, 3.0, 1.0};
  auto b = a;
  CHECK(conservation_drift(a, b) == 0.0);
  b.n[1] = 2.0 * (1 + 1e-10);
  CHECK(conservation_drift(a, b) == doctest::Approx(1e-10).epsilon(1e-6));
  b = a;
  b.E = 3.3;
  CHECK(conservation_drift(a, b) == doctest::Approx(0.1));
}

TEST_CASE("recorder on a relaxation run") {
  SimulationSetup s;
  s.phase.set.species = {{"1", 1.0, Statistics::Fermion}, {"2", 1.5, Statistics::Fermion}};
  s.phase.set.nu = CollisionFrequencies::uniform(2, 1.0);
  const Vec3 u{0.68 / 2.8, 0, 0};
  s.phase.grids = {build_grid(1.0, Statistics::Fermion, u, 0.742857, 12),
                   build_grid(1.5, Statistics::Fermion, u, 0.742857, 12)};
  s.transport = false;
  Fields f{sample_maxwellian(s.phase.grids[0], 1.0, {0.5, 0, 0}, 1.0),
           sample_maxwellian(s.phase.grids[1], 1.2, {0.1, 0, 0}, 0.5)};
  Simulation sim(s, f);
  DiagnosticsRecorder rec;
  sim.run(0.2, 0.01, 2, [&](const Simulation& x) { rec.record(x); });
  const auto& r = rec.records();
  REQUIRE(r.size() == 11);
  for (std::size_t i = 1; i < r.size(); ++i) {
    CHECK(r[i].H < r[i - 1].H);
    CHECK(r[i].dHdt <= 0.0);
    CHECK(conservation_drift(r[0].totals, r[i].totals) < 1e-12);
  }
  CHECK(r[0].velocity_gap == doctest::Approx(0.4).epsilon(1e-4));
  CHECK(r[0].kinetic_gap == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(std::isfinite(r[0].theta_gap));
  REQUIRE(r[0].c_pairs.size() == 1);
  const auto h = rec.duhamel_history();
  CHECK(h.size() == r.size());
  CHECK(h.back().s == doctest::Approx(0.2));
}
