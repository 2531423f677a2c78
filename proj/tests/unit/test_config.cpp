#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qbgk/config.hpp"
#include "qbgk/errors.hpp"
#include "qbgk/io.hpp"

using namespace qbgk;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

const char* kMinimal = R"(scenario = mine
nu = 0.5
[species.1]
mass = 2
statistics = fermion
n = 0.7
U = 0.1, 0, 0
T = 1.5
[time]
dt = 0.02
t_end = 1
)";

}  // namespace

TEST_CASE("empty text needs a scenario") {
  CHECK(error_of("") == "scenario required");
  CHECK(error_of("# only a comment\n") == "scenario required");
}

TEST_CASE("parse a minimal config") {
  const auto c = parse_config(kMinimal);
  CHECK(c.scenario == "mine");
  REQUIRE(c.species.size() == 1);
  CHECK(c.species[0].mass == 2.0);
  CHECK(c.species[0].statistics == Statistics::Fermion);
  CHECK(c.species[0].U[0] == 0.1);
  CHECK(c.dt == 0.02);
  CHECK(c.grid_intervals == 48);
  CHECK(c.homogeneous);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK(error_of("scenario = x\nbogus = 1\n").find("line 2") != std::string::npos);
  CHECK(error_of("scenario = x\nbogus = 1\n").find("bogus") != std::string::npos);
  CHECK(error_of("scenario = x\n[nowhere]\n").find("line 2") != std::string::npos);
  CHECK(error_of("scenario = x\n[species.1]\nmass = heavy\n").find("line 3") != std::string::npos);
  CHECK(error_of("scenario = x\njust words\n").find("line 2") != std::string::npos);
  CHECK(error_of("scenario = x\n[species.1]\nstatistics = anyon\n").find("line 3") != std::string::npos);
}

TEST_CASE("validation errors name the field") {
  std::string text = kMinimal;
  text.replace(text.find("mass = 2"), 8, "mass = -1");
  CHECK(error_of(text).find("species.1.mass") != std::string::npos);
  text = kMinimal;
  text.replace(text.find("T = 1.5"), 7, "T = 0");
  CHECK(error_of(text).find("species.1.T") != std::string::npos);
  CHECK(error_of(std::string(kMinimal) + "[time]\nscheme = 3\n").find("time.scheme") != std::string::npos);
  CHECK(error_of("scenario = x\n").find("species") != std::string::npos);
}

TEST_CASE("nu matrix entries are symmetric") {
  const auto c = parse_config(std::string(kMinimal) +
                              "[species.2]\nmass = 1\nn = 1\nT = 1\n");
  CHECK(c.nu_matrix.empty());
  const auto d = parse_config("nu.1.2 = 3\n" + std::string(kMinimal) +
                              "[species.2]\nmass = 1\nn = 1\nT = 1\n");
  REQUIRE(d.nu_matrix.size() == 4);
  CHECK(d.nu_matrix[1] == 3.0);
  CHECK(d.nu_matrix[2] == 3.0);
  CHECK(d.nu_matrix[0] == 0.5);
}

TEST_CASE("relaxation presets carry the published parameters") {
  for (const char* pair : {"ff", "bb", "fb", "fc", "cb", "cc"}) {
    const auto c = scenario_preset(std::string("relaxation:") + pair);
    REQUIRE(c.species.size() == 2);
    CHECK(c.species[0].mass == 1.0);
    CHECK(c.species[0].n == 1.0);
    CHECK(c.species[0].U[0] == 0.5);
    CHECK(c.species[0].T == 1.0);
    CHECK(c.species[1].mass == 1.5);
    CHECK(c.species[1].n == 1.2);
    CHECK(c.species[1].U[0] == 0.1);
    CHECK(c.species[1].T == 0.5);
    CHECK(c.nu == 1.0);
    CHECK(c.dt == 0.01);
    CHECK(c.scheme_order == 1);
    CHECK(c.grid_intervals == 48);
  }
  const auto ff = scenario_preset("relaxation:ff");
  CHECK(ff.species[0].statistics == Statistics::Fermion);
  CHECK(ff.species[1].statistics == Statistics::Fermion);
  const auto fc = scenario_preset("relaxation:fc");
  CHECK(fc.species[1].statistics == Statistics::Classical);
  CHECK_THROWS_AS(scenario_preset("relaxation:xx"), ConfigError);
  CHECK_THROWS_AS(scenario_preset("nope"), ConfigError);
}

TEST_CASE("sod and sfe presets") {
  const auto s = scenario_preset("sod");
  CHECK(s.nu == 2e4);
  CHECK(s.cells == 300);
  CHECK(s.t_end == 0.055);
  CHECK(s.scheme_order == 2);
  CHECK(s.flux_order == 2);
  CHECK(s.species[0].n_right == 0.125);
  CHECK(s.species[0].T_right == 0.8);

  const auto f = scenario_preset("sfe-fermion");
  REQUIRE(f.species.size() == 3);
  CHECK(f.nu == 0.00753);
  CHECK(f.dt == 0.1);
  CHECK(f.scheme_order == 2);
  CHECK(f.species[0].mass == doctest::Approx((32.07 * 1.6605e-24 - 11 * 9.11e-28) / 9.11e-28));
  CHECK(f.species[1].mass == doctest::Approx((19.0 * 1.6605e-24 - 7 * 9.11e-28) / 9.11e-28));
  CHECK(f.species[0].T == 15.0);
  CHECK(f.species[2].T == 100.0);
  CHECK(f.species[2].fugacity_scale == 1.061711634);
  CHECK(f.species[2].distribution == "fermi-dirac");
  CHECK(f.species[1].n / f.species[0].n == doctest::Approx(6.0));
  CHECK(f.species[2].n / f.species[0].n == doctest::Approx(53.0));
  CHECK(f.species[2].n * f.density_unit == doctest::Approx(53e19));
  const auto c = scenario_preset("sfe-classical");
  CHECK(c.species[2].statistics == Statistics::Classical);
}

TEST_CASE("scaled Fermi-Dirac electrons integrate to the nominal density") {
  auto c = scenario_preset("sfe-fermion");
  c.grid_intervals = 32;
  const auto setup = build_setup(c);
  const auto f = initial_fields(c, setup);
  const auto m = compute_moments(f[2], setup.phase.grids[2]);
  CHECK(m.n == doctest::Approx(c.species[2].n).epsilon(1e-6));
  // the classical Maxwellian with the same (n, T) and the density unit agree
  const double y = c.species[2].n * 1.061711634 / std::pow(2 * 3.14159265358979 * 100.0, 1.5);
  CHECK(eta_integrals(-std::log(y), Statistics::Fermion).first ==
        doctest::Approx(y * std::pow(3.14159265358979, 1.5) / 1.061711634).epsilon(1e-10));
}

TEST_CASE("format and parse round trip") {
  for (const auto& name : preset_names()) {
    const auto a = scenario_preset(name);
    const auto b = parse_config(format_config(a));
    CHECK(format_config(b) == format_config(a));
    CHECK(b.species.size() == a.species.size());
    CHECK(b.dt == a.dt);
    CHECK(b.nu == a.nu);
    for (std::size_t k = 0; k < a.species.size(); ++k) {
      CHECK(b.species[k].mass == a.species[k].mass);
      CHECK(b.species[k].n == a.species[k].n);
    }
  }
}

TEST_CASE("initial fields and setup") {
  auto c = scenario_preset("sod");
  c.grid_intervals = 16;
  c.cells = 10;
  const auto setup = build_setup(c);
  CHECK(setup.phase.cells == 10);
  CHECK(setup.transport);
  CHECK(setup.mesh.boundary == BoundaryMode::Copy);
  const auto f = initial_fields(c, setup);
  const auto& g = setup.phase.grids[0];
  const auto left = compute_moments(std::span<const double>(f[0]).subspan(0, g.size()), g);
  const auto right = compute_moments(std::span<const double>(f[0]).subspan(9 * g.size(), g.size()), g);
  CHECK(left.n / right.n == doctest::Approx(8.0).epsilon(1e-3));

  auto bad = scenario_preset("relaxation:ff");
  bad.species[0].n = 50.0;
  bad.grid_intervals = 8;
  const auto s2 = build_setup(bad);
  CHECK_THROWS_AS(initial_fields(bad, s2), ConfigError);
}

TEST_CASE("auto time step follows the CFL bound") {
  auto c = scenario_preset("sod");
  c.grid_intervals = 6;
  c.cells = 20;
  const auto setup = build_setup(c);
  Simulation sim(setup, initial_fields(c, setup));
  CHECK(resolve_dt(c, sim) == doctest::Approx(0.9 * sim.max_dt()));
  c.dt = 1e-4;
  CHECK(resolve_dt(c, sim) == 1e-4);
}

TEST_CASE("series CSV") {
  SimulationSetup s;
  s.phase.set.species = {{"1", 1.0, Statistics::Classical}, {"2", 1.5, Statistics::Classical}};
  s.phase.set.nu = CollisionFrequencies::uniform(2, 1.0);
  const auto h = series_header(s.phase);
  CHECK(h.front() == "t");
  CHECK(h[1] == "n_1");
  CHECK(h[6] == "theta_1");
  CHECK(h.back() == "c21_1_2");
  CHECK(h.size() == 1 + 12 + 9 + 2);

  const auto path = (std::filesystem::temp_directory_path() / "qbgk_series_test.csv").string();
  write_series({}, s.phase, path);
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 1);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(write_series({}, s.phase, "/nonexistent/dir/x.csv"), IoError);
  CHECK(format_number(0.1) == "1.0000000000000001e-01");
}
