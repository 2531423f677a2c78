#include "qbgk/config.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "qbgk/errors.hpp"

namespace qbgk {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail_line(int line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, int line, const std::string& key) {
  if (v.empty()) fail_line(line, "missing value for '" + key + "'");
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x))
    fail_line(line, "'" + key + "' expects a number, got '" + v + "'");
  return x;
}

long to_integer(const std::string& v, int line, const std::string& key) {
  char* end = nullptr;
  errno = 0;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
    fail_line(line, "'" + key + "' expects an integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  fail_line(line, "'" + key + "' expects true or false, got '" + v + "'");
}

Vec3 to_vec3(const std::string& v, int line, const std::string& key) {
  std::string s = v;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<std::string> parts;
  for (std::string t; in >> t;) parts.push_back(t);
  if (parts.size() != 3) fail_line(line, "'" + key + "' expects three components");
  return {to_double(parts[0], line, key), to_double(parts[1], line, key),
          to_double(parts[2], line, key)};
}

template <class F>
auto at_line(int line, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.rfind("line ", 0) == 0) throw;
    fail_line(line, what);
  }
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(const Vec3& v) { return fmt(v[0]) + ", " + fmt(v[1]) + ", " + fmt(v[2]); }

}  // namespace

SimConfig parse_config(std::string_view text) {
  SimConfig c;
  c.species.clear();
  std::map<std::size_t, SpeciesConfig> species;
  std::map<std::pair<std::size_t, std::size_t>, double> nu_pairs;
  std::string section;
  std::size_t current_species = 0;
  bool have_scenario = false;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string l = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (l.empty()) continue;
    if (l.front() == '[') {
      if (l.back() != ']') fail_line(line, "malformed section header '" + l + "'");
      section = trim(l.substr(1, l.size() - 2));
      if (section.rfind("species.", 0) == 0) {
        const long idx = to_integer(section.substr(8), line, "species index");
        if (idx < 1) fail_line(line, "species indices start at 1");
        current_species = static_cast<std::size_t>(idx);
        species[current_species];
      } else if (section != "time" && section != "space" && section != "output" &&
                 section != "solver") {
        fail_line(line, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = l.find('=');
    if (eq == std::string::npos) fail_line(line, "expected 'key = value', got '" + l + "'");
    const std::string key = trim(l.substr(0, eq));
    const std::string value = trim(l.substr(eq + 1));
    if (key.empty()) fail_line(line, "empty key");

    if (section.empty()) {
      if (key == "scenario") {
        c.scenario = value;
        have_scenario = !value.empty();
      } else if (key == "units") {
        c.units = value;
      } else if (key == "density_unit") {
        c.density_unit = to_double(value, line, key);
      } else if (key == "nu") {
        c.nu = to_double(value, line, key);
      } else if (key.rfind("nu.", 0) == 0) {
        const auto dot = key.find('.', 3);
        if (dot == std::string::npos) fail_line(line, "expected nu.k.j, got '" + key + "'");
        const long k = to_integer(key.substr(3, dot - 3), line, key);
        const long j = to_integer(key.substr(dot + 1), line, key);
        if (k < 1 || j < 1) fail_line(line, "species indices start at 1");
        nu_pairs[{static_cast<std::size_t>(k), static_cast<std::size_t>(j)}] =
            to_double(value, line, key);
      } else if (key == "grid") {
        c.grid_intervals = static_cast<int>(to_integer(value, line, key));
      } else {
        fail_line(line, "unknown key '" + key + "'");
      }
    } else if (section.rfind("species.", 0) == 0) {
      auto& s = species[current_species];
      if (key == "name") s.name = value;
      else if (key == "mass") s.mass = to_double(value, line, key);
      else if (key == "statistics") s.statistics = at_line(line, [&] { return statistics_from_string(value); });
      else if (key == "distribution") s.distribution = value;
      else if (key == "fugacity_scale") s.fugacity_scale = to_double(value, line, key);
      else if (key == "n") s.n = to_double(value, line, key);
      else if (key == "U") s.U = to_vec3(value, line, key);
      else if (key == "T") s.T = to_double(value, line, key);
      else if (key == "n_right") s.n_right = to_double(value, line, key);
      else if (key == "U_right") s.U_right = to_vec3(value, line, key);
      else if (key == "T_right") s.T_right = to_double(value, line, key);
      else if (key == "amplitude") s.amplitude = to_double(value, line, key);
      else fail_line(line, "unknown key '" + key + "' in [" + section + "]");
    } else if (section == "time") {
      if (key == "scheme") c.scheme_order = static_cast<int>(to_integer(value, line, key));
      else if (key == "dt") c.dt = value == "auto" ? 0.0 : to_double(value, line, key);
      else if (key == "cfl_number") c.cfl_number = to_double(value, line, key);
      else if (key == "t_end") c.t_end = to_double(value, line, key);
      else if (key == "positivity") c.positivity = at_line(line, [&] { return positivity_from_string(value); });
      else fail_line(line, "unknown key '" + key + "' in [time]");
    } else if (section == "space") {
      if (key == "homogeneous") c.homogeneous = to_bool(value, line, key);
      else if (key == "x_min") c.x_min = to_double(value, line, key);
      else if (key == "x_max") c.x_max = to_double(value, line, key);
      else if (key == "cells") {
        const long n = to_integer(value, line, key);
        if (n < 1) fail_line(line, "'cells' must be at least 1");
        c.cells = static_cast<std::size_t>(n);
      } else if (key == "boundary") c.boundary = at_line(line, [&] { return boundary_from_string(value); });
      else if (key == "flux_order") c.flux_order = static_cast<int>(to_integer(value, line, key));
      else if (key == "profile") c.profile = value;
      else if (key == "interface") c.interface = to_double(value, line, key);
      else fail_line(line, "unknown key '" + key + "' in [space]");
    } else if (section == "output") {
      if (key == "directory") c.output_dir = value;
      else if (key == "stride") {
        const long n = to_integer(value, line, key);
        if (n < 1) fail_line(line, "'stride' must be at least 1");
        c.stride = static_cast<std::size_t>(n);
      } else fail_line(line, "unknown key '" + key + "' in [output]");
    } else if (section == "solver") {
      if (key == "tolerance") c.solver.tolerance = to_double(value, line, key);
      else if (key == "max_iterations") c.solver.max_iterations = static_cast<int>(to_integer(value, line, key));
      else if (key == "max_halvings") c.solver.max_halvings = static_cast<int>(to_integer(value, line, key));
      else fail_line(line, "unknown key '" + key + "' in [solver]");
    }
  }

  if (!have_scenario) throw ConfigError("scenario required");
  std::size_t expected = 1;
  for (auto& [idx, s] : species) {
    if (idx != expected) throw ConfigError("species sections must be numbered 1.." + std::to_string(species.size()));
    if (s.name.empty()) s.name = std::to_string(idx);
    c.species.push_back(s);
    ++expected;
  }
  if (!nu_pairs.empty()) {
    const std::size_t S = c.species.size();
    c.nu_matrix.assign(S * S, c.nu);
    for (const auto& [kj, v] : nu_pairs) {
      if (kj.first > S || kj.second > S) throw ConfigError("nu." + std::to_string(kj.first) + "." + std::to_string(kj.second) + ": no such species");
      c.nu_matrix[(kj.first - 1) * S + (kj.second - 1)] = v;
      c.nu_matrix[(kj.second - 1) * S + (kj.first - 1)] = v;
    }
  }
  validate(c);
  return c;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const SimConfig& c) {
  auto need = [](bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError(field + ": " + what);
  };
  need(!c.scenario.empty(), "scenario", "scenario required");
  need(c.units == "dimensionless" || c.units == "sfe", "units", "must be dimensionless or sfe");
  need(c.density_unit > 0.0, "density_unit", "must be positive");
  need(!c.species.empty(), "species", "at least one [species.k] section is required");
  need(c.nu >= 0.0, "nu", "must be non-negative");
  need(c.grid_intervals >= 2, "grid", "needs at least 2 intervals");
  need(c.scheme_order == 1 || c.scheme_order == 2, "time.scheme", "must be 1 or 2");
  need(c.dt >= 0.0, "time.dt", "must be positive (or auto)");
  need(c.cfl_number > 0.0 && c.cfl_number <= 1.0, "time.cfl_number", "must lie in (0, 1]");
  need(c.t_end >= 0.0, "time.t_end", "must be non-negative");
  need(c.flux_order == 1 || c.flux_order == 2, "space.flux_order", "must be 1 or 2");
  need(c.profile == "uniform" || c.profile == "riemann" || c.profile == "sine", "space.profile",
       "must be uniform, riemann or sine");
  need(c.stride >= 1, "output.stride", "must be at least 1");
  need(c.solver.tolerance > 0.0, "solver.tolerance", "must be positive");
  need(c.solver.max_iterations > 0, "solver.max_iterations", "must be positive");
  if (c.homogeneous) {
    need(c.dt > 0.0, "time.dt", "auto needs a spatial mesh");
  } else {
    need(c.x_max > c.x_min, "space.x_max", "must exceed x_min");
    need(c.cells >= 1, "space.cells", "must be at least 1");
  }
  const std::size_t S = c.species.size();
  need(c.nu_matrix.empty() || c.nu_matrix.size() == S * S, "nu", "matrix size does not match species");
  for (double v : c.nu_matrix) need(v >= 0.0, "nu", "must be non-negative");
  for (std::size_t k = 0; k < S; ++k) {
    const auto& s = c.species[k];
    const std::string f = "species." + std::to_string(k + 1);
    need(s.mass > 0.0, f + ".mass", "must be positive");
    need(s.n > 0.0, f + ".n", "must be positive");
    need(s.T > 0.0, f + ".T", "must be positive");
    need(s.distribution == "maxwellian" || s.distribution == "fermi-dirac", f + ".distribution",
         "must be maxwellian or fermi-dirac");
    need(s.fugacity_scale > 0.0, f + ".fugacity_scale", "must be positive");
    need(std::abs(s.amplitude) < 1.0, f + ".amplitude", "must lie in (-1, 1)");
    if (!c.homogeneous && c.profile == "riemann") {
      need(s.n_right > 0.0, f + ".n_right", "riemann profile needs a positive right density");
      need(s.T_right > 0.0, f + ".T_right", "riemann profile needs a positive right temperature");
    }
  }
}

std::string format_config(const SimConfig& c) {
  std::ostringstream o;
  o << "scenario = " << c.scenario << "\n";
  o << "units = " << c.units << "\n";
  if (c.density_unit != 1.0) o << "density_unit = " << fmt(c.density_unit) << "\n";
  o << "nu = " << fmt(c.nu) << "\n";
  const std::size_t S = c.species.size();
  if (!c.nu_matrix.empty())
    for (std::size_t k = 0; k < S; ++k)
      for (std::size_t j = k; j < S; ++j)
        o << "nu." << k + 1 << "." << j + 1 << " = " << fmt(c.nu_matrix[k * S + j]) << "\n";
  o << "grid = " << c.grid_intervals << "\n";
  for (std::size_t k = 0; k < S; ++k) {
    const auto& s = c.species[k];
    o << "\n[species." << k + 1 << "]\n";
    o << "name = " << s.name << "\n";
    o << "mass = " << fmt(s.mass) << "\n";
    o << "statistics = " << to_string(s.statistics) << "\n";
    o << "distribution = " << s.distribution << "\n";
    if (s.fugacity_scale != 1.0) o << "fugacity_scale = " << fmt(s.fugacity_scale) << "\n";
    o << "n = " << fmt(s.n) << "\n";
    o << "U = " << fmt(s.U) << "\n";
    o << "T = " << fmt(s.T) << "\n";
    if (std::isfinite(s.n_right)) {
      o << "n_right = " << fmt(s.n_right) << "\n";
      o << "U_right = " << fmt(s.U_right) << "\n";
      o << "T_right = " << fmt(s.T_right) << "\n";
    }
    if (s.amplitude != 0.0) o << "amplitude = " << fmt(s.amplitude) << "\n";
  }
  o << "\n[time]\n";
  o << "scheme = " << c.scheme_order << "\n";
  o << "dt = " << (c.dt == 0.0 ? std::string("auto") : fmt(c.dt)) << "\n";
  o << "cfl_number = " << fmt(c.cfl_number) << "\n";
  o << "t_end = " << fmt(c.t_end) << "\n";
  o << "positivity = " << to_string(c.positivity) << "\n";
  o << "\n[space]\n";
  o << "homogeneous = " << (c.homogeneous ? "true" : "false") << "\n";
  o << "x_min = " << fmt(c.x_min) << "\n";
  o << "x_max = " << fmt(c.x_max) << "\n";
  o << "cells = " << c.cells << "\n";
  o << "boundary = " << to_string(c.boundary) << "\n";
  o << "flux_order = " << c.flux_order << "\n";
  o << "profile = " << c.profile << "\n";
  o << "interface = " << fmt(c.interface) << "\n";
  o << "\n[output]\n";
  o << "directory = " << c.output_dir << "\n";
  o << "stride = " << c.stride << "\n";
  o << "\n[solver]\n";
  o << "tolerance = " << fmt(c.solver.tolerance) << "\n";
  o << "max_iterations = " << c.solver.max_iterations << "\n";
  o << "max_halvings = " << c.solver.max_halvings << "\n";
  return o.str();
}

namespace sfe {

double sulfur_mass() { return (32.07 * kAtomicMassGram - 11.0 * kElectronMassGram) / kElectronMassGram; }
double fluorine_mass() { return (19.0 * kAtomicMassGram - 7.0 * kElectronMassGram) / kElectronMassGram; }

double electron_density(double scale, double theta) {
  const double pi32 = std::pow(std::numbers::pi, 1.5);
  auto g = [&](double y) { return eta_integrals(-std::log(y), Statistics::Fermion).first - y * pi32 / scale; };
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iterations = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(g, 1e-8, 50.0, tol, iterations);
  const double y = 0.5 * (lo + hi);
  return y * std::pow(2.0 * std::numbers::pi * theta, 1.5) / scale;
}

}  // namespace sfe

std::vector<std::string> preset_names() {
  return {"relaxation:ff", "relaxation:bb", "relaxation:fb", "relaxation:fc",
          "relaxation:cb", "relaxation:cc", "sfe-classical", "sfe-fermion", "sod"};
}

SimConfig scenario_preset(std::string_view name) {
  SimConfig c;
  c.scenario = std::string(name);
  if (name.rfind("relaxation:", 0) == 0) {
    const auto pair = name.substr(11);
    auto stat = [&](char ch) {
      switch (ch) {
        case 'f':
          return Statistics::Fermion;
        case 'b':
          return Statistics::Boson;
        case 'c':
          return Statistics::Classical;
      }
      throw ConfigError("unknown scenario '" + std::string(name) + "'");
    };
    if (pair.size() != 2) throw ConfigError("unknown scenario '" + std::string(name) + "'");
    const std::vector<std::string> known{"ff", "bb", "fb", "fc", "cb", "cc"};
    if (std::find(known.begin(), known.end(), std::string(pair)) == known.end())
      throw ConfigError("unknown scenario '" + std::string(name) + "'");
    SpeciesConfig s1;
    s1.name = "1";
    s1.mass = 1.0;
    s1.statistics = stat(pair[0]);
    s1.n = 1.0;
    s1.U = {0.5, 0.0, 0.0};
    s1.T = 1.0;
    SpeciesConfig s2;
    s2.name = "2";
    s2.mass = 1.5;
    s2.statistics = stat(pair[1]);
    s2.n = 1.2;
    s2.U = {0.1, 0.0, 0.0};
    s2.T = 0.5;
    c.species = {s1, s2};
    c.nu = 1.0;
    c.scheme_order = 1;
    c.dt = 0.01;
    c.t_end = 10.0;
    c.homogeneous = true;
    c.stride = 1;
  } else if (name == "sfe-classical" || name == "sfe-fermion") {
    c.units = "sfe";
    const double ne = sfe::electron_density();
    c.density_unit = sfe::kDensityElectron / ne;
    SpeciesConfig S, F, e;
    S.name = "S";
    S.mass = sfe::sulfur_mass();
    S.n = sfe::kDensitySulfur / c.density_unit;
    S.T = sfe::kIonTemperature;
    F.name = "F";
    F.mass = sfe::fluorine_mass();
    F.n = sfe::kDensityFluorine / c.density_unit;
    F.T = sfe::kIonTemperature;
    e.name = "e";
    e.mass = 1.0;
    e.n = ne;
    e.T = sfe::kThetaElectron;
    if (name == "sfe-fermion") {
      e.statistics = Statistics::Fermion;
      e.distribution = "fermi-dirac";
      e.fugacity_scale = sfe::kAlpha;
    }
    c.species = {S, F, e};
    c.nu = sfe::kNu;
    c.scheme_order = 2;
    c.dt = 0.1;
    c.t_end = 1000.0;
    c.homogeneous = true;
    c.stride = 10;
  } else if (name == "sod") {
    SpeciesConfig s;
    s.mass = 1.0;
    s.statistics = Statistics::Fermion;
    s.n = 1.0;
    s.T = 1.0;
    s.n_right = 0.125;
    s.T_right = 0.8;
    SpeciesConfig s1 = s, s2 = s;
    s1.name = "1";
    s2.name = "2";
    c.species = {s1, s2};
    c.nu = 2e4;
    c.scheme_order = 2;
    c.flux_order = 2;
    c.dt = 0.0;
    c.cfl_number = 0.9;
    c.t_end = 0.055;
    c.homogeneous = false;
    c.x_min = -0.5;
    c.x_max = 0.5;
    c.cells = 300;
    c.boundary = BoundaryMode::Copy;
    c.profile = "riemann";
    c.interface = 0.0;
    c.stride = 10;
  } else {
    throw ConfigError("unknown scenario '" + std::string(name) + "'");
  }
  validate(c);
  return c;
}

namespace {

struct CellState {
  double n;
  Vec3 U;
  double T;
};

CellState cell_state(const SimConfig& c, const SpeciesConfig& s, double x) {
  if (c.homogeneous || c.profile == "uniform") return {s.n, s.U, s.T};
  if (c.profile == "riemann") {
    if (x <= c.interface) return {s.n, s.U, s.T};
    return {s.n_right, s.U_right, s.T_right};
  }
  const double L = c.x_max - c.x_min;
  return {s.n * (1.0 + s.amplitude * std::sin(2.0 * std::numbers::pi * (x - c.x_min) / L)), s.U, s.T};
}

std::vector<double> cell_positions(const SimConfig& c) {
  if (c.homogeneous) return {0.0};
  SpatialMesh mesh{c.x_min, c.x_max, c.cells, c.boundary};
  std::vector<double> x(c.cells);
  for (std::size_t i = 0; i < c.cells; ++i) x[i] = mesh.center(i);
  return x;
}

Moments continuum_moments(const CellState& s, double mass) {
  const double u2 = s.U[0] * s.U[0] + s.U[1] * s.U[1] + s.U[2] * s.U[2];
  return {s.n, {mass * s.n * s.U[0], mass * s.n * s.U[1], mass * s.n * s.U[2]},
          1.5 * s.n * s.T + 0.5 * mass * s.n * u2};
}

}  // namespace

PhaseSpace build_phase_space(const SimConfig& c) {
  validate(c);
  const std::size_t S = c.species.size();
  PhaseSpace p;
  for (const auto& s : c.species) p.set.species.push_back({s.name, s.mass, s.statistics});
  p.set.nu = CollisionFrequencies::uniform(S, c.nu);
  if (!c.nu_matrix.empty()) p.set.nu.nu = c.nu_matrix;
  p.set.nu.validate();

  std::vector<double> masses;
  for (const auto& s : c.species) masses.push_back(s.mass);
  double T_max = 0.0;
  std::vector<Moments> domain(S);
  for (double x : cell_positions(c)) {
    std::vector<Moments> m(S);
    for (std::size_t k = 0; k < S; ++k) {
      m[k] = continuum_moments(cell_state(c, c.species[k], x), masses[k]);
      domain[k].n += m[k].n;
      for (int r = 0; r < 3; ++r) domain[k].P[r] += m[k].P[r];
    }
    T_max = std::max(T_max, mixture_temperature(m, masses));
  }
  const Vec3 u = mixture_velocity(domain, masses);
  for (std::size_t k = 0; k < S; ++k)
    p.grids.push_back(build_grid(masses[k], c.species[k].statistics, u, T_max, c.grid_intervals));
  p.cells = c.homogeneous ? 1 : c.cells;
  return p;
}

SimulationSetup build_setup(const SimConfig& c) {
  SimulationSetup s;
  s.phase = build_phase_space(c);
  s.mesh = {c.x_min, c.x_max, c.homogeneous ? 1 : c.cells, c.boundary};
  s.transport = !c.homogeneous;
  s.flux_order = c.flux_order;
  s.scheme = c.scheme_order == 1 ? Scheme::FirstOrder : Scheme::ARS222;
  s.solver = c.solver;
  s.positivity = c.positivity;
  return s;
}

Fields initial_fields(const SimConfig& c, const SimulationSetup& setup) {
  const auto& phase = setup.phase;
  const auto xs = cell_positions(c);
  Fields f(phase.species_count());
  for (std::size_t k = 0; k < phase.species_count(); ++k) {
    const auto& sc = c.species[k];
    const auto& grid = phase.grids[k];
    const std::size_t n = grid.size();
    f[k].resize(xs.size() * n);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const CellState st = cell_state(c, sc, xs[i]);
      std::vector<double> cell;
      if (sc.distribution == "maxwellian") {
        cell = sample_maxwellian(grid, st.n, st.U, st.T);
      } else {
        const double m = sc.mass;
        const double pre = std::pow(2.0 * std::numbers::pi * m * st.T, 1.5) / (sc.fugacity_scale * st.n);
        cell.resize(n);
        for (std::size_t q = 0; q < n; ++q) {
          const auto p = grid.node(q);
          double d2 = 0.0;
          for (int r = 0; r < 3; ++r) d2 += (p[r] - m * st.U[r]) * (p[r] - m * st.U[r]);
          cell[q] = 1.0 / (pre * std::exp(d2 / (2.0 * m * st.T)) + 1.0);
        }
      }
      if (sc.statistics == Statistics::Fermion)
        for (double v : cell)
          if (!(v < 1.0))
            throw ConfigError("species." + std::to_string(k + 1) +
                              ": initial fermion distribution reaches 1");
      std::copy(cell.begin(), cell.end(), f[k].begin() + static_cast<long>(i * n));
    }
  }
  return f;
}

double resolve_dt(const SimConfig& c, const Simulation& sim) {
  if (c.dt > 0.0) return c.dt;
  const double bound = sim.max_dt();
  if (!std::isfinite(bound)) throw ConfigError("time.dt: auto needs a spatial mesh");
  return c.cfl_number * bound;
}

}  // namespace qbgk
