#include "qbgk/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "qbgk/diagnostics.hpp"
#include "qbgk/errors.hpp"

namespace qbgk {

ButcherPair ButcherPair::ars222() {
  ButcherPair b;
  b.gamma = 1.0 - std::sqrt(2.0) / 2.0;
  b.delta = 1.0 - 1.0 / (2.0 * b.gamma);
  const double g = b.gamma;
  const double d = b.delta;
  b.A_implicit = {{{0.0, 0.0, 0.0}, {0.0, g, 0.0}, {0.0, 1.0 - g, g}}};
  b.b_implicit = {0.0, 1.0 - g, g};
  b.A_explicit = {{{0.0, 0.0, 0.0}, {g, 0.0, 0.0}, {d, 1.0 - d, 0.0}}};
  b.b_explicit = {d, 1.0 - d, 0.0};
  b.c = {0.0, g, 1.0};
  return b;
}

bool ButcherPair::consistent(double tol) const {
  for (std::size_t i = 0; i < 3; ++i) {
    double si = 0.0, se = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      si += A_implicit[i][j];
      se += A_explicit[i][j];
    }
    if (std::abs(si - c[i]) > tol || std::abs(se - c[i]) > tol) return false;
  }
  return true;
}

bool ButcherPair::globally_stiffly_accurate() const {
  return b_implicit == A_implicit[2] && b_explicit == A_explicit[2];
}

std::string_view to_string(PositivityPolicy p) {
  switch (p) {
    case PositivityPolicy::Monitor:
      return "monitor";
    case PositivityPolicy::Clamp:
      return "clamp";
    case PositivityPolicy::Strict:
      return "strict";
  }
  return "monitor";
}

PositivityPolicy positivity_from_string(std::string_view name) {
  if (name == "monitor") return PositivityPolicy::Monitor;
  if (name == "clamp") return PositivityPolicy::Clamp;
  if (name == "strict") return PositivityPolicy::Strict;
  throw ConfigError("unknown positivity policy '" + std::string(name) + "'");
}

PositivityReport check_positivity(const PhaseSpace& phase, const Fields& f) {
  PositivityReport r;
  r.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < phase.species_count(); ++k) {
    const bool fermion = phase.set.species[k].statistics == Statistics::Fermion;
    for (double v : f[k]) {
      r.min_value = std::min(r.min_value, v);
      if (v < 0.0) ++r.negative_nodes;
      if (fermion) {
        r.max_fermion = std::max(r.max_fermion, v);
        if (!(v < 1.0)) ++r.fermion_violations;
      }
    }
  }
  return r;
}

Simulation::Simulation(SimulationSetup setup, Fields initial) : setup_(std::move(setup)) {
  auto& phase = setup_.phase;
  const std::size_t S = phase.species_count();
  if (S == 0) throw ConfigError("simulation needs at least one species");
  if (phase.grids.size() != S) throw ConfigError("one momentum grid per species is required");
  phase.set.nu.validate();
  if (phase.set.nu.S != S) throw ConfigError("collision frequencies do not match the species count");
  if (setup_.transport) {
    if (setup_.mesh.cells == 0) throw ConfigError("spatial mesh needs at least one cell");
    if (!(setup_.mesh.x_max > setup_.mesh.x_min)) throw ConfigError("spatial mesh needs x_max > x_min");
    phase.cells = setup_.mesh.cells;
    if (setup_.flux_order != 1 && setup_.flux_order != 2)
      throw ConfigError("flux order must be 1 or 2");
  } else {
    phase.cells = 1;
  }
  if (initial.size() != S) throw ConfigError("initial data needs one field per species");
  for (std::size_t k = 0; k < S; ++k)
    if (initial[k].size() != phase.field_size(k))
      throw ConfigError("initial field of species " + std::to_string(k + 1) + " has the wrong size");
  state_.f = std::move(initial);
  state_.alphas.resize(phase.cells);
  state_.outflow.assign(S, std::array<double, 5>{});
  positivity_ = check_positivity(phase, state_.f);
  worst_ = positivity_;
  if (!positivity_.ok())
    throw InvariantViolation("initial data is negative or violates the fermion bound");
}

double Simulation::max_dt() const {
  if (!setup_.transport) return std::numeric_limits<double>::infinity();
  return cfl_max_dt(setup_.phase.grids, setup_.mesh, setup_.flux_order);
}

void Simulation::check_dt(double dt) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time step must be positive");
  const double limit = max_dt();
  if (dt > limit * (1.0 + 1e-12))
    throw ConfigError("time step " + std::to_string(dt) + " violates the CFL bound " +
                      std::to_string(limit));
}

void Simulation::transport_all(const Fields& in, Fields& out,
                               std::vector<std::array<double, 5>>& flux) const {
  const auto& phase = setup_.phase;
  const std::size_t S = phase.species_count();
  out.resize(S);
  flux.assign(S, std::array<double, 5>{});
  for (std::size_t k = 0; k < S; ++k) {
    out[k].resize(phase.field_size(k));
    transport_field(in[k], phase.grids[k], setup_.mesh, setup_.flux_order, out[k], &flux[k]);
  }
}

void Simulation::step(double dt) {
  std::optional<ConservedTotals> before;
  const bool strict = setup_.positivity == PositivityPolicy::Strict;
  const bool closed = !setup_.transport || setup_.mesh.boundary != BoundaryMode::Copy;
  if (strict) before = conserved_totals(setup_.phase, state_.f, cell_width(), state_.outflow);
  if (setup_.scheme == Scheme::FirstOrder)
    step_first_order(dt);
  else
    step_ars222(dt);
  if (strict) {
    const auto after = conserved_totals(setup_.phase, state_.f, cell_width(), state_.outflow);
    const double drift = conservation_drift(*before, after);
    // with outflow boundaries the accounting is only as exact as the flux sums
    if (closed && drift > setup_.conservation_tolerance)
      throw InvariantViolation("conservation drift " + std::to_string(drift) + " at t = " +
                               std::to_string(state_.time));
  }
}

void Simulation::step_first_order(double dt) {
  check_dt(dt);
  const auto& phase = setup_.phase;
  relax_backward_euler(phase, state_.f, dt, state_.alphas, setup_.solver);
  if (setup_.transport) {
    Fields T;
    std::vector<std::array<double, 5>> flux;
    transport_all(state_.f, T, flux);
    for (std::size_t k = 0; k < phase.species_count(); ++k) {
      auto& f = state_.f[k];
      for (std::size_t q = 0; q < f.size(); ++q) f[q] -= dt * T[k][q];
      for (std::size_t r = 0; r < 5; ++r) state_.outflow[k][r] += dt * flux[k][r];
    }
  }
  state_.time += dt;
  ++state_.steps;
  after_step();
}

void Simulation::step_ars222(double dt) {
  check_dt(dt);
  const auto& phase = setup_.phase;
  const std::size_t S = phase.species_count();
  const auto tab = ButcherPair::ars222();
  const double g = tab.gamma;
  const double d = tab.delta;

  Fields T0, T1;
  std::vector<std::array<double, 5>> flux0, flux1;
  if (setup_.transport) transport_all(state_.f, T0, flux0);

  // stage 1
  Fields G = state_.f;
  if (setup_.transport)
    for (std::size_t k = 0; k < S; ++k)
      for (std::size_t q = 0; q < G[k].size(); ++q) G[k][q] -= dt * g * T0[k][q];
  Fields f1, R1;
  implicit_update_field(phase, G, g * dt, f1, state_.alphas, setup_.solver, &R1);

  // stage 2; R(f1) comes from the stage-1 equilibria
  if (setup_.transport) transport_all(f1, T1, flux1);
  for (std::size_t k = 0; k < S; ++k) {
    auto& Gk = G[k];
    const auto& f = state_.f[k];
    for (std::size_t q = 0; q < Gk.size(); ++q) {
      double v = f[q] + dt * (1.0 - g) * R1[k][q];
      if (setup_.transport) v -= dt * (d * T0[k][q] + (1.0 - d) * T1[k][q]);
      Gk[q] = v;
    }
    if (setup_.transport)
      for (std::size_t r = 0; r < 5; ++r)
        state_.outflow[k][r] += dt * (d * flux0[k][r] + (1.0 - d) * flux1[k][r]);
  }
  implicit_update_field(phase, G, g * dt, state_.f, state_.alphas, setup_.solver);

  state_.time += dt;
  ++state_.steps;
  after_step();
}

void Simulation::after_step() {
  positivity_ = check_positivity(setup_.phase, state_.f);
  worst_.min_value = std::min(worst_.min_value, positivity_.min_value);
  worst_.max_fermion = std::max(worst_.max_fermion, positivity_.max_fermion);
  worst_.negative_nodes = std::max(worst_.negative_nodes, positivity_.negative_nodes);
  worst_.fermion_violations = std::max(worst_.fermion_violations, positivity_.fermion_violations);
  if (positivity_.ok()) return;
  ++warnings_;
  switch (setup_.positivity) {
    case PositivityPolicy::Monitor:
      break;
    case PositivityPolicy::Clamp:
      for (auto& f : state_.f)
        for (double& v : f) v = std::max(v, 0.0);
      break;
    case PositivityPolicy::Strict:
      throw InvariantViolation("positivity/fermion bound violated at t = " +
                               std::to_string(state_.time) + " (min " +
                               std::to_string(positivity_.min_value) + ", fermion max " +
                               std::to_string(positivity_.max_fermion) + ")");
  }
}

void Simulation::run(double t_end, double dt, std::size_t stride, const Observer& observer) {
  if (stride == 0) stride = 1;
  if (observer) observer(*this);
  if (!(t_end > state_.time)) return;
  const double span = t_end - state_.time;
  const auto n = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
  for (std::size_t s = 1; s <= n; ++s) {
    const double target = s == n ? t_end : state_.time + dt;
    const double h = target - state_.time;
    step(h);
    if (s == n) state_.time = t_end;
    if (observer && (s % stride == 0 || s == n)) observer(*this);
  }
}

}  // namespace qbgk
