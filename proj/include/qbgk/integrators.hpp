#pragma once

#include <array>
#include <functional>
#include <string_view>
#include <vector>

#include "qbgk/relaxation.hpp"
#include "qbgk/transport.hpp"

namespace qbgk {

/// Implicit and explicit tableaux of an IMEX Runge-Kutta pair (three stages
/// including the trivial explicit first one).
struct ButcherPair {
  double gamma = 0.0;
  double delta = 0.0;
  std::array<std::array<double, 3>, 3> A_implicit{};
  std::array<std::array<double, 3>, 3> A_explicit{};
  std::array<double, 3> b_implicit{};
  std::array<double, 3> b_explicit{};
  std::array<double, 3> c{};

  /// ARS(2,2,2): gamma = 1 - sqrt(2)/2, delta = 1 - 1/(2 gamma).
  static ButcherPair ars222();
  /// Row sums equal the abscissae in both tableaux.
  bool consistent(double tol = 1e-15) const;
  /// Weights equal the last row of both tableaux.
  bool globally_stiffly_accurate() const;
};

enum class Scheme { FirstOrder = 1, ARS222 = 2 };

/// What to do when a step produces f < 0 (or f >= 1 for fermions).
enum class PositivityPolicy { Monitor, Clamp, Strict };

std::string_view to_string(PositivityPolicy p);
PositivityPolicy positivity_from_string(std::string_view name);

struct SimulationSetup {
  PhaseSpace phase;
  SpatialMesh mesh;
  /// false for space-homogeneous runs (a single cell, no transport)
  bool transport = true;
  int flux_order = 1;
  Scheme scheme = Scheme::FirstOrder;
  SolverOptions solver;
  PositivityPolicy positivity = PositivityPolicy::Monitor;
  /// Per-step relative conservation drift tolerated under Strict.
  double conservation_tolerance = 1e-12;
};

struct PositivityReport {
  double min_value = 0.0;
  /// largest fermion value (0 when there are no fermions)
  double max_fermion = 0.0;
  std::size_t negative_nodes = 0;
  std::size_t fermion_violations = 0;

  bool ok() const { return negative_nodes == 0 && fermion_violations == 0; }
};

struct SimulationState {
  Fields f;
  double time = 0.0;
  std::size_t steps = 0;
  /// Latest equilibria per cell (warm starts for the next solve).
  std::vector<AllPairsSolution> alphas;
  /// Per species, time-integrated outflow of int p_k f through the two ends.
  std::vector<std::array<double, 5>> outflow;
};

class Simulation {
 public:
  using Observer = std::function<void(const Simulation&)>;

  Simulation(SimulationSetup setup, Fields initial);

  const SimulationSetup& setup() const { return setup_; }
  const SimulationState& state() const { return state_; }
  const PhaseSpace& phase() const { return setup_.phase; }
  /// Cell width, or 1 for space-homogeneous runs.
  double cell_width() const { return setup_.transport ? setup_.mesh.dx() : 1.0; }

  /// CFL bound of the configured flux order (infinite without transport).
  double max_dt() const;

  void step(double dt);
  /// Backward-Euler relaxation followed by a forward-Euler transport step.
  void step_first_order(double dt);
  /// ARS(2,2,2) with transport explicit and relaxation implicit.
  void step_ars222(double dt);

  /// Steps until t_end (the last step is shortened to land on it). The
  /// observer sees the initial state, every `stride`-th step and the final
  /// state.
  void run(double t_end, double dt, std::size_t stride, const Observer& observer = {});

  const PositivityReport& last_positivity() const { return positivity_; }
  /// Smallest value and largest fermion value seen over all steps so far.
  const PositivityReport& worst_positivity() const { return worst_; }
  /// Steps that ended with a positivity or fermion-bound violation.
  std::size_t positivity_warnings() const { return warnings_; }

 private:
  void check_dt(double dt) const;
  void transport_all(const Fields& in, Fields& out, std::vector<std::array<double, 5>>& flux) const;
  void after_step();

  SimulationSetup setup_;
  SimulationState state_;
  PositivityReport positivity_;
  PositivityReport worst_;
  std::size_t warnings_ = 0;
};

/// Scan every field for negative values and fermion values >= 1.
PositivityReport check_positivity(const PhaseSpace& phase, const Fields& f);

}  // namespace qbgk
