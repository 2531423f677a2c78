#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qbgk/integrators.hpp"

namespace qbgk {

/// sum_k sum_i dx int h_tau(f_k) dp. Throws DomainError naming species, cell
/// and node when a value lies outside the domain of h.
double total_entropy(const PhaseSpace& phase, const Fields& f, double cell_width);

/// Per-species moments summed over cells (times the cell width).
std::vector<Moments> species_totals(const PhaseSpace& phase, const Fields& f, double cell_width);

/// Species masses, total momentum and total energy.
struct ConservedTotals {
  std::vector<double> n;
  Vec3 P{0.0, 0.0, 0.0};
  double E = 0.0;
  /// momentum scale sum_k sqrt(2 N_k E_k), used to normalize momentum drift
  double momentum_scale = 0.0;
};

ConservedTotals conserved_totals(const PhaseSpace& phase, const Fields& f, double cell_width,
                                 std::span<const std::array<double, 5>> outflow = {});

/// Largest relative change between two totals: |dn_k|/n_k, |dP|/scale, |dE|/E.
double conservation_drift(const ConservedTotals& a, const ConservedTotals& b);

/// -1/a2, i.e. 1/(2a).
double physical_temperature(const IntraAlpha& alpha);

/// E/n - |P|^2/(2 n N): the kinetic temperature times 3/2.
double kinetic_energy_per_particle(const Moments& m, double mass);

/// (P1/N1 - P2/N2)(t); nu12 and nu21 are the constant nu~_12 and nu~_21.
Vec3 analytic_velocity_gap(double t, const Moments& m1, const Moments& m2, double mass1,
                           double mass2, double nu12, double nu21);

struct DuhamelSample {
  double s = 0.0;
  double c12 = 0.0;
  double c21 = 0.0;
};

/// Gap of E/n - |P|^2/(2nN) between species 1 and 2 at time t: initial gap
/// decay, velocity-mismatch term and the history integral over c12(s), c21(s)
/// (trapezoidal in s). Needs samples covering [0, t] unless both species are
/// classical, where the integrand vanishes identically.
double analytic_kinetic_temperature_gap(double t, const Moments& m1, const Moments& m2,
                                        double mass1, double mass2, Statistics s1,
                                        Statistics s2, double nu,
                                        std::span<const DuhamelSample> history);

/// Mixture temperature of the initial moments.
double equilibrium_temperature(std::span<const Moments> moments, std::span<const double> masses);

struct SpeciesRecord {
  Moments m;
  double T_kin = 0.0;
  double theta = std::numeric_limits<double>::quiet_NaN();
};

struct DiagnosticsRecord {
  double time = 0.0;
  std::vector<SpeciesRecord> species;
  Vec3 P_total{0.0, 0.0, 0.0};
  double E_total = 0.0;
  double H = 0.0;
  double dHdt = 0.0;
  /// For two species the gaps are species 1 minus species 2 (velocity gap as
  /// |U1 - U2|); for more species the spread max - min.
  double velocity_gap = 0.0;
  double kinetic_gap = 0.0;
  double theta_gap = std::numeric_limits<double>::quiet_NaN();
  /// (c_kj, c_jk) per unordered pair in pair_index order.
  std::vector<std::array<double, 2>> c_pairs;
  ConservedTotals totals;
};

/// Builds DiagnosticsRecords from a running simulation. For space-homogeneous
/// runs physical temperatures and c12/c21 come from solves on the current
/// state (intra weight 1, inter weights nu~_kj), warm-started from the
/// previous record.
class DiagnosticsRecorder {
 public:
  void record(const Simulation& sim);
  const std::vector<DiagnosticsRecord>& records() const { return records_; }
  std::vector<DuhamelSample> duhamel_history(std::size_t k = 0, std::size_t j = 1) const;

 private:
  std::vector<DiagnosticsRecord> records_;
  std::optional<AllPairsSolution> warm_;
};

/// Fresh equilibria of one cell: intra weight 1, inter weights nu~_kj (1 when
/// zero).
AllPairsSolution diagnostic_equilibria(const PhaseSpace& phase, const Fields& f, std::size_t cell,
                                       const AllPairsSolution* warm, const SolverOptions& options);

struct ProfileRow {
  double x = 0.0;
  std::vector<double> n, Ux, T_kin, theta;
};

/// Cell-wise density, velocity, kinetic and physical temperature.
std::vector<ProfileRow> spatial_profile(const Simulation& sim);

}  // namespace qbgk
