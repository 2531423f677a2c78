#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "qbgk/integrators.hpp"

namespace qbgk {

struct SpeciesConfig {
  std::string name;
  double mass = 1.0;
  Statistics statistics = Statistics::Classical;
  /// "maxwellian" or "fermi-dirac" (f = [(2 pi m T)^{3/2}/(scale n) e^{|p - mU|^2/(2mT)} + 1]^{-1})
  std::string distribution = "maxwellian";
  double fugacity_scale = 1.0;
  double n = 1.0;
  Vec3 U{0.0, 0.0, 0.0};
  double T = 1.0;
  /// state for x > interface when the profile is "riemann"
  double n_right = std::numeric_limits<double>::quiet_NaN();
  Vec3 U_right{0.0, 0.0, 0.0};
  double T_right = std::numeric_limits<double>::quiet_NaN();
  /// density n (1 + amplitude sin(2 pi (x - x_min)/L)) when the profile is "sine"
  double amplitude = 0.0;
};

struct SimConfig {
  std::string scenario;
  /// "dimensionless" or "sfe" (eV, fs, electron masses)
  std::string units = "dimensionless";
  /// physical size of one density unit (cm^-3) for the sfe units, else 1
  double density_unit = 1.0;
  std::vector<SpeciesConfig> species;
  /// nu~ for every ordered pair unless overridden in nu_matrix
  double nu = 1.0;
  /// row-major S x S; empty means uniform nu
  std::vector<double> nu_matrix;
  int grid_intervals = MomentumGrid::kDefaultIntervals;

  int scheme_order = 1;
  /// 0 selects cfl_number times the CFL bound
  double dt = 0.01;
  double cfl_number = 0.9;
  double t_end = 1.0;
  PositivityPolicy positivity = PositivityPolicy::Monitor;

  bool homogeneous = true;
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t cells = 1;
  BoundaryMode boundary = BoundaryMode::Periodic;
  int flux_order = 1;
  /// "uniform", "riemann" or "sine"
  std::string profile = "uniform";
  double interface = 0.0;

  std::string output_dir = "output";
  std::size_t stride = 1;

  SolverOptions solver;
};

/// Sectioned key = value text: top-level keys, then [species.k], [time],
/// [space], [output] and [solver]. '#' starts a comment. Unknown keys,
/// malformed lines and invalid values raise ConfigError with the line number
/// or the field name.
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::string& path);

/// Inverse of parse_config.
std::string format_config(const SimConfig& config);

/// Throws ConfigError naming the offending field.
void validate(const SimConfig& config);

/// relaxation:<ff|bb|fb|fc|cb|cc>, sfe-classical, sfe-fermion, sod.
SimConfig scenario_preset(std::string_view name);
std::vector<std::string> preset_names();

/// Constants of the sfe unit system (energies in eV, times in fs, masses in
/// electron masses).
namespace sfe {
inline constexpr double kElectronMassGram = 9.11e-28;
inline constexpr double kAtomicMassGram = 1.6605e-24;
inline constexpr double kNu = 0.00753;
inline constexpr double kAlpha = 1.061711634;
inline constexpr double kThetaElectron = 100.0;
inline constexpr double kIonTemperature = 15.0;
inline constexpr double kDensitySulfur = 1e19;
inline constexpr double kDensityFluorine = 6e19;
inline constexpr double kDensityElectron = 53e19;
double sulfur_mass();
double fluorine_mass();
/// Density (internal units) at which the scaled Fermi-Dirac electron field
/// integrates to its nominal density, i.e. scale n / (2 pi m theta)^{3/2} = y
/// with eta_{+1}(-ln y) = y pi^{3/2} / scale.
double electron_density(double scale = kAlpha, double theta = kThetaElectron);
}  // namespace sfe

/// Momentum grids sized by the largest cell-wise mixture temperature and the
/// mixture velocity of the whole domain.
PhaseSpace build_phase_space(const SimConfig& config);
SimulationSetup build_setup(const SimConfig& config);
Fields initial_fields(const SimConfig& config, const SimulationSetup& setup);
/// Time step actually used (resolves dt = 0 against the CFL bound).
double resolve_dt(const SimConfig& config, const Simulation& sim);

}  // namespace qbgk
