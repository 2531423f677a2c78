#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qbgk/statistics.hpp"

namespace qbgk {

/// Density, momentum and kinetic energy of one species.
struct Moments {
  double n = 0.0;
  Vec3 P{0.0, 0.0, 0.0};
  double E = 0.0;
};

/// Uniform tensor-product momentum grid with trapezoidal weights.
///
/// Nodes are stored flat, x-index slowest. The per-node arrays (px, py, pz,
/// |p|^2/(2m) and the quadrature weight times the momentum cell volume) are
/// precomputed since every moment and Newton evaluation sweeps them.
class MomentumGrid {
 public:
  static constexpr int kDefaultIntervals = 48;
  static constexpr double kHalfWidthInThermalMomenta = 6.0;

  MomentumGrid(double mass, Vec3 center, double thermal_momentum,
               int intervals = kDefaultIntervals);

  double mass() const { return mass_; }
  int nodes_per_axis() const { return nodes_per_axis_; }
  std::size_t size() const { return quad_.size(); }
  double spacing() const { return spacing_; }
  double cell_volume() const { return spacing_ * spacing_ * spacing_; }
  const Vec3& center() const { return center_; }
  /// m * v_th.
  double thermal_momentum() const { return thermal_momentum_; }

  Vec3 node(std::size_t q) const { return {px_[q], py_[q], pz_[q]}; }
  /// Dimensionless trapezoid weight omega_q.
  double weight(std::size_t q) const { return quad_[q] / cell_volume(); }
  double axis_coordinate(int axis, int index) const;

  std::span<const double> px() const { return px_; }
  std::span<const double> py() const { return py_; }
  std::span<const double> pz() const { return pz_; }
  /// |p|^2 / (2m) at every node.
  std::span<const double> kinetic() const { return kinetic_; }
  /// omega_q * dp^3 at every node.
  std::span<const double> quadrature() const { return quad_; }

  /// Largest |p^1| over the nodes (CFL bound).
  double max_abs_px() const;

 private:
  double mass_;
  Vec3 center_;
  double thermal_momentum_;
  int nodes_per_axis_;
  double spacing_;
  std::vector<double> px_, py_, pz_, kinetic_, quad_;
};

/// Grid centered at mass * mixture_velocity with v_th = sqrt(T_mix / mass),
/// extent +-6 m v_th and `intervals` intervals per axis (spacing 0.25 m v_th
/// for the default 48).
MomentumGrid build_grid(double mass, Statistics statistics, const Vec3& mixture_velocity,
                        double mixture_temperature,
                        int intervals = MomentumGrid::kDefaultIntervals);

double integrate(std::span<const double> values, const MomentumGrid& grid);

Moments compute_moments(std::span<const double> f, const MomentumGrid& grid);

/// (2/3)(E/n - |P|^2/(2 m n^2)).
double kinetic_temperature(const Moments& m, double mass);

/// Mixture temperature of any number of species: density-weighted kinetic
/// temperatures plus the drift contribution sum_k N_k |U_k - u_mix|^2 / (3 n).
double mixture_temperature(std::span<const Moments> moments, std::span<const double> masses);
double mixture_temperature(const Moments& m1, const Moments& m2, double mass1, double mass2);

/// Total momentum over total mass density.
Vec3 mixture_velocity(std::span<const Moments> moments, std::span<const double> masses);

/// Maxwellian n/(2 pi T m)^{3/2} exp(-|p - m U|^2/(2 T m)) sampled at the nodes.
std::vector<double> sample_maxwellian(const MomentumGrid& grid, double n, const Vec3& U,
                                      double T);

}  // namespace qbgk
