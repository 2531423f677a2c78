#include "qbgk/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qbgk/errors.hpp"

namespace qbgk {

MomentumGrid::MomentumGrid(double mass, Vec3 center, double thermal_momentum, int intervals)
    : mass_(mass), center_(center), thermal_momentum_(thermal_momentum) {
  if (!(mass > 0.0)) throw ConfigError("momentum grid needs a positive mass");
  if (!(thermal_momentum > 0.0)) throw ConfigError("momentum grid needs a positive thermal momentum");
  if (intervals < 2) throw ConfigError("momentum grid needs at least 2 intervals per axis");

  nodes_per_axis_ = intervals + 1;
  spacing_ = 2.0 * kHalfWidthInThermalMomenta * thermal_momentum / intervals;
  const auto n = static_cast<std::size_t>(nodes_per_axis_);
  const std::size_t total = n * n * n;
  px_.resize(total);
  py_.resize(total);
  pz_.resize(total);
  kinetic_.resize(total);
  quad_.resize(total);

  auto axis_weight = [intervals](int i) { return (i == 0 || i == intervals) ? 0.5 : 1.0; };
  const double volume = cell_volume();
  std::size_t q = 0;
  for (int i = 0; i < nodes_per_axis_; ++i) {
    for (int j = 0; j < nodes_per_axis_; ++j) {
      for (int k = 0; k < nodes_per_axis_; ++k, ++q) {
        px_[q] = axis_coordinate(0, i);
        py_[q] = axis_coordinate(1, j);
        pz_[q] = axis_coordinate(2, k);
        kinetic_[q] = (px_[q] * px_[q] + py_[q] * py_[q] + pz_[q] * pz_[q]) / (2.0 * mass_);
        quad_[q] = axis_weight(i) * axis_weight(j) * axis_weight(k) * volume;
      }
    }
  }
}

double MomentumGrid::axis_coordinate(int axis, int index) const {
  // Endpoints are set exactly so the extent is center +- 6 m v_th.
  const double lo = center_[static_cast<std::size_t>(axis)] -
                    kHalfWidthInThermalMomenta * thermal_momentum_;
  const double hi = center_[static_cast<std::size_t>(axis)] +
                    kHalfWidthInThermalMomenta * thermal_momentum_;
  if (index == nodes_per_axis_ - 1) return hi;
  return lo + index * spacing_;
}

double MomentumGrid::max_abs_px() const {
  return std::max(std::abs(axis_coordinate(0, 0)),
                  std::abs(axis_coordinate(0, nodes_per_axis_ - 1)));
}

MomentumGrid build_grid(double mass, Statistics /*statistics*/, const Vec3& mixture_velocity,
                        double mixture_temperature, int intervals) {
  if (!(mass > 0.0)) throw ConfigError("build_grid: mass must be positive");
  if (!(mixture_temperature > 0.0)) throw ConfigError("build_grid: temperature must be positive");
  const double v_th = std::sqrt(mixture_temperature / mass);
  const Vec3 center{mass * mixture_velocity[0], mass * mixture_velocity[1],
                    mass * mixture_velocity[2]};
  return MomentumGrid(mass, center, mass * v_th, intervals);
}

double integrate(std::span<const double> values, const MomentumGrid& grid) {
  const auto w = grid.quadrature();
  double sum = 0.0;
  for (std::size_t q = 0; q < w.size(); ++q) sum += w[q] * values[q];
  return sum;
}

Moments compute_moments(std::span<const double> f, const MomentumGrid& grid) {
  const auto w = grid.quadrature();
  const auto px = grid.px();
  const auto py = grid.py();
  const auto pz = grid.pz();
  const auto e = grid.kinetic();
  Moments m;
  for (std::size_t q = 0; q < w.size(); ++q) {
    const double wf = w[q] * f[q];
    m.n += wf;
    m.P[0] += wf * px[q];
    m.P[1] += wf * py[q];
    m.P[2] += wf * pz[q];
    m.E += wf * e[q];
  }
  return m;
}

double kinetic_temperature(const Moments& m, double mass) {
  if (!(m.n > 0.0)) throw DomainError("kinetic temperature needs a positive density");
  const double p2 = m.P[0] * m.P[0] + m.P[1] * m.P[1] + m.P[2] * m.P[2];
  return 2.0 / 3.0 * (m.E / m.n - p2 / (2.0 * mass * m.n * m.n));
}

Vec3 mixture_velocity(std::span<const Moments> moments, std::span<const double> masses) {
  Vec3 P{0, 0, 0};
  double N = 0.0;
  for (std::size_t k = 0; k < moments.size(); ++k) {
    for (int r = 0; r < 3; ++r) P[r] += moments[k].P[r];
    N += masses[k] * moments[k].n;
  }
  if (!(N > 0.0)) throw DomainError("mixture velocity needs a positive total density");
  return {P[0] / N, P[1] / N, P[2] / N};
}

double mixture_temperature(std::span<const Moments> moments, std::span<const double> masses) {
  double n_total = 0.0;
  for (const auto& m : moments) n_total += m.n;
  if (!(n_total > 0.0)) throw DomainError("mixture temperature needs a positive total density");
  const Vec3 u = mixture_velocity(moments, masses);
  double thermal = 0.0;
  double drift = 0.0;
  for (std::size_t k = 0; k < moments.size(); ++k) {
    const auto& m = moments[k];
    if (m.n <= 0.0) continue;
    thermal += m.n * kinetic_temperature(m, masses[k]);
    const double N = masses[k] * m.n;
    double d2 = 0.0;
    for (int r = 0; r < 3; ++r) {
      const double d = m.P[r] / N - u[r];
      d2 += d * d;
    }
    drift += N * d2;
  }
  return thermal / n_total + drift / (3.0 * n_total);
}

double mixture_temperature(const Moments& m1, const Moments& m2, double mass1, double mass2) {
  const Moments ms[2] = {m1, m2};
  const double masses[2] = {mass1, mass2};
  return mixture_temperature(ms, masses);
}

std::vector<double> sample_maxwellian(const MomentumGrid& grid, double n, const Vec3& U,
                                      double T) {
  const double m = grid.mass();
  const double norm = n / std::pow(2.0 * std::numbers::pi * T * m, 1.5);
  std::vector<double> f(grid.size());
  const auto px = grid.px();
  const auto py = grid.py();
  const auto pz = grid.pz();
  for (std::size_t q = 0; q < f.size(); ++q) {
    const double dx = px[q] - m * U[0];
    const double dy = py[q] - m * U[1];
    const double dz = pz[q] - m * U[2];
    f[q] = norm * std::exp(-(dx * dx + dy * dy + dz * dz) / (2.0 * T * m));
  }
  return f;
}

}  // namespace qbgk
