#pragma once

#include <array>
#include <span>
#include <string_view>

#include "qbgk/grid.hpp"

namespace qbgk {

/// periodic: wrap around; zero: empty ghost cells; copy: ghost cells repeat
/// the edge value (zero-gradient outflow).
enum class BoundaryMode { Periodic, Zero, Copy };

std::string_view to_string(BoundaryMode mode);
BoundaryMode boundary_from_string(std::string_view name);

/// Uniform cells on [x_min, x_max].
struct SpatialMesh {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t cells = 1;
  BoundaryMode boundary = BoundaryMode::Periodic;

  double dx() const { return (x_max - x_min) / static_cast<double>(cells); }
  double center(std::size_t i) const { return x_min + (static_cast<double>(i) + 0.5) * dx(); }
};

/// s * min(|a|, |b|, |c|) when a, b, c share the sign s, else 0.
double minmod3(double a, double b, double c);

/// F_{i+1/2} = (p1/2m)(g_{i+1} + g_i) - (|p1|/2m)(g_{i+1} - g_i - phi_{i+1/2}) for
/// the cells.size() + 1 interfaces, i = -1 .. cells-1. phi = 0 for order 1 and
/// minmod3 of the three neighbouring differences for order 2.
void numerical_flux(std::span<const double> g, double p1, double mass, int order,
                    BoundaryMode boundary, std::span<double> flux);

/// (F_{i+1/2} - F_{i-1/2}) / dx for every cell.
void transport_operator(std::span<const double> g, const SpatialMesh& mesh, double p1,
                        double mass, int order, std::span<double> out);

/// min over species of beta m dx / max|p1| with beta = 1 (order 1) or 2/3.
double cfl_max_dt(std::span<const MomentumGrid> grids, const SpatialMesh& mesh, int order);

/// Transport tendency of a whole field f[cell * nodes + q]. When
/// `boundary_flux` is given it receives the net outflow of (n, P, E) through
/// the two ends per unit time, int p_k (F_right - F_left) dp.
void transport_field(std::span<const double> f, const MomentumGrid& grid, const SpatialMesh& mesh,
                     int order, std::span<double> out,
                     std::array<double, 5>* boundary_flux = nullptr);

}  // namespace qbgk
