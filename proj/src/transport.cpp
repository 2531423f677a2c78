#include "qbgk/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qbgk/errors.hpp"

namespace qbgk {

std::string_view to_string(BoundaryMode mode) {
  switch (mode) {
    case BoundaryMode::Periodic:
      return "periodic";
    case BoundaryMode::Zero:
      return "zero";
    case BoundaryMode::Copy:
      return "copy";
  }
  return "periodic";
}

BoundaryMode boundary_from_string(std::string_view name) {
  if (name == "periodic") return BoundaryMode::Periodic;
  if (name == "zero") return BoundaryMode::Zero;
  if (name == "copy") return BoundaryMode::Copy;
  throw ConfigError("unknown boundary mode '" + std::string(name) + "'");
}

double minmod3(double a, double b, double c) {
  if (a > 0.0 && b > 0.0 && c > 0.0) return std::min({a, b, c});
  if (a < 0.0 && b < 0.0 && c < 0.0) return std::max({a, b, c});
  return 0.0;
}

namespace {

constexpr std::size_t kGhost = 2;

// g with two ghost cells on either side.
void fill_padded(std::span<const double> g, BoundaryMode boundary, std::vector<double>& pad) {
  const std::size_t n = g.size();
  pad.resize(n + 2 * kGhost);
  std::copy(g.begin(), g.end(), pad.begin() + kGhost);
  for (std::size_t gcell = 0; gcell < kGhost; ++gcell) {
    double left = 0.0, right = 0.0;
    switch (boundary) {
      case BoundaryMode::Periodic:
        left = g[(n - 1 - gcell % n) % n];
        right = g[gcell % n];
        break;
      case BoundaryMode::Zero:
        break;
      case BoundaryMode::Copy:
        left = g[0];
        right = g[n - 1];
        break;
    }
    pad[kGhost - 1 - gcell] = left;
    pad[kGhost + n + gcell] = right;
  }
}

void flux_from_padded(const std::vector<double>& pad, std::size_t n, double p1, double mass,
                      int order, std::span<double> flux) {
  const double a = p1 / (2.0 * mass);
  const double b = std::abs(p1) / (2.0 * mass);
  // interface j sits between padded cells kGhost - 1 + j and kGhost + j
  for (std::size_t j = 0; j <= n; ++j) {
    const std::size_t i = kGhost - 1 + j;
    const double gi = pad[i];
    const double gr = pad[i + 1];
    double phi = 0.0;
    if (order == 2) phi = minmod3(gi - pad[i - 1], gr - gi, pad[i + 2] - gr);
    flux[j] = a * (gr + gi) - b * (gr - gi - phi);
  }
}

void check_order(int order) {
  if (order != 1 && order != 2) throw ConfigError("flux order must be 1 or 2");
}

}  // namespace

void numerical_flux(std::span<const double> g, double p1, double mass, int order,
                    BoundaryMode boundary, std::span<double> flux) {
  check_order(order);
  if (flux.size() != g.size() + 1) throw ConfigError("numerical_flux: flux needs cells + 1 entries");
  std::vector<double> pad;
  fill_padded(g, boundary, pad);
  flux_from_padded(pad, g.size(), p1, mass, order, flux);
}

void transport_operator(std::span<const double> g, const SpatialMesh& mesh, double p1,
                        double mass, int order, std::span<double> out) {
  std::vector<double> flux(g.size() + 1);
  numerical_flux(g, p1, mass, order, mesh.boundary, flux);
  const double inv_dx = 1.0 / mesh.dx();
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = (flux[i + 1] - flux[i]) * inv_dx;
}

double cfl_max_dt(std::span<const MomentumGrid> grids, const SpatialMesh& mesh, int order) {
  check_order(order);
  const double beta = order == 1 ? 1.0 : 2.0 / 3.0;
  double dt = std::numeric_limits<double>::infinity();
  for (const auto& g : grids) {
    const double pmax = g.max_abs_px();
    if (pmax > 0.0) dt = std::min(dt, beta * g.mass() * mesh.dx() / pmax);
  }
  return dt;
}

void transport_field(std::span<const double> f, const MomentumGrid& grid, const SpatialMesh& mesh,
                     int order, std::span<double> out, std::array<double, 5>* boundary_flux) {
  check_order(order);
  const std::size_t nodes = grid.size();
  const std::size_t cells = mesh.cells;
  if (f.size() != nodes * cells || out.size() != nodes * cells)
    throw ConfigError("transport_field: field size does not match grid and mesh");
  const double inv_dx = 1.0 / mesh.dx();
  const auto px = grid.px();
  std::vector<double> net(boundary_flux ? nodes : 0);

#pragma omp parallel
  {
    std::vector<double> g(cells), pad, flux(cells + 1);
#pragma omp for schedule(static)
    for (long ql = 0; ql < static_cast<long>(nodes); ++ql) {
      const auto q = static_cast<std::size_t>(ql);
      for (std::size_t i = 0; i < cells; ++i) g[i] = f[i * nodes + q];
      fill_padded(g, mesh.boundary, pad);
      flux_from_padded(pad, cells, px[q], grid.mass(), order, flux);
      for (std::size_t i = 0; i < cells; ++i) out[i * nodes + q] = (flux[i + 1] - flux[i]) * inv_dx;
      if (boundary_flux) net[q] = flux[cells] - flux[0];
    }
  }
  if (boundary_flux) {
    // fixed summation order keeps the accounting reproducible
    const auto w = grid.quadrature();
    const auto py = grid.py();
    const auto pz = grid.pz();
    const auto e = grid.kinetic();
    std::array<double, 5> acc{};
    for (std::size_t q = 0; q < nodes; ++q) {
      const double v = w[q] * net[q];
      acc[0] += v;
      acc[1] += v * px[q];
      acc[2] += v * py[q];
      acc[3] += v * pz[q];
      acc[4] += v * e[q];
    }
    *boundary_flux = acc;
  }
}

}  // namespace qbgk
