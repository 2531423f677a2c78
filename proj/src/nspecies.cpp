#include "qbgk/nspecies.hpp"

#include <algorithm>
#include <cmath>

#include "qbgk/errors.hpp"

namespace qbgk {

CollisionFrequencies CollisionFrequencies::uniform(std::size_t S, double value) {
  return {S, std::vector<double>(S * S, value)};
}

double CollisionFrequencies::row_sum(std::size_t k) const {
  double s = 0.0;
  for (std::size_t j = 0; j < S; ++j) s += (*this)(k, j);
  return s;
}

void CollisionFrequencies::validate() const {
  if (nu.size() != S * S) throw ConfigError("collision frequency matrix has the wrong size");
  for (std::size_t k = 0; k < S; ++k) {
    for (std::size_t j = 0; j < S; ++j) {
      const double v = (*this)(k, j);
      if (!(v >= 0.0) || !std::isfinite(v))
        throw ConfigError("collision frequencies must be finite and non-negative");
      if (v != (*this)(j, k))
        throw ConfigError("collision frequencies must satisfy nu(k,j) == nu(j,k)");
    }
  }
}

std::vector<double> stage_coefficients(const CollisionFrequencies& nu, double gamma_dt) {
  std::vector<double> d(nu.S);
  for (std::size_t k = 0; k < nu.S; ++k) d[k] = 1.0 / (1.0 + gamma_dt * nu.row_sum(k));
  return d;
}

CoefficientMatrix relaxation_weights(const CollisionFrequencies& nu, std::span<const double> d) {
  CoefficientMatrix c{nu.S, std::vector<double>(nu.S * nu.S)};
  for (std::size_t k = 0; k < nu.S; ++k)
    for (std::size_t j = 0; j < nu.S; ++j) c.c[k * nu.S + j] = d[k] * nu(k, j);
  return c;
}

IntraAlpha equilibrium_alpha(const AllPairsSolution& sol, std::size_t k, std::size_t j,
                                   std::size_t S) {
  if (k == j) return sol.intra[k];
  return sol.inter[pair_index(k, j, S)].species_alpha(k < j ? 0 : 1);
}

void assemble_rhs(std::size_t k, std::span<const SpeciesInput> fields,
                  const AllPairsSolution& equilibria, const CollisionFrequencies& nu,
                  std::span<double> out) {
  const std::size_t S = fields.size();
  const auto& sp = fields[k];
  const std::size_t n = sp.grid->size();
  const double total = nu.row_sum(k);
  for (std::size_t q = 0; q < n; ++q) out[q] = -total * sp.G[q];
  std::vector<double> K(n);
  for (std::size_t j = 0; j < S; ++j) {
    const double v = nu(k, j);
    if (v == 0.0) continue;
    evaluate_equilibrium(equilibrium_alpha(equilibria, k, j, S), *sp.grid, sp.statistics, K);
    for (std::size_t q = 0; q < n; ++q) out[q] += v * K[q];
  }
}

AllPairsSolution implicit_update_nspecies(std::span<const SpeciesInput> G, double gamma_dt,
                                          const CollisionFrequencies& nu,
                                          std::span<const std::span<double>> out,
                                          const AllPairsSolution* warm_start,
                                          const SolverOptions& options,
                                          std::span<const std::span<double>> relaxation) {
  const std::size_t S = G.size();
  if (nu.S != S) throw ConfigError("collision frequencies do not match the species count");
  if (out.size() != S) throw ConfigError("implicit_update: output count mismatch");
  if (gamma_dt < 0.0) throw ConfigError("implicit_update: negative time step");

  bool vacuum = true;
  for (const auto& sp : G)
    if (integrate(sp.G, *sp.grid) != 0.0) vacuum = false;
  if (vacuum || (gamma_dt == 0.0 && relaxation.empty())) {
    for (std::size_t k = 0; k < S; ++k)
      if (out[k].data() != G[k].G.data()) std::copy(G[k].G.begin(), G[k].G.end(), out[k].begin());
    for (const auto& r : relaxation) std::fill(r.begin(), r.end(), 0.0);
    return warm_start ? *warm_start : AllPairsSolution{};
  }

  const auto d = stage_coefficients(nu, gamma_dt);
  const auto coeffs = relaxation_weights(nu, d);
  AllPairsSolution sol = solve_all_pairs(G, coeffs, warm_start, options);

  std::vector<double> K;
  std::vector<double> mix;
  for (std::size_t k = 0; k < S; ++k) {
    const auto& sp = G[k];
    const std::size_t n = sp.grid->size();
    K.resize(n);
    mix.assign(n, 0.0);
    for (std::size_t j = 0; j < S; ++j) {
      const double v = nu(k, j);
      if (v == 0.0) continue;
      evaluate_equilibrium(equilibrium_alpha(sol, k, j, S), *sp.grid, sp.statistics, K);
      for (std::size_t q = 0; q < n; ++q) mix[q] += v * K[q];
    }
    const double total = nu.row_sum(k);
    const auto& psi = out[k];
    for (std::size_t q = 0; q < n; ++q) psi[q] = d[k] * sp.G[q] + d[k] * gamma_dt * mix[q];
    if (!relaxation.empty())
      for (std::size_t q = 0; q < n; ++q) relaxation[k][q] = mix[q] - total * psi[q];
  }
  return sol;
}

}  // namespace qbgk
