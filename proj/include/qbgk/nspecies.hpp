#pragma once

#include <span>
#include <string>
#include <vector>

#include "qbgk/equilibrium.hpp"

namespace qbgk {

struct Species {
  std::string name;
  double mass = 1.0;
  Statistics statistics = Statistics::Classical;
};

/// nu~_kj: coefficient of (K_kj - f_k) in the relaxation operator of species k.
/// Row-major S x S, diagonal entries are the intra-species frequencies.
struct CollisionFrequencies {
  std::size_t S = 0;
  std::vector<double> nu;

  static CollisionFrequencies uniform(std::size_t S, double value);
  double operator()(std::size_t k, std::size_t j) const { return nu[k * S + j]; }
  double& operator()(std::size_t k, std::size_t j) { return nu[k * S + j]; }
  /// sum_j nu~_kj
  double row_sum(std::size_t k) const;
  /// Non-negative entries and nu~_kj == nu~_jk; throws ConfigError otherwise.
  void validate() const;
};

struct SpeciesSet {
  std::vector<Species> species;
  CollisionFrequencies nu;

  std::size_t size() const { return species.size(); }
};

/// d_k = 1 / (1 + gamma_dt sum_j nu~_kj).
std::vector<double> stage_coefficients(const CollisionFrequencies& nu, double gamma_dt);

/// c(k, j) = d_k nu~_kj.
CoefficientMatrix relaxation_weights(const CollisionFrequencies& nu, std::span<const double> d);

/// The equilibrium K_kj of species k (j == k gives the intra-species one).
IntraAlpha equilibrium_alpha(const AllPairsSolution& sol, std::size_t k, std::size_t j,
                                   std::size_t S);

/// sum_j nu~_kj (K_kj - f_k) at every node of species k.
void assemble_rhs(std::size_t k, std::span<const SpeciesInput> fields,
                  const AllPairsSolution& equilibria, const CollisionFrequencies& nu,
                  std::span<double> out);

/// psi_k = d_k G_k + d_k gamma_dt sum_j nu~_kj K_kj for every species of one
/// spatial cell. The equilibria are solved from the moments of G (intra
/// targets d_k nu~_kk int G_k p_k, inter targets as in the pair potential).
///
/// `out[k]` receives psi_k; it may alias G. When `relaxation` is non-empty it
/// receives sum_j nu~_kj (K_kj - psi_k) computed with the same equilibria.
/// A cell with zero density in every species is copied through.
AllPairsSolution implicit_update_nspecies(std::span<const SpeciesInput> G, double gamma_dt,
                                          const CollisionFrequencies& nu,
                                          std::span<const std::span<double>> out,
                                          const AllPairsSolution* warm_start = nullptr,
                                          const SolverOptions& options = {},
                                          std::span<const std::span<double>> relaxation = {});

}  // namespace qbgk
