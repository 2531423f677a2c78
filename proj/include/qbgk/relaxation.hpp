#pragma once

#include <span>
#include <vector>

#include "qbgk/nspecies.hpp"

namespace qbgk {

/// Species, their momentum grids and the number of spatial cells. A
/// distribution field is stored flat as f[cell * grid.size() + node].
struct PhaseSpace {
  SpeciesSet set;
  std::vector<MomentumGrid> grids;
  std::size_t cells = 1;

  std::size_t species_count() const { return set.size(); }
  std::size_t nodes(std::size_t k) const { return grids[k].size(); }
  std::size_t field_size(std::size_t k) const { return cells * grids[k].size(); }
};

using Field = std::vector<double>;
using Fields = std::vector<Field>;

/// One spatial cell of implicit_update_nspecies; kept under this name for the
/// two-species model, it accepts any species count.
AllPairsSolution implicit_update(std::span<const SpeciesInput> G, double gamma_dt,
                                 const CollisionFrequencies& nu,
                                 std::span<const std::span<double>> out,
                                 const AllPairsSolution* warm_start = nullptr,
                                 const SolverOptions& options = {},
                                 std::span<const std::span<double>> relaxation = {});

/// implicit_update in every cell. `alphas` holds one warm start per cell and
/// is overwritten with the new equilibria. `out` may alias `G`.
/// Cells run in parallel; a solver failure is rethrown with the cell index.
void implicit_update_field(const PhaseSpace& phase, const Fields& G, double gamma_dt, Fields& out,
                           std::vector<AllPairsSolution>& alphas,
                           const SolverOptions& options = {}, Fields* relaxation = nullptr);

/// f* = d f + d dt sum_j nu~ K_kj with K solved from f (backward Euler).
void relax_backward_euler(const PhaseSpace& phase, Fields& f, double dt,
                          std::vector<AllPairsSolution>& alphas,
                          const SolverOptions& options = {});

}  // namespace qbgk
