#include "qbgk/relaxation.hpp"

#include <exception>
#include <string>

#include "qbgk/errors.hpp"

namespace qbgk {

AllPairsSolution implicit_update(std::span<const SpeciesInput> G, double gamma_dt,
                                 const CollisionFrequencies& nu,
                                 std::span<const std::span<double>> out,
                                 const AllPairsSolution* warm_start, const SolverOptions& options,
                                 std::span<const std::span<double>> relaxation) {
  return implicit_update_nspecies(G, gamma_dt, nu, out, warm_start, options, relaxation);
}

namespace {

template <class E>
[[noreturn]] void rethrow_with_cell(const E& e, std::size_t cell) {
  throw E(std::string(e.what()) + " (cell " + std::to_string(cell) + ")", e.residual());
}

}  // namespace

void implicit_update_field(const PhaseSpace& phase, const Fields& G, double gamma_dt, Fields& out,
                           std::vector<AllPairsSolution>& alphas, const SolverOptions& options,
                           Fields* relaxation) {
  const std::size_t S = phase.species_count();
  const std::size_t cells = phase.cells;
  if (G.size() != S) throw ConfigError("implicit_update_field: species count mismatch");
  out.resize(S);
  for (std::size_t k = 0; k < S; ++k) out[k].resize(phase.field_size(k));
  if (relaxation) {
    relaxation->resize(S);
    for (std::size_t k = 0; k < S; ++k) (*relaxation)[k].resize(phase.field_size(k));
  }
  alphas.resize(cells);

  std::exception_ptr failure;
  long failed_cell = -1;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(cells); ++i) {
    const auto cell = static_cast<std::size_t>(i);
    try {
      std::vector<SpeciesInput> in(S);
      std::vector<std::span<double>> o(S);
      std::vector<std::span<double>> r;
      for (std::size_t k = 0; k < S; ++k) {
        const std::size_t n = phase.nodes(k);
        in[k] = {std::span<const double>(G[k]).subspan(cell * n, n), &phase.grids[k],
                 phase.set.species[k].statistics};
        o[k] = std::span<double>(out[k]).subspan(cell * n, n);
        if (relaxation) r.push_back(std::span<double>((*relaxation)[k]).subspan(cell * n, n));
      }
      const AllPairsSolution* warm = alphas[cell].intra.empty() ? nullptr : &alphas[cell];
      AllPairsSolution sol = implicit_update_nspecies(in, gamma_dt, phase.set.nu, o, warm, options, r);
      alphas[cell] = std::move(sol);
    } catch (...) {
#pragma omp critical(qbgk_relax_failure)
      {
        if (!failure || static_cast<long>(cell) < failed_cell) {
          failure = std::current_exception();
          failed_cell = static_cast<long>(cell);
        }
      }
    }
  }
  if (failure) {
    const auto cell = static_cast<std::size_t>(failed_cell);
    try {
      std::rethrow_exception(failure);
    } catch (const SaturationError& e) {
      rethrow_with_cell(e, cell);
    } catch (const FeasibilityError& e) {
      rethrow_with_cell(e, cell);
    } catch (const SolverError& e) {
      rethrow_with_cell(e, cell);
    }
  }
}

void relax_backward_euler(const PhaseSpace& phase, Fields& f, double dt,
                          std::vector<AllPairsSolution>& alphas, const SolverOptions& options) {
  implicit_update_field(phase, f, dt, f, alphas, options);
}

}  // namespace qbgk
