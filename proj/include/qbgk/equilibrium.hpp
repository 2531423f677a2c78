#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qbgk/grid.hpp"
#include "qbgk/statistics.hpp"

namespace qbgk {

/// Dual parameters of an intra-species equilibrium K = 1/(exp(-alpha.p_k) + tau),
/// with alpha.p_k = a0 + a1.p + a2 |p|^2/(2m).
struct IntraAlpha {
  double a0 = 0.0;
  Vec3 a1{0.0, 0.0, 0.0};
  double a2 = -1.0;
  /// K == 0 everywhere (zero density target).
  bool vacuum = false;

  std::array<double, 5> as_array() const { return {a0, a1[0], a1[1], a1[2], a2}; }
  static IntraAlpha from_array(const std::array<double, 5>& v) {
    return {v[0], {v[1], v[2], v[3]}, v[4], false};
  }
};

/// Dual parameters of an inter-species pair (K_kj, K_jk). The momentum and
/// energy multipliers are shared; only the density multipliers differ.
struct InterAlpha {
  double a12_0 = 0.0;
  double a21_0 = 0.0;
  Vec3 a1{0.0, 0.0, 0.0};
  double a2 = -1.0;
  bool vacuum12 = false;
  bool vacuum21 = false;

  /// The 5-vector acting on species `which` (0: first, 1: second of the pair).
  IntraAlpha species_alpha(int which) const {
    return {which == 0 ? a12_0 : a21_0, a1, a2, which == 0 ? vacuum12 : vacuum21};
  }
};

/// (a, b, c) of K = 1/(exp(m a |p/m - b|^2 + c) + tau).
struct EquilibriumParams {
  double a = 0.0;
  Vec3 b{0.0, 0.0, 0.0};
  double c = 0.0;
};

EquilibriumParams alpha_to_abc(const IntraAlpha& alpha, double mass);
IntraAlpha abc_to_alpha(const EquilibriumParams& params, double mass);

/// Closed-form Maxwellian (tau = 0) parameters for moments (n, P, E).
IntraAlpha maxwellian_alpha(const Moments& moments, double mass);

/// Evaluate K(alpha) on every node of a grid.
std::vector<double> evaluate_equilibrium(const IntraAlpha& alpha, const MomentumGrid& grid,
                                         Statistics s);
void evaluate_equilibrium(const IntraAlpha& alpha, const MomentumGrid& grid, Statistics s,
                          std::span<double> out);

using IntraTargets = std::array<double, 5>;
using InterTargets = std::array<double, 6>;

/// coeff * (integral of G p_k) by trapezoidal quadrature.
IntraTargets assemble_targets_intra(std::span<const double> G, const MomentumGrid& grid,
                                    double coeff);

/// Slots: (density of first, density of second, shared momentum, shared energy).
InterTargets assemble_targets_inter(std::span<const double> G1, std::span<const double> G2,
                                    const MomentumGrid& grid1, const MomentumGrid& grid2,
                                    double coeff1, double coeff2);

struct SolverOptions {
  /// Density-normalized gradient tolerance.
  double tolerance = 1e-11;
  int max_iterations = 50;
  int max_halvings = 60;
};

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;
};

using NewtonVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 6, 1>;
using NewtonMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 6, 6>;

/// Value, gradient and Hessian of a convex potential at one point. `feasible`
/// is false when the point lies outside the potential's domain.
struct PotentialEvaluation {
  bool feasible = false;
  double value = 0.0;
  NewtonVector gradient;
  NewtonMatrix hessian;
};

using PotentialFunction = std::function<PotentialEvaluation(const NewtonVector&)>;

struct NewtonOptions {
  double tolerance = 1e-11;
  int max_iterations = 50;
  int max_halvings = 60;
  /// Residual component i is |g_i| / sqrt(H_ii * residual_reference).
  double residual_reference = 1.0;
};

/// Damped Newton minimization. Each step is halved until the trial point is
/// feasible and the potential does not increase.
NewtonVector newton_minimize(const PotentialFunction& potential, const NewtonVector& start,
                             const NewtonOptions& options, SolveReport* report = nullptr);

/// Stationary point of phi_k(alpha) = coeff * sum_q w(K(alpha)) + targets . alpha.
/// phi_k is concave in alpha, so Newton runs on -phi_k, which is convex with
/// gradient sum_q coeff K p_k - targets. On return the discrete moments of K
/// equal targets / coeff.
IntraAlpha solve_intra(const IntraTargets& targets, const MomentumGrid& grid, Statistics s,
                       double coeff, const std::optional<IntraAlpha>& warm_start = std::nullopt,
                       const SolverOptions& options = {}, SolveReport* report = nullptr);

/// Stationary point of the pair potential (minimum of its negative); on return each species density matches its
/// slot and the coefficient-weighted momentum and energy sums match the shared
/// slots.
InterAlpha solve_inter(const InterTargets& targets, const MomentumGrid& grid1,
                       const MomentumGrid& grid2, Statistics s1, Statistics s2, double coeff1,
                       double coeff2, const std::optional<InterAlpha>& warm_start = std::nullopt,
                       const SolverOptions& options = {}, SolveReport* report = nullptr);

/// Value, gradient and Hessian of -phi_k (exposed for consistency checks).
PotentialEvaluation intra_potential(const IntraTargets& targets, const MomentumGrid& grid,
                                    Statistics s, double coeff, const IntraAlpha& alpha);
PotentialEvaluation inter_potential(const InterTargets& targets, const MomentumGrid& grid1,
                                    const MomentumGrid& grid2, Statistics s1, Statistics s2,
                                    double coeff1, double coeff2, const InterAlpha& alpha);

/// One species' contribution to a relaxation solve.
struct SpeciesInput {
  std::span<const double> G;
  const MomentumGrid* grid = nullptr;
  Statistics statistics = Statistics::Classical;
};

/// Index of unordered pair (k, j), k < j, among S species.
constexpr std::size_t pair_index(std::size_t k, std::size_t j, std::size_t S) {
  if (k > j) std::swap(k, j);
  return k * S - k * (k + 1) / 2 + (j - k - 1);
}

struct AllPairsSolution {
  std::vector<IntraAlpha> intra;
  /// Indexed by pair_index(k, j, S); species_alpha(0) belongs to k < j.
  std::vector<InterAlpha> inter;
};

/// Row-major S x S coefficients c(k, j) = d_k nu~_kj.
struct CoefficientMatrix {
  std::size_t S = 0;
  std::vector<double> c;
  double operator()(std::size_t k, std::size_t j) const { return c[k * S + j]; }
};

/// S intra solves plus S(S-1)/2 independent inter solves.
AllPairsSolution solve_all_pairs(std::span<const SpeciesInput> species,
                                 const CoefficientMatrix& coeffs,
                                 const AllPairsSolution* warm_start = nullptr,
                                 const SolverOptions& options = {});

}  // namespace qbgk
