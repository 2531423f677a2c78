#include "qbgk/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qbgk/errors.hpp"

namespace qbgk {

EquilibriumParams alpha_to_abc(const IntraAlpha& alpha, double mass) {
  if (!(alpha.a2 < 0.0)) throw DomainError("alpha_to_abc: energy multiplier must be negative");
  EquilibriumParams out;
  out.a = -alpha.a2 / 2.0;
  double a1sq = 0.0;
  for (int r = 0; r < 3; ++r) {
    out.b[r] = -alpha.a1[r] / alpha.a2;
    a1sq += alpha.a1[r] * alpha.a1[r];
  }
  out.c = -alpha.a0 + mass * a1sq / (2.0 * alpha.a2);
  return out;
}

IntraAlpha abc_to_alpha(const EquilibriumParams& params, double mass) {
  if (!(params.a > 0.0)) throw DomainError("abc_to_alpha: a must be positive");
  IntraAlpha alpha;
  alpha.a2 = -2.0 * params.a;
  double b2 = 0.0;
  for (int r = 0; r < 3; ++r) {
    alpha.a1[r] = 2.0 * params.a * params.b[r];
    b2 += params.b[r] * params.b[r];
  }
  alpha.a0 = -params.c - mass * params.a * b2;
  return alpha;
}

IntraAlpha maxwellian_alpha(const Moments& moments, double mass) {
  if (!(moments.n > 0.0)) throw DomainError("Maxwellian fit needs a positive density");
  const double T = kinetic_temperature(moments, mass);
  if (!(T > 0.0)) throw DomainError("Maxwellian fit needs a positive internal energy");
  const double N = mass * moments.n;
  const Vec3 U{moments.P[0] / N, moments.P[1] / N, moments.P[2] / N};
  const double u2 = U[0] * U[0] + U[1] * U[1] + U[2] * U[2];
  IntraAlpha alpha;
  alpha.a0 = std::log(moments.n / std::pow(2.0 * std::numbers::pi * mass * T, 1.5)) -
             mass * u2 / (2.0 * T);
  alpha.a1 = {U[0] / T, U[1] / T, U[2] / T};
  alpha.a2 = -1.0 / T;
  return alpha;
}

void evaluate_equilibrium(const IntraAlpha& alpha, const MomentumGrid& grid, Statistics s,
                          std::span<double> out) {
  if (alpha.vacuum) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const auto px = grid.px();
  const auto py = grid.py();
  const auto pz = grid.pz();
  const auto e = grid.kinetic();
  for (std::size_t q = 0; q < grid.size(); ++q) {
    const double x =
        alpha.a0 + alpha.a1[0] * px[q] + alpha.a1[1] * py[q] + alpha.a1[2] * pz[q] + alpha.a2 * e[q];
    out[q] = kernels::equilibrium(x, s);
  }
}

std::vector<double> evaluate_equilibrium(const IntraAlpha& alpha, const MomentumGrid& grid,
                                         Statistics s) {
  std::vector<double> out(grid.size());
  evaluate_equilibrium(alpha, grid, s, out);
  return out;
}

IntraTargets assemble_targets_intra(std::span<const double> G, const MomentumGrid& grid,
                                    double coeff) {
  const Moments m = compute_moments(G, grid);
  return {coeff * m.n, coeff * m.P[0], coeff * m.P[1], coeff * m.P[2], coeff * m.E};
}

InterTargets assemble_targets_inter(std::span<const double> G1, std::span<const double> G2,
                                    const MomentumGrid& grid1, const MomentumGrid& grid2,
                                    double coeff1, double coeff2) {
  const Moments m1 = compute_moments(G1, grid1);
  const Moments m2 = compute_moments(G2, grid2);
  return {coeff1 * m1.n,
          coeff2 * m2.n,
          coeff1 * m1.P[0] + coeff2 * m2.P[0],
          coeff1 * m1.P[1] + coeff2 * m2.P[1],
          coeff1 * m1.P[2] + coeff2 * m2.P[2],
          coeff1 * m1.E + coeff2 * m2.E};
}

// ---------------------------------------------------------------------------
// Dual potential assembly
// ---------------------------------------------------------------------------

namespace {

/// One species' share of a dual potential: its density multiplier sits in
/// `slot`; the last four entries of the parameter vector are shared.
struct Block {
  const MomentumGrid* grid;
  Statistics stats;
  double coeff;
  int slot;
};

struct BlockSums {
  double value = 0.0;
  std::array<double, 5> grad{};
  // upper triangle of the 5x5 local Hessian, row-major
  std::array<double, 15> hess{};
};

template <Statistics S>
bool accumulate(const Block& b, double a0, const double* a1, double a2, BlockSums& acc) {
  const MomentumGrid& g = *b.grid;
  const auto px = g.px();
  const auto py = g.py();
  const auto pz = g.pz();
  const auto e = g.kinetic();
  const auto quad = g.quadrature();
  const std::size_t n = g.size();

  double value = 0.0;
  std::array<double, 5> gr{};
  std::array<double, 15> h{};
  for (std::size_t q = 0; q < n; ++q) {
    const double x = a0 + a1[0] * px[q] + a1[1] * py[q] + a1[2] * pz[q] + a2 * e[q];
    double K, w, zeta;
    if constexpr (S == Statistics::Classical) {
      if (x > 700.0) return false;
      K = std::exp(x);
      w = -K;
      zeta = K;
    } else if constexpr (S == Statistics::Fermion) {
      const double ex = std::exp(-std::abs(x));
      const double inv = 1.0 / (1.0 + ex);
      K = x >= 0.0 ? inv : ex * inv;
      w = -(std::max(x, 0.0) + std::log1p(ex));
      zeta = K * (x >= 0.0 ? ex * inv : inv);
    } else {
      if (!(x < 0.0)) return false;
      const double em = std::expm1(-x);
      K = 1.0 / em;
      w = std::log1p(-std::exp(x));
      zeta = K * (1.0 + K);
    }
    const double wq = b.coeff * quad[q];
    value += wq * w;
    const double phi[5] = {1.0, px[q], py[q], pz[q], e[q]};
    const double gk = wq * K;
    const double hz = wq * zeta;
    int t = 0;
    for (int i = 0; i < 5; ++i) {
      gr[static_cast<std::size_t>(i)] += gk * phi[i];
      const double hi = hz * phi[i];
      for (int j = i; j < 5; ++j) h[static_cast<std::size_t>(t++)] += hi * phi[j];
    }
  }
  if (!std::isfinite(value)) return false;
  acc.value += value;
  for (std::size_t i = 0; i < 5; ++i) acc.grad[i] += gr[i];
  for (std::size_t i = 0; i < 15; ++i) acc.hess[i] += h[i];
  return true;
}

PotentialEvaluation evaluate_blocks(std::span<const Block> blocks, std::span<const double> targets,
                                    const NewtonVector& alpha) {
  const int dim = static_cast<int>(alpha.size());
  PotentialEvaluation ev;
  ev.gradient = NewtonVector::Zero(dim);
  ev.hessian = NewtonMatrix::Zero(dim, dim);
  ev.feasible = false;
  const double a2 = alpha[dim - 1];
  if (!(a2 < 0.0) || !alpha.allFinite()) return ev;
  const double a1[3] = {alpha[dim - 4], alpha[dim - 3], alpha[dim - 2]};

  double value = 0.0;
  for (const Block& b : blocks) {
    BlockSums acc;
    bool ok = false;
    const double a0 = alpha[b.slot];
    switch (b.stats) {
      case Statistics::Classical:
        ok = accumulate<Statistics::Classical>(b, a0, a1, a2, acc);
        break;
      case Statistics::Fermion:
        ok = accumulate<Statistics::Fermion>(b, a0, a1, a2, acc);
        break;
      case Statistics::Boson:
        ok = accumulate<Statistics::Boson>(b, a0, a1, a2, acc);
        break;
    }
    if (!ok) return ev;
    value -= acc.value;
    // local index -> global parameter index
    const int map[5] = {b.slot, dim - 4, dim - 3, dim - 2, dim - 1};
    int t = 0;
    for (int i = 0; i < 5; ++i) {
      ev.gradient[map[i]] += acc.grad[static_cast<std::size_t>(i)];
      for (int j = i; j < 5; ++j) {
        const double hij = acc.hess[static_cast<std::size_t>(t++)];
        ev.hessian(map[i], map[j]) += hij;
        if (i != j) ev.hessian(map[j], map[i]) += hij;
      }
    }
  }
  for (int i = 0; i < dim; ++i) {
    value -= targets[static_cast<std::size_t>(i)] * alpha[i];
    ev.gradient[i] -= targets[static_cast<std::size_t>(i)];
  }
  ev.value = value;
  ev.feasible = std::isfinite(value);
  return ev;
}

double residual_of(const PotentialEvaluation& ev, double reference) {
  double r = 0.0;
  for (int i = 0; i < ev.gradient.size(); ++i) {
    const double scale = std::sqrt(std::max(ev.hessian(i, i), 0.0) * reference);
    const double ri = scale > 0.0 ? std::abs(ev.gradient[i]) / scale
                                  : std::numeric_limits<double>::infinity();
    r = std::max(r, ri);
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Newton
// ---------------------------------------------------------------------------

NewtonVector newton_minimize(const PotentialFunction& potential, const NewtonVector& start,
                             const NewtonOptions& options, SolveReport* report) {
  NewtonVector x = start;
  PotentialEvaluation ev = potential(x);
  if (!ev.feasible) throw FeasibilityError("Newton start point is infeasible");
  double r = residual_of(ev, options.residual_reference);
  // Once the tolerance is met a few more full steps are taken while they keep
  // reducing the residual; they cost little and push the moment mismatch to
  // round-off.
  const double polish_target = options.tolerance * 1e-3;
  int it = 0;
  bool converged = r <= options.tolerance;
  while (r > polish_target) {
    if (it >= options.max_iterations) {
      if (converged) break;
      throw SolverError("Newton did not converge in " + std::to_string(options.max_iterations) +
                            " iterations (residual " + std::to_string(r) + ")",
                        r);
    }
    const int dim = static_cast<int>(x.size());
    NewtonVector scale(dim);
    for (int i = 0; i < dim; ++i) {
      const double hii = ev.hessian(i, i);
      if (!(hii > 0.0)) throw SolverError("singular Hessian (zero diagonal)", r);
      scale[i] = 1.0 / std::sqrt(hii);
    }
    const NewtonMatrix scaled = scale.asDiagonal() * ev.hessian * scale.asDiagonal();
    Eigen::LLT<NewtonMatrix> llt(scaled);
    if (llt.info() != Eigen::Success) throw SolverError("Hessian is not positive definite", r);
    const NewtonVector rhs = -(scale.asDiagonal() * ev.gradient);
    const NewtonVector step = scale.asDiagonal() * llt.solve(rhs);
    const double slope = ev.gradient.dot(step);

    double t = 1.0;
    bool accepted = false;
    PotentialEvaluation trial;
    double trial_r = 0.0;
    for (int h = 0; h <= options.max_halvings; ++h, t *= 0.5) {
      const NewtonVector candidate = x + t * step;
      trial = potential(candidate);
      if (trial.feasible) {
        trial_r = residual_of(trial, options.residual_reference);
        const double roundoff = 1e-13 * std::max(std::abs(ev.value), 1e-300);
        const bool armijo = trial.value <= ev.value + 1e-4 * t * slope;
        const bool flat = std::abs(trial.value - ev.value) <= roundoff && trial_r < r;
        if (armijo || flat) {
          x = candidate;
          accepted = true;
          break;
        }
      }
      if (converged) break;  // polishing: no line search
    }
    if (!accepted) {
      if (converged) break;
      throw FeasibilityError("step halving exhausted without a feasible descent step", r);
    }
    ev = std::move(trial);
    const double previous = r;
    r = trial_r;
    ++it;
    if (r <= options.tolerance) {
      if (converged && r > 0.5 * previous) break;  // stagnated at round-off
      converged = true;
    }
  }
  if (report) {
    report->iterations = it;
    report->residual = r;
  }
  return x;
}

// ---------------------------------------------------------------------------
// Intra / inter solves
// ---------------------------------------------------------------------------

namespace {

double grid_volume(const MomentumGrid& grid) {
  double v = 0.0;
  for (double w : grid.quadrature()) v += w;
  return v;
}

void check_saturation(double density, const MomentumGrid& grid, Statistics s) {
  if (s != Statistics::Fermion) return;
  const double limit = 0.999 * grid_volume(grid);
  if (density >= limit)
    throw SaturationError("fermion density target " + std::to_string(density) +
                          " exceeds the grid saturation limit " + std::to_string(limit));
}

NewtonOptions newton_options(const SolverOptions& o, double reference) {
  NewtonOptions n;
  n.tolerance = o.tolerance;
  n.max_iterations = o.max_iterations;
  n.max_halvings = o.max_halvings;
  n.residual_reference = reference;
  return n;
}

bool usable(const PotentialEvaluation& ev) { return ev.feasible; }

}  // namespace

PotentialEvaluation intra_potential(const IntraTargets& targets, const MomentumGrid& grid,
                                    Statistics s, double coeff, const IntraAlpha& alpha) {
  const Block block{&grid, s, coeff, 0};
  const auto a = alpha.as_array();
  NewtonVector x(5);
  for (int i = 0; i < 5; ++i) x[i] = a[static_cast<std::size_t>(i)];
  return evaluate_blocks(std::span<const Block>(&block, 1), targets, x);
}

PotentialEvaluation inter_potential(const InterTargets& targets, const MomentumGrid& grid1,
                                    const MomentumGrid& grid2, Statistics s1, Statistics s2,
                                    double coeff1, double coeff2, const InterAlpha& alpha) {
  const Block blocks[2] = {{&grid1, s1, coeff1, 0}, {&grid2, s2, coeff2, 1}};
  NewtonVector x(6);
  x << alpha.a12_0, alpha.a21_0, alpha.a1[0], alpha.a1[1], alpha.a1[2], alpha.a2;
  return evaluate_blocks(blocks, targets, x);
}

IntraAlpha solve_intra(const IntraTargets& targets, const MomentumGrid& grid, Statistics s,
                       double coeff, const std::optional<IntraAlpha>& warm_start,
                       const SolverOptions& options, SolveReport* report) {
  if (!(coeff > 0.0)) throw DomainError("solve_intra: coefficient must be positive");
  if (targets[0] == 0.0) {
    if (report) *report = {};
    IntraAlpha vac;
    vac.vacuum = true;
    return vac;
  }
  if (!(targets[0] > 0.0)) throw SolverError("solve_intra: negative density target");
  const Moments m{targets[0] / coeff, {targets[1] / coeff, targets[2] / coeff, targets[3] / coeff},
                  targets[4] / coeff};
  check_saturation(m.n, grid, s);

  const Block block{&grid, s, coeff, 0};
  const PotentialFunction phi = [&](const NewtonVector& x) {
    return evaluate_blocks(std::span<const Block>(&block, 1), targets, x);
  };
  auto to_vec = [](const IntraAlpha& a) {
    NewtonVector x(5);
    const auto v = a.as_array();
    for (int i = 0; i < 5; ++i) x[i] = v[static_cast<std::size_t>(i)];
    return x;
  };
  const auto opts = newton_options(options, targets[0]);

  NewtonVector solution;
  bool solved = false;
  if (warm_start && !warm_start->vacuum) {
    // An infeasible warm start makes newton_minimize throw.
    try {
      solution = newton_minimize(phi, to_vec(*warm_start), opts, report);
      solved = true;
    } catch (const SolverError&) {
      // fall back to the Maxwellian start below
    }
  }
  if (!solved) {
    IntraAlpha start;
    try {
      start = maxwellian_alpha(m, grid.mass());
    } catch (const DomainError& e) {
      throw SolverError(std::string("solve_intra: unrealizable targets: ") + e.what());
    }
    NewtonVector x0 = to_vec(start);
    // A Maxwellian fit can violate the boson condition alpha.p < 0 when the
    // target is close to condensation; lower the density multiplier until
    // the start is feasible.
    for (int k = 0; k < 60 && !usable(phi(x0)); ++k) x0[0] -= 0.5;
    solution = newton_minimize(phi, x0, opts, report);
  }
  std::array<double, 5> v{};
  for (int i = 0; i < 5; ++i) v[static_cast<std::size_t>(i)] = solution[i];
  return IntraAlpha::from_array(v);
}

InterAlpha solve_inter(const InterTargets& targets, const MomentumGrid& grid1,
                       const MomentumGrid& grid2, Statistics s1, Statistics s2, double coeff1,
                       double coeff2, const std::optional<InterAlpha>& warm_start,
                       const SolverOptions& options, SolveReport* report) {
  if (!(coeff1 > 0.0) || !(coeff2 > 0.0))
    throw DomainError("solve_inter: coefficients must be positive");
  if (targets[0] < 0.0 || targets[1] < 0.0)
    throw SolverError("solve_inter: negative density target");

  InterAlpha out;
  out.vacuum12 = targets[0] == 0.0;
  out.vacuum21 = targets[1] == 0.0;
  if (out.vacuum12 && out.vacuum21) {
    if (report) *report = {};
    return out;
  }

  const MomentumGrid* grids[2] = {&grid1, &grid2};
  const Statistics stats[2] = {s1, s2};
  const double coeffs[2] = {coeff1, coeff2};
  const bool active[2] = {!out.vacuum12, !out.vacuum21};

  std::vector<Block> blocks;
  std::vector<int> slot_of(2, -1);
  for (int k = 0; k < 2; ++k) {
    if (!active[k]) continue;
    slot_of[static_cast<std::size_t>(k)] = static_cast<int>(blocks.size());
    blocks.push_back({grids[k], stats[k], coeffs[k], static_cast<int>(blocks.size())});
    check_saturation(targets[static_cast<std::size_t>(k)] / coeffs[k], *grids[k], stats[k]);
  }
  const int nb = static_cast<int>(blocks.size());
  const int dim = nb + 4;
  std::vector<double> reduced_targets;
  for (int k = 0; k < 2; ++k)
    if (active[k]) reduced_targets.push_back(targets[static_cast<std::size_t>(k)]);
  for (std::size_t i = 2; i < 6; ++i) reduced_targets.push_back(targets[i]);

  const PotentialFunction phi = [&](const NewtonVector& x) {
    return evaluate_blocks(blocks, reduced_targets, x);
  };
  double reference = 0.0;
  for (int k = 0; k < nb; ++k) reference += reduced_targets[static_cast<std::size_t>(k)];
  const auto opts = newton_options(options, reference);

  auto to_vec = [&](double a12, double a21, const Vec3& a1, double a2) {
    NewtonVector x(dim);
    const double a0[2] = {a12, a21};
    for (int k = 0; k < 2; ++k)
      if (active[k]) x[slot_of[static_cast<std::size_t>(k)]] = a0[k];
    x[dim - 4] = a1[0];
    x[dim - 3] = a1[1];
    x[dim - 2] = a1[2];
    x[dim - 1] = a2;
    return x;
  };

  NewtonVector solution;
  bool solved = false;
  if (warm_start && warm_start->vacuum12 == out.vacuum12 && warm_start->vacuum21 == out.vacuum21) {
    const NewtonVector x0 =
        to_vec(warm_start->a12_0, warm_start->a21_0, warm_start->a1, warm_start->a2);
    try {
      solution = newton_minimize(phi, x0, opts, report);
      solved = true;
    } catch (const SolverError&) {
    }
  }
  if (!solved) {
    // Shared-temperature Maxwellian fit to the coefficient-weighted targets.
    double weighted_mass = 0.0;
    double weighted_density = 0.0;
    double n[2] = {0.0, 0.0};
    for (int k = 0; k < 2; ++k) {
      if (!active[k]) continue;
      n[k] = targets[static_cast<std::size_t>(k)] / coeffs[k];
      weighted_mass += targets[static_cast<std::size_t>(k)] * grids[k]->mass();
      weighted_density += targets[static_cast<std::size_t>(k)];
    }
    const Vec3 U{targets[2] / weighted_mass, targets[3] / weighted_mass,
                 targets[4] / weighted_mass};
    const double u2 = U[0] * U[0] + U[1] * U[1] + U[2] * U[2];
    const double T = (targets[5] - 0.5 * u2 * weighted_mass) / (1.5 * weighted_density);
    if (!(T > 0.0)) throw SolverError("solve_inter: unrealizable targets (non-positive energy)");
    double a0[2] = {0.0, 0.0};
    for (int k = 0; k < 2; ++k) {
      if (!active[k]) continue;
      const double m = grids[k]->mass();
      a0[k] = std::log(n[k] / std::pow(2.0 * std::numbers::pi * m * T, 1.5)) - m * u2 / (2.0 * T);
    }
    NewtonVector x0 = to_vec(a0[0], a0[1], {U[0] / T, U[1] / T, U[2] / T}, -1.0 / T);
    for (int k = 0; k < 60 && !usable(phi(x0)); ++k)
      for (int b = 0; b < nb; ++b) x0[b] -= 0.5;
    solution = newton_minimize(phi, x0, opts, report);
  }

  if (active[0]) out.a12_0 = solution[slot_of[0]];
  if (active[1]) out.a21_0 = solution[slot_of[1]];
  out.a1 = {solution[dim - 4], solution[dim - 3], solution[dim - 2]};
  out.a2 = solution[dim - 1];
  return out;
}

AllPairsSolution solve_all_pairs(std::span<const SpeciesInput> species,
                                 const CoefficientMatrix& coeffs,
                                 const AllPairsSolution* warm_start,
                                 const SolverOptions& options) {
  const std::size_t S = species.size();
  if (S == 0) throw ConfigError("solve_all_pairs needs at least one species");
  AllPairsSolution out;
  out.intra.resize(S);
  out.inter.resize(S * (S - 1) / 2);

  auto positive_or_unit = [](double c) { return c > 0.0 ? c : 1.0; };

  for (std::size_t k = 0; k < S; ++k) {
    const auto& sp = species[k];
    // A zero collision frequency leaves K out of the update; the fit is still
    // computed (with unit weight) so diagnostics have parameters to report.
    const double c = positive_or_unit(coeffs(k, k));
    const auto targets = assemble_targets_intra(sp.G, *sp.grid, c);
    std::optional<IntraAlpha> warm;
    if (warm_start && warm_start->intra.size() == S) warm = warm_start->intra[k];
    out.intra[k] = solve_intra(targets, *sp.grid, sp.statistics, c, warm, options);
  }
  for (std::size_t k = 0; k < S; ++k) {
    for (std::size_t j = k + 1; j < S; ++j) {
      double ck = coeffs(k, j);
      double cj = coeffs(j, k);
      if (!(ck > 0.0) || !(cj > 0.0)) ck = cj = 1.0;
      const auto targets = assemble_targets_inter(species[k].G, species[j].G, *species[k].grid,
                                                  *species[j].grid, ck, cj);
      const std::size_t idx = pair_index(k, j, S);
      std::optional<InterAlpha> warm;
      if (warm_start && warm_start->inter.size() == out.inter.size()) warm = warm_start->inter[idx];
      out.inter[idx] = solve_inter(targets, *species[k].grid, *species[j].grid,
                                   species[k].statistics, species[j].statistics, ck, cj, warm,
                                   options);
    }
  }
  return out;
}

}  // namespace qbgk
