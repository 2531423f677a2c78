#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "qbgk/equilibrium.hpp"
#include "qbgk/errors.hpp"

using namespace qbgk;

namespace {

Moments moments_of(const IntraAlpha& a, const MomentumGrid& g, Statistics s) {
  const auto K = evaluate_equilibrium(a, g, s);
  return compute_moments(K, g);
}

double max_diff(const IntraAlpha& x, const IntraAlpha& y) {
  const auto a = x.as_array();
  const auto b = y.as_array();
  double d = 0.0;
  for (std::size_t i = 0; i < 5; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("alpha to abc and back") {
  const IntraAlpha alpha{-2.756815, {0, 0, 0}, -1.0, false};
  const auto p = alpha_to_abc(alpha, 1.0);
  CHECK(p.a == doctest::Approx(0.5));
  CHECK(p.b[0] == doctest::Approx(0.0));
  CHECK(p.c == doctest::Approx(2.756815));

  const IntraAlpha drifted{0.3, {0.5, -0.2, 0.1}, -2.0, false};
  const auto q = alpha_to_abc(drifted, 1.5);
  CHECK(q.b[0] == doctest::Approx(0.25));
  const auto back = abc_to_alpha(q, 1.5);
  CHECK(max_diff(back, drifted) < 1e-14);
  CHECK_THROWS_AS(alpha_to_abc(IntraAlpha{0, {0, 0, 0}, 0.0, false}, 1.0), DomainError);
}

TEST_CASE("abc form evaluates the same kernel") {
  auto g = build_grid(1.5, Statistics::Fermion, {0.1, 0, 0}, 0.7, 8);
  const IntraAlpha alpha{0.4, {0.3, 0.1, -0.2}, -1.3, false};
  const auto p = alpha_to_abc(alpha, 1.5);
  const auto K = evaluate_equilibrium(alpha, g, Statistics::Fermion);
  for (std::size_t q = 0; q < g.size(); q += 37) {
    const auto n = g.node(q);
    double d2 = 0.0;
    for (int r = 0; r < 3; ++r) d2 += std::pow(n[r] / 1.5 - p.b[r], 2);
    const double ref = 1.0 / (std::exp(1.5 * p.a * d2 + p.c) + 1.0);
    CHECK(K[q] == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("closed-form Maxwellian parameters") {
  const auto a = maxwellian_alpha(Moments{1.0, {0, 0, 0}, 1.5}, 1.0);
  CHECK(a.a0 == doctest::Approx(-2.756815).epsilon(1e-6));
  CHECK(a.a2 == doctest::Approx(-1.0));
  const auto b = maxwellian_alpha(Moments{1.0, {0.5, 0, 0}, 1.625}, 1.0);
  CHECK(b.a1[0] == doctest::Approx(0.5));
  CHECK(b.a0 == doctest::Approx(-2.756815 - 0.125).epsilon(1e-6));
}

TEST_CASE("target assembly") {
  auto g = build_grid(1.0, Statistics::Classical, {0, 0, 0}, 1.0);
  auto G = sample_maxwellian(g, 1.0, {0, 0, 0}, 1.0);
  const auto t = assemble_targets_intra(G, g, 0.5);
  CHECK(t[0] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(std::abs(t[1]) < 1e-14);
  CHECK(t[4] == doctest::Approx(0.75).epsilon(1e-6));

  const Moments m1{1.0, {0.5, 0, 0}, 1.625};
  const Moments m2{1.2, {0.18, 0, 0}, 0.909};
  const double Tm = mixture_temperature(m1, m2, 1.0, 1.5);
  const Vec3 u{0.68 / 2.8, 0, 0};
  auto g1 = build_grid(1.0, Statistics::Classical, u, Tm);
  auto g2 = build_grid(1.5, Statistics::Classical, u, Tm);
  auto G1 = sample_maxwellian(g1, 1.0, {0.5, 0, 0}, 1.0);
  auto G2 = sample_maxwellian(g2, 1.2, {0.1, 0, 0}, 0.5);
  const auto ti = assemble_targets_inter(G1, G2, g1, g2, 1.0, 1.0);
  CHECK(ti[0] == doctest::Approx(1.0).epsilon(2e-6));
  CHECK(ti[1] == doctest::Approx(1.2).epsilon(2e-6));
  CHECK(ti[2] == doctest::Approx(0.68).epsilon(2e-6));
  CHECK(ti[5] == doctest::Approx(2.534).epsilon(2e-5));
}

TEST_CASE("potential gradient and Hessian match finite differences") {
  auto g = build_grid(1.0, Statistics::Fermion, {0.2, 0, 0}, 1.0, 16);
  auto G = sample_maxwellian(g, 0.8, {0.2, 0, 0}, 1.0);
  for (auto s : {Statistics::Classical, Statistics::Fermion, Statistics::Boson}) {
    const double coeff = 0.7;
    const auto t = assemble_targets_intra(G, g, coeff);
    const IntraAlpha alpha{-2.5, {0.2, 0.05, -0.1}, -0.9, false};
    const auto ev = intra_potential(t, g, s, coeff, alpha);
    REQUIRE(ev.feasible);
    const auto base = alpha.as_array();
    for (int i = 0; i < 5; ++i) {
      const double h = 1e-5;
      auto up = base, dn = base;
      up[static_cast<std::size_t>(i)] += h;
      dn[static_cast<std::size_t>(i)] -= h;
      const auto eu = intra_potential(t, g, s, coeff, IntraAlpha::from_array(up));
      const auto ed = intra_potential(t, g, s, coeff, IntraAlpha::from_array(dn));
      const double fd = (eu.value - ed.value) / (2 * h);
      CHECK(ev.gradient[i] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
      for (int j = 0; j < 5; ++j) {
        const double fdh = (eu.gradient[j] - ed.gradient[j]) / (2 * h);
        CHECK(ev.hessian(i, j) == doctest::Approx(fdh).epsilon(1e-6).scale(1.0));
      }
    }
  }
}

TEST_CASE("inter potential gradient matches finite differences") {
  auto g1 = build_grid(1.0, Statistics::Fermion, {0.2, 0, 0}, 0.8, 12);
  auto g2 = build_grid(1.5, Statistics::Boson, {0.2, 0, 0}, 0.8, 12);
  const InterTargets t{0.9, 1.1, 0.3, 0.0, 0.1, 2.0};
  const InterAlpha a{-2.0, -2.5, {0.3, 0.0, 0.1}, -1.2, false, false};
  const auto ev = inter_potential(t, g1, g2, Statistics::Fermion, Statistics::Boson, 0.5, 0.8, a);
  REQUIRE(ev.feasible);
  auto shifted = [&](int i, double h) {
    InterAlpha b = a;
    if (i == 0) b.a12_0 += h;
    else if (i == 1) b.a21_0 += h;
    else if (i < 5) b.a1[static_cast<std::size_t>(i - 2)] += h;
    else b.a2 += h;
    return inter_potential(t, g1, g2, Statistics::Fermion, Statistics::Boson, 0.5, 0.8, b);
  };
  for (int i = 0; i < 6; ++i) {
    const double h = 1e-5;
    const auto eu = shifted(i, h);
    const auto ed = shifted(i, -h);
    CHECK(ev.gradient[i] == doctest::Approx((eu.value - ed.value) / (2 * h)).epsilon(1e-6).scale(1.0));
    for (int j = 0; j < 6; ++j)
      CHECK(ev.hessian(i, j) ==
            doctest::Approx((eu.gradient[j] - ed.gradient[j]) / (2 * h)).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("classical intra solve recovers a sampled Maxwellian") {
  auto g = build_grid(1.0, Statistics::Classical, {0, 0, 0}, 1.0);
  auto G = sample_maxwellian(g, 1.0, {0, 0, 0}, 1.0);
  const auto t = assemble_targets_intra(G, g, 1.0);
  SolveReport rep;
  const auto a = solve_intra(t, g, Statistics::Classical, 1.0, std::nullopt, {}, &rep);
  CHECK(a.a0 == doctest::Approx(-2.756815).epsilon(1e-6));
  CHECK(std::abs(a.a1[0]) < 1e-10);
  CHECK(a.a2 == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(rep.residual <= 1e-11);
}

TEST_CASE("quantum intra solves round trip") {
  struct Case {
    Statistics s;
    EquilibriumParams p;
  };
  const Case cases[] = {
      {Statistics::Fermion, {0.5, {0.1, 0, 0}, -1.0}},
      {Statistics::Fermion, {0.4, {0.0, 0.2, -0.1}, -6.0}},
      {Statistics::Fermion, {0.6, {0.1, 0, 0}, 2.0}},
      {Statistics::Boson, {0.5, {0.1, 0, 0}, 0.2}},
      {Statistics::Boson, {0.3, {0.0, -0.1, 0.2}, 0.02}},
  };
  for (const auto& c : cases) {
    const double mass = 1.3;
    const auto truth = abc_to_alpha(c.p, mass);
    const double T = 1.0 / (2.0 * c.p.a);
    const Vec3 u = c.p.b;
    // Degenerate fermions are wider than their kinetic temperature; size the
    // grid by the Fermi energy too.
    const double width = std::max(T, std::max(-c.p.c, 0.0) * T);
    auto g = build_grid(mass, c.s, u, width);
    const auto K = evaluate_equilibrium(truth, g, c.s);
    const auto t = assemble_targets_intra(K, g, 1.0);
    const auto a = solve_intra(t, g, c.s, 1.0);
    CHECK(max_diff(a, truth) < 1e-8);
    const auto m = moments_of(a, g, c.s);
    CHECK(m.n == doctest::Approx(t[0]).epsilon(1e-12));
    CHECK(m.E == doctest::Approx(t[4]).epsilon(1e-12));
  }
}

TEST_CASE("random classical inversions") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> dn(0.2, 3.0), du(-0.5, 0.5), dT(0.5, 2.0);
  auto g = build_grid(1.0, Statistics::Classical, {0, 0, 0}, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double n = dn(rng);
    const Vec3 U{du(rng), du(rng), du(rng)};
    const double T = dT(rng);
    auto grid = build_grid(1.0, Statistics::Classical, U, T);
    auto G = sample_maxwellian(grid, n, U, T);
    const auto t = assemble_targets_intra(G, grid, 1.0);
    const auto a = solve_intra(t, grid, Statistics::Classical, 1.0);
    const auto exact = maxwellian_alpha(
        Moments{n, {U[0] * n, U[1] * n, U[2] * n}, 1.5 * n * T + 0.5 * n * (U[0] * U[0] + U[1] * U[1] + U[2] * U[2])},
        1.0);
    worst = std::max(worst, max_diff(a, exact));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("inter solve for two classical species") {
  const Moments m1{1.0, {0.5, 0, 0}, 1.625};
  const Moments m2{1.2, {0.18, 0, 0}, 0.909};
  const double Tm = mixture_temperature(m1, m2, 1.0, 1.5);
  const Vec3 u{0.68 / 2.8, 0, 0};
  auto g1 = build_grid(1.0, Statistics::Classical, u, Tm);
  auto g2 = build_grid(1.5, Statistics::Classical, u, Tm);
  auto G1 = sample_maxwellian(g1, 1.0, {0.5, 0, 0}, 1.0);
  auto G2 = sample_maxwellian(g2, 1.2, {0.1, 0, 0}, 0.5);
  const auto t = assemble_targets_inter(G1, G2, g1, g2, 1.0, 1.0);
  SolveReport rep;
  const auto a = solve_inter(t, g1, g2, Statistics::Classical, Statistics::Classical, 1.0, 1.0,
                             std::nullopt, {}, &rep);
  CHECK(rep.residual <= 1e-11);
  const auto p12 = alpha_to_abc(a.species_alpha(0), 1.0);
  const auto p21 = alpha_to_abc(a.species_alpha(1), 1.5);
  // Shared velocity is the mixture velocity (total momentum / total mass).
  CHECK(p12.b[0] == doctest::Approx(t[2] / (t[0] * 1.0 + t[1] * 1.5)).epsilon(1e-9));
  CHECK(p12.b[0] == doctest::Approx(0.242857).epsilon(1e-4));
  CHECK(p21.b[0] == doctest::Approx(p12.b[0]).epsilon(1e-12));
  CHECK(p12.a == doctest::Approx(p21.a).epsilon(1e-12));

  // Each density and the summed momentum and energy are reproduced.
  const auto K1 = evaluate_equilibrium(a.species_alpha(0), g1, Statistics::Classical);
  const auto K2 = evaluate_equilibrium(a.species_alpha(1), g2, Statistics::Classical);
  const auto k1 = compute_moments(K1, g1);
  const auto k2 = compute_moments(K2, g2);
  CHECK(k1.n == doctest::Approx(t[0]).epsilon(1e-12));
  CHECK(k2.n == doctest::Approx(t[1]).epsilon(1e-12));
  CHECK(k1.P[0] + k2.P[0] == doctest::Approx(t[2]).epsilon(1e-11));
  CHECK(k1.E + k2.E == doctest::Approx(t[5]).epsilon(1e-12));

  // Density ratio relation between the two components of the pair.
  const double eta12 = eta_integrals(p12.c, Statistics::Classical).first;
  const double eta21 = eta_integrals(p21.c, Statistics::Classical).first;
  CHECK(std::pow(1.0, 1.5) * eta12 / (std::pow(1.5, 1.5) * eta21) ==
        doctest::Approx(k1.n / k2.n).epsilon(1e-5));
}

TEST_CASE("inter solve with mixed statistics and unequal weights") {
  const Vec3 u{0.1, 0, 0};
  auto g1 = build_grid(1.0, Statistics::Fermion, u, 1.0);
  auto g2 = build_grid(2.0, Statistics::Boson, u, 1.0);
  auto G1 = sample_maxwellian(g1, 0.8, {0.3, 0, 0}, 1.2);
  auto G2 = sample_maxwellian(g2, 0.5, {-0.05, 0.1, 0}, 0.8);
  const double c1 = 0.3, c2 = 0.6;
  const auto t = assemble_targets_inter(G1, G2, g1, g2, c1, c2);
  const auto a = solve_inter(t, g1, g2, Statistics::Fermion, Statistics::Boson, c1, c2);
  const auto k1 = compute_moments(evaluate_equilibrium(a.species_alpha(0), g1, Statistics::Fermion), g1);
  const auto k2 = compute_moments(evaluate_equilibrium(a.species_alpha(1), g2, Statistics::Boson), g2);
  CHECK(c1 * k1.n == doctest::Approx(t[0]).epsilon(1e-11));
  CHECK(c2 * k2.n == doctest::Approx(t[1]).epsilon(1e-11));
  CHECK(c1 * k1.P[1] + c2 * k2.P[1] == doctest::Approx(t[3]).epsilon(1e-10));
  CHECK(c1 * k1.E + c2 * k2.E == doctest::Approx(t[5]).epsilon(1e-11));

  // Warm start from the solution converges immediately.
  SolveReport rep;
  const auto again = solve_inter(t, g1, g2, Statistics::Fermion, Statistics::Boson, c1, c2, a, {}, &rep);
  CHECK(rep.iterations <= 2);
  CHECK(again.a2 == doctest::Approx(a.a2).epsilon(1e-12));
}

TEST_CASE("vacuum and saturation handling") {
  auto g = build_grid(1.0, Statistics::Fermion, {0, 0, 0}, 1.0, 8);
  const IntraTargets zero{0, 0, 0, 0, 0};
  CHECK(solve_intra(zero, g, Statistics::Fermion, 1.0).vacuum);
  double volume = 0.0;
  for (double w : g.quadrature()) volume += w;
  const IntraTargets full{volume, 0, 0, 0, volume};
  CHECK_THROWS_AS(solve_intra(full, g, Statistics::Fermion, 1.0), SaturationError);

  auto g2 = build_grid(1.0, Statistics::Classical, {0, 0, 0}, 1.0, 8);
  auto G = sample_maxwellian(g2, 1.0, {0, 0, 0}, 1.0);
  const auto t2 = assemble_targets_inter(std::vector<double>(g.size(), 0.0), G, g, g2, 1.0, 1.0);
  const auto a = solve_inter(t2, g, g2, Statistics::Fermion, Statistics::Classical, 1.0, 1.0);
  CHECK(a.vacuum12);
  CHECK_FALSE(a.vacuum21);
  CHECK(a.a2 == doctest::Approx(-1.0).epsilon(1e-3));
}

TEST_CASE("all pairs for three species") {
  const Vec3 u{0, 0, 0};
  std::vector<MomentumGrid> grids;
  grids.push_back(build_grid(1.0, Statistics::Classical, u, 1.0, 16));
  grids.push_back(build_grid(2.0, Statistics::Fermion, u, 1.0, 16));
  grids.push_back(build_grid(3.0, Statistics::Boson, u, 1.0, 16));
  std::vector<std::vector<double>> G;
  G.push_back(sample_maxwellian(grids[0], 1.0, {0.1, 0, 0}, 1.1));
  G.push_back(sample_maxwellian(grids[1], 0.5, {0, 0, 0}, 0.9));
  G.push_back(sample_maxwellian(grids[2], 0.7, {-0.05, 0, 0}, 1.0));
  const Statistics st[3] = {Statistics::Classical, Statistics::Fermion, Statistics::Boson};
  std::vector<SpeciesInput> in;
  for (int k = 0; k < 3; ++k) in.push_back({G[static_cast<std::size_t>(k)], &grids[static_cast<std::size_t>(k)], st[k]});
  CoefficientMatrix c{3, std::vector<double>(9, 0.2)};
  const auto sol = solve_all_pairs(in, c);
  CHECK(sol.intra.size() == 3);
  CHECK(sol.inter.size() == 3);
  CHECK(pair_index(0, 1, 3) == 0);
  CHECK(pair_index(0, 2, 3) == 1);
  CHECK(pair_index(2, 1, 3) == 2);
  for (int k = 0; k < 3; ++k) {
    const auto m = compute_moments(evaluate_equilibrium(sol.intra[static_cast<std::size_t>(k)],
                                                        grids[static_cast<std::size_t>(k)], st[k]),
                                   grids[static_cast<std::size_t>(k)]);
    const auto mg = compute_moments(G[static_cast<std::size_t>(k)], grids[static_cast<std::size_t>(k)]);
    CHECK(m.n == doctest::Approx(mg.n).epsilon(1e-12));
    CHECK(m.E == doctest::Approx(mg.E).epsilon(1e-12));
  }
}
