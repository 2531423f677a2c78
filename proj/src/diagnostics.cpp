#include "qbgk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "qbgk/errors.hpp"

namespace qbgk {

namespace {

std::string format_value(double z) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", z);
  return buf;
}

}  // namespace

double total_entropy(const PhaseSpace& phase, const Fields& f, double cell_width) {
  double H = 0.0;
  for (std::size_t k = 0; k < phase.species_count(); ++k) {
    const auto s = phase.set.species[k].statistics;
    const auto w = phase.grids[k].quadrature();
    const std::size_t n = w.size();
    for (std::size_t i = 0; i < phase.cells; ++i) {
      double cell = 0.0;
      for (std::size_t q = 0; q < n; ++q) {
        const double z = f[k][i * n + q];
        double h;
        try {
          h = entropy_integrand(z, s);
        } catch (const DomainError&) {
          throw DomainError("entropy: species " + std::to_string(k + 1) + ", cell " +
                            std::to_string(i) + ", node " + std::to_string(q) + " has f = " +
                            format_value(z) + " outside the entropy domain");
        }
        cell += w[q] * h;
      }
      H += cell_width * cell;
    }
  }
  return H;
}

std::vector<Moments> species_totals(const PhaseSpace& phase, const Fields& f, double cell_width) {
  std::vector<Moments> out(phase.species_count());
  for (std::size_t k = 0; k < phase.species_count(); ++k) {
    const std::size_t n = phase.nodes(k);
    Moments acc;
    for (std::size_t i = 0; i < phase.cells; ++i) {
      const auto m = compute_moments(std::span<const double>(f[k]).subspan(i * n, n), phase.grids[k]);
      acc.n += cell_width * m.n;
      for (int r = 0; r < 3; ++r) acc.P[r] += cell_width * m.P[r];
      acc.E += cell_width * m.E;
    }
    out[k] = acc;
  }
  return out;
}

ConservedTotals conserved_totals(const PhaseSpace& phase, const Fields& f, double cell_width,
                                 std::span<const std::array<double, 5>> outflow) {
  const auto m = species_totals(phase, f, cell_width);
  ConservedTotals t;
  for (std::size_t k = 0; k < m.size(); ++k) {
    double n = m[k].n;
    Vec3 P = m[k].P;
    double E = m[k].E;
    if (!outflow.empty()) {
      n += outflow[k][0];
      for (int r = 0; r < 3; ++r) P[r] += outflow[k][static_cast<std::size_t>(r + 1)];
      E += outflow[k][4];
    }
    t.n.push_back(n);
    for (int r = 0; r < 3; ++r) t.P[r] += P[r];
    t.E += E;
    t.momentum_scale += std::sqrt(2.0 * phase.set.species[k].mass * std::max(n, 0.0) * std::max(E, 0.0));
  }
  return t;
}

double conservation_drift(const ConservedTotals& a, const ConservedTotals& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.n.size(); ++k)
    if (a.n[k] != 0.0) d = std::max(d, std::abs(b.n[k] - a.n[k]) / std::abs(a.n[k]));
  const double scale = std::max(a.momentum_scale, 1e-300);
  for (int r = 0; r < 3; ++r) d = std::max(d, std::abs(b.P[r] - a.P[r]) / scale);
  if (a.E != 0.0) d = std::max(d, std::abs(b.E - a.E) / std::abs(a.E));
  return d;
}

double physical_temperature(const IntraAlpha& alpha) {
  if (alpha.vacuum || !(alpha.a2 < 0.0))
    throw DomainError("physical temperature needs a2 < 0");
  return -1.0 / alpha.a2;
}

double kinetic_energy_per_particle(const Moments& m, double mass) {
  return 1.5 * kinetic_temperature(m, mass);
}

Vec3 analytic_velocity_gap(double t, const Moments& m1, const Moments& m2, double mass1,
                           double mass2, double nu12, double nu21) {
  const double N1 = mass1 * m1.n;
  const double N2 = mass2 * m2.n;
  // nu~12 = nu12 n2 and nu~21 = nu21 n1 in the rate (nu12 n2 N2 + nu21 n1 N1)/(N1 + N2)
  const double rate = (nu12 * N2 + nu21 * N1) / (N1 + N2);
  const double decay = std::exp(-rate * t);
  Vec3 g;
  for (int r = 0; r < 3; ++r) g[r] = decay * (m1.P[r] / N1 - m2.P[r] / N2);
  return g;
}

namespace {

double duhamel_integrand(double c12, double c21, double mass1, double mass2, double n1,
                         double n2, Statistics s1, Statistics s2) {
  const double a = std::pow(mass1, 1.5) * eta_integrals(c12, s1).second;
  const double b = std::pow(mass2, 1.5) * eta_integrals(c21, s2).second;
  return (a / n1 - b / n2) / (a + b);
}

}  // namespace

double analytic_kinetic_temperature_gap(double t, const Moments& m1, const Moments& m2,
                                        double mass1, double mass2, Statistics s1,
                                        Statistics s2, double nu,
                                        std::span<const DuhamelSample> history) {
  const double N1 = mass1 * m1.n;
  const double N2 = mass2 * m2.n;
  const double e = std::exp(-nu * t);
  const double gap0 = kinetic_energy_per_particle(m1, mass1) - kinetic_energy_per_particle(m2, mass2);
  double du2 = 0.0;
  Vec3 Ptot;
  for (int r = 0; r < 3; ++r) {
    const double d = m2.P[r] / N2 - m1.P[r] / N1;
    du2 += d * d;
    Ptot[r] = m1.P[r] + m2.P[r];
  }
  double result = e * gap0;
  result += 0.5 * mass1 * mass2 * (m2.n * N2 - m1.n * N1) / ((N1 + N2) * (N1 + N2)) * e *
            (1.0 - e) * du2;

  if (s1 == Statistics::Classical && s2 == Statistics::Classical) return result;

  if (history.empty() || history.front().s > 1e-12 || history.back().s < t * (1.0 - 1e-12))
    throw DomainError("Duhamel term needs c12/c21 samples covering [0, t]");
  const double internal =
      m1.E + m2.E - 0.5 * (Ptot[0] * Ptot[0] + Ptot[1] * Ptot[1] + Ptot[2] * Ptot[2]) / (N1 + N2);
  double integral = 0.0;
  double prev_s = history.front().s;
  double prev_v = std::exp(nu * prev_s) * duhamel_integrand(history.front().c12, history.front().c21,
                                                            mass1, mass2, m1.n, m2.n, s1, s2);
  for (std::size_t i = 1; i < history.size() && prev_s < t; ++i) {
    const auto& h = history[i];
    double v = std::exp(nu * h.s) *
               duhamel_integrand(h.c12, h.c21, mass1, mass2, m1.n, m2.n, s1, s2);
    double s = h.s;
    if (s > t) {  // linear interpolation to the end point
      const double w = (t - prev_s) / (s - prev_s);
      v = prev_v + w * (v - prev_v);
      s = t;
    }
    integral += 0.5 * (s - prev_s) * (prev_v + v);
    prev_s = s;
    prev_v = v;
  }
  return result + nu * internal * e * integral;
}

double equilibrium_temperature(std::span<const Moments> moments, std::span<const double> masses) {
  return mixture_temperature(moments, masses);
}

AllPairsSolution diagnostic_equilibria(const PhaseSpace& phase, const Fields& f, std::size_t cell,
                                       const AllPairsSolution* warm, const SolverOptions& options) {
  const std::size_t S = phase.species_count();
  std::vector<SpeciesInput> in(S);
  for (std::size_t k = 0; k < S; ++k) {
    const std::size_t n = phase.nodes(k);
    in[k] = {std::span<const double>(f[k]).subspan(cell * n, n), &phase.grids[k],
             phase.set.species[k].statistics};
  }
  CoefficientMatrix c{S, std::vector<double>(S * S, 1.0)};
  for (std::size_t k = 0; k < S; ++k)
    for (std::size_t j = 0; j < S; ++j)
      if (k != j && phase.set.nu(k, j) > 0.0) c.c[k * S + j] = phase.set.nu(k, j);
  return solve_all_pairs(in, c, warm, options);
}

namespace {

double spread(const std::vector<double>& v) {
  if (v.size() == 2) return v[0] - v[1];
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

}  // namespace

void DiagnosticsRecorder::record(const Simulation& sim) {
  const auto& phase = sim.phase();
  const auto& f = sim.state().f;
  const std::size_t S = phase.species_count();
  DiagnosticsRecord r;
  r.time = sim.state().time;
  const double dx = sim.cell_width();
  const auto totals = species_totals(phase, f, dx);
  r.totals = conserved_totals(phase, f, dx, sim.state().outflow);
  r.species.resize(S);
  for (std::size_t k = 0; k < S; ++k) {
    auto& sp = r.species[k];
    sp.m = totals[k];
    const double mass = phase.set.species[k].mass;
    sp.T_kin = sp.m.n > 0.0 ? kinetic_temperature(sp.m, mass) : 0.0;
    for (int c = 0; c < 3; ++c) r.P_total[c] += sp.m.P[c];
    r.E_total += sp.m.E;
  }
  // Under the Monitor policy f may leave the entropy domain; H is then
  // undefined and recorded as NaN.
  if (check_positivity(phase, f).ok())
    r.H = total_entropy(phase, f, dx);
  else
    r.H = std::numeric_limits<double>::quiet_NaN();
  if (!records_.empty()) {
    const auto& prev = records_.back();
    const double dt = r.time - prev.time;
    r.dHdt = dt > 0.0 ? (r.H - prev.H) / dt : 0.0;
  }

  if (S >= 2) {
    std::vector<double> T(S);
    for (std::size_t k = 0; k < S; ++k) T[k] = r.species[k].T_kin;
    r.kinetic_gap = spread(T);
    double vg = 0.0;
    for (std::size_t k = 0; k < S; ++k) {
      for (std::size_t j = k + 1; j < S; ++j) {
        const double Nk = phase.set.species[k].mass * r.species[k].m.n;
        const double Nj = phase.set.species[j].mass * r.species[j].m.n;
        double d2 = 0.0;
        for (int c = 0; c < 3; ++c) {
          const double d = r.species[k].m.P[c] / Nk - r.species[j].m.P[c] / Nj;
          d2 += d * d;
        }
        vg = std::max(vg, std::sqrt(d2));
      }
    }
    r.velocity_gap = vg;
  }

  if (phase.cells == 1) {
    const AllPairsSolution sol =
        diagnostic_equilibria(phase, f, 0, warm_ ? &*warm_ : nullptr, sim.setup().solver);
    warm_ = sol;
    std::vector<double> theta(S);
    for (std::size_t k = 0; k < S; ++k) {
      theta[k] = sol.intra[k].vacuum ? std::numeric_limits<double>::quiet_NaN()
                                     : physical_temperature(sol.intra[k]);
      r.species[k].theta = theta[k];
    }
    if (S >= 2) r.theta_gap = spread(theta);
    for (std::size_t k = 0; k < S; ++k) {
      for (std::size_t j = k + 1; j < S; ++j) {
        const auto& a = sol.inter[pair_index(k, j, S)];
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const double ck = a.vacuum12 ? nan : alpha_to_abc(a.species_alpha(0), phase.set.species[k].mass).c;
        const double cj = a.vacuum21 ? nan : alpha_to_abc(a.species_alpha(1), phase.set.species[j].mass).c;
        r.c_pairs.push_back({ck, cj});
      }
    }
  }
  records_.push_back(std::move(r));
}

std::vector<DuhamelSample> DiagnosticsRecorder::duhamel_history(std::size_t k, std::size_t j) const {
  std::vector<DuhamelSample> out;
  for (const auto& r : records_) {
    const std::size_t S = r.species.size();
    if (r.c_pairs.empty()) continue;
    const auto& c = r.c_pairs[pair_index(k, j, S)];
    out.push_back({r.time, k < j ? c[0] : c[1], k < j ? c[1] : c[0]});
  }
  return out;
}

std::vector<ProfileRow> spatial_profile(const Simulation& sim) {
  const auto& phase = sim.phase();
  const auto& f = sim.state().f;
  const std::size_t S = phase.species_count();
  std::vector<ProfileRow> rows(phase.cells);
  for (std::size_t i = 0; i < phase.cells; ++i) {
    auto& row = rows[i];
    row.x = sim.setup().transport ? sim.setup().mesh.center(i) : 0.0;
    const AllPairsSolution* warm =
        sim.state().alphas[i].intra.empty() ? nullptr : &sim.state().alphas[i];
    for (std::size_t k = 0; k < S; ++k) {
      const std::size_t n = phase.nodes(k);
      const auto cell = std::span<const double>(f[k]).subspan(i * n, n);
      const auto m = compute_moments(cell, phase.grids[k]);
      const double mass = phase.set.species[k].mass;
      row.n.push_back(m.n);
      row.Ux.push_back(m.n > 0.0 ? m.P[0] / (mass * m.n) : 0.0);
      row.T_kin.push_back(m.n > 0.0 ? kinetic_temperature(m, mass) : 0.0);
      double theta = std::numeric_limits<double>::quiet_NaN();
      if (m.n > 0.0) {
        const auto targets = assemble_targets_intra(cell, phase.grids[k], 1.0);
        std::optional<IntraAlpha> w;
        if (warm) w = warm->intra[k];
        theta = physical_temperature(
            solve_intra(targets, phase.grids[k], phase.set.species[k].statistics, 1.0, w,
                        sim.setup().solver));
      }
      row.theta.push_back(theta);
    }
  }
  return rows;
}

}  // namespace qbgk
