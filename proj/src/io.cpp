#include "qbgk/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "qbgk/errors.hpp"

namespace qbgk {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

namespace {

const std::string& name_of(const PhaseSpace& phase, std::size_t k) {
  return phase.set.species[k].name;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace

std::vector<std::string> series_header(const PhaseSpace& phase) {
  const std::size_t S = phase.species_count();
  std::vector<std::string> h{"t"};
  for (std::size_t k = 0; k < S; ++k)
    for (const char* c : {"n", "Px", "Py", "Pz", "T_kin", "theta"})
      h.push_back(std::string(c) + "_" + name_of(phase, k));
  for (const char* c : {"Ptot_x", "Ptot_y", "Ptot_z", "Etot", "H", "dHdt", "vel_gap", "Tkin_gap",
                        "theta_gap"})
    h.emplace_back(c);
  for (std::size_t k = 0; k < S; ++k)
    for (std::size_t j = k + 1; j < S; ++j) {
      const std::string suffix = "_" + name_of(phase, k) + "_" + name_of(phase, j);
      h.push_back("c12" + suffix);
      h.push_back("c21" + suffix);
    }
  return h;
}

std::vector<std::string> profile_header(const PhaseSpace& phase) {
  std::vector<std::string> h{"x"};
  for (std::size_t k = 0; k < phase.species_count(); ++k)
    for (const char* c : {"n", "Ux", "T_kin", "theta"})
      h.push_back(std::string(c) + "_" + name_of(phase, k));
  return h;
}

std::vector<double> series_row(const DiagnosticsRecord& r, const PhaseSpace& phase) {
  const std::size_t S = phase.species_count();
  const std::size_t pairs = S * (S - 1) / 2;
  std::vector<double> row{r.time};
  for (std::size_t k = 0; k < S; ++k) {
    const auto& s = r.species[k];
    row.insert(row.end(), {s.m.n, s.m.P[0], s.m.P[1], s.m.P[2], s.T_kin, s.theta});
  }
  row.insert(row.end(), {r.P_total[0], r.P_total[1], r.P_total[2], r.E_total, r.H, r.dHdt,
                         r.velocity_gap, r.kinetic_gap, r.theta_gap});
  for (std::size_t p = 0; p < pairs; ++p) {
    const bool have = p < r.c_pairs.size();
    row.push_back(have ? r.c_pairs[p][0] : std::nan(""));
    row.push_back(have ? r.c_pairs[p][1] : std::nan(""));
  }
  return row;
}

std::vector<double> profile_row(const ProfileRow& r, const PhaseSpace& phase) {
  std::vector<double> row{r.x};
  for (std::size_t k = 0; k < phase.species_count(); ++k)
    row.insert(row.end(), {r.n[k], r.Ux[k], r.T_kin[k], r.theta[k]});
  return row;
}

namespace {

void write_numbers(std::ostream& out, const std::vector<double>& row) {
  std::vector<std::string> cells;
  for (double v : row) cells.push_back(format_number(v));
  write_row(out, cells);
}

}  // namespace

void write_series(std::span<const DiagnosticsRecord> records, const PhaseSpace& phase,
                  const std::string& path) {
  auto out = open_out(path);
  write_row(out, series_header(phase));
  for (const auto& r : records) write_numbers(out, series_row(r, phase));
  finish(out, path);
}

void write_profile(std::span<const ProfileRow> rows, const PhaseSpace& phase,
                   const std::string& path) {
  auto out = open_out(path);
  write_row(out, profile_header(phase));
  for (const auto& r : rows) write_numbers(out, profile_row(r, phase));
  finish(out, path);
}

}  // namespace qbgk
