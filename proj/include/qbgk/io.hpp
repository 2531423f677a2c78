#pragma once

#include <span>
#include <string>
#include <vector>

#include "qbgk/diagnostics.hpp"

namespace qbgk {

/// Column names of the diagnostics series. Species columns carry the species
/// name as suffix (n_e, Px_e, ...); pair columns carry both names (c12_S_F).
std::vector<std::string> series_header(const PhaseSpace& phase);
std::vector<std::string> profile_header(const PhaseSpace& phase);

/// Values in header order.
std::vector<double> series_row(const DiagnosticsRecord& r, const PhaseSpace& phase);
std::vector<double> profile_row(const ProfileRow& r, const PhaseSpace& phase);

/// One CSV row per record, %.16e formatting. Throws IoError; zero records give a header-only file.
void write_series(std::span<const DiagnosticsRecord> records, const PhaseSpace& phase,
                  const std::string& path);
void write_profile(std::span<const ProfileRow> rows, const PhaseSpace& phase,
                   const std::string& path);

std::string format_number(double x);

}  // namespace qbgk
