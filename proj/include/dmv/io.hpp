#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmv/field.hpp"
#include "dmv/thermo.hpp"

namespace dmv {

struct Trajectory;

// Shortest decimal form with 17 significant digits, locale independent.
std::string format_number(double v);

// Snapshot CSV: header x,y,rho,ux,uy,theta, one row per cell in index order.
void write_snapshot_csv(const std::string& path, const ConservedState& s);
// Reads a snapshot written by write_snapshot_csv; the row count and cell
// centres must match g.
ConservedState read_snapshot_csv(const std::string& path, const Grid2D& g);

struct SeriesRow {
  double t, total_mass, total_rhotheta, total_energy, entropy_integral, dissipation_accum, min_theta, max_rho;
};

// Diagnostic totals of one state; entropy_integral is the integral of rho ln theta.
SeriesRow series_row(double t, const ConservedState& s, double dissipation_accum, const FluidParams& p);
std::vector<SeriesRow> time_series(const Trajectory& tr);

// Time-series CSV; rel_energy is appended as a column when given.
void write_timeseries_csv(const std::string& path, const std::vector<SeriesRow>& rows,
                          const std::optional<std::vector<double>>& rel_energy = std::nullopt);

}  // namespace dmv
