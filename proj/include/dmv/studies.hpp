#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmv/residuals.hpp"
#include "dmv/solver.hpp"

namespace dmv {

struct SimulateResult {
  Trajectory trajectory;
  std::vector<double> rel_energy;
};

// Runs the config and writes manifest.json, timeseries.csv (with rel_energy
// against the reference solution) and snapshot_NNNNN.csv into out_dir.
SimulateResult simulate(const SolverConfig& c, const std::string& out_dir);

struct ReiCheck {
  std::vector<ReiBreakdown> series;
  double slack = 0.0;         // 1e-8 + C (dx + dt_max)
  double worst_margin = 0.0;  // min over checkpoints of residual + slack
  double bracket_max = 0.0;   // max |T3..T6| over checkpoints
  bool ok = false;
};

inline constexpr double kReiSlackConstant = 1.0;
inline constexpr double kBracketTolerance = 1e-10;

// Relative energy inequality for the Dirac measures of a run against the
// config's reference solution; out_dir may be empty (no files written).
ReiCheck rei_check(const SolverConfig& c, const std::string& out_dir);

struct ConvergenceLevel {
  int n = 0;
  double dx = 0.0, dt_max = 0.0;
  double state_error = 0.0;      // L1 error of rho against the reference run
  double energy_residual = 0.0;  // energy inequality residual at t_end
  double rei_residual = 0.0;     // relative energy residual at t_end
  std::optional<double> state_order, energy_order, rei_order;
};

struct ConvergenceTable {
  int reference_n = 0;
  std::vector<ConvergenceLevel> levels;
};

inline constexpr double kErrorFloor = 1e-12;

// Self-convergence on n x n grids (n from levels, at least three, each
// dividing the reference 2 max(levels)). Orders are empty when both errors
// are below kErrorFloor.
ConvergenceTable convergence_study(const SolverConfig& c, const std::vector<int>& levels);
void write_convergence(const std::string& out_dir, const ConvergenceTable& t);

// Cell averages of a fine state on a nested coarse grid.
ConservedState restrict_state(const ConservedState& fine, const Grid2D& coarse);

// Largest time step of a trajectory.
double max_dt(const Trajectory& tr);

}  // namespace dmv
