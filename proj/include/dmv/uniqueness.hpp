#pragma once

#include <string>
#include <vector>

#include "dmv/solver.hpp"
#include "dmv/strong.hpp"

namespace dmv {

struct UniquenessRun {
  double eps = 0.0;
  std::vector<double> times, E;
  double E0 = 0.0;
  // Least-squares slope of ln(E/E0) against t through the origin.
  double C = 0.0;
  bool envelope_ok = true;
  // Largest E(t)/(E0 exp(C t)) over the checkpoints.
  double envelope_ratio = 0.0;
};

struct UniquenessReport {
  std::vector<UniquenessRun> runs;
  bool scaling_ok = true;
  bool stability_ok = true;
  bool stability_checked = false;
  bool envelope_ok = true;
  // Set only when an eps = 0 run is requested.
  bool zero_checked = false;
  bool zero_ok = true;
  double floor = 0.0;
  std::vector<std::string> notes;

  bool ok() const { return scaling_ok && stability_ok && envelope_ok && zero_ok; }
};

// Initial data: the strong solution sampled at cell centres, then rho and theta
// scaled by (1 + eps sum) and eps sum added to u, using the random modes of
// base.ic with amplitude eps.
ConservedState perturbed_strong_state(const SolverConfig& base, const StrongSolution& strong, double eps);

// Relative energy against the strong solution at every checkpoint of runs
// from eps-perturbed strong data. Positive eps must be decreasing. A solver
// failure is rethrown as SolverError naming the eps.
UniquenessReport uniqueness_experiment(const SolverConfig& base, const std::vector<double>& eps,
                                       const StrongSolution& strong);

std::string uniqueness_report_json(const UniquenessReport& r);

}  // namespace dmv
