#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmv/field.hpp"
#include "dmv/kernels.hpp"
#include "dmv/strong.hpp"
#include "dmv/thermo.hpp"

namespace dmv {

// Raised on positivity loss; carries the simulation time when known.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what, double time = -1.0) : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

inline constexpr double kDensityFloor = 1e-10;
inline constexpr double kThetaTolerance = 1e-12;

struct InitialCondition {
  enum class Kind { constant, perturbed, file };
  Kind kind = Kind::constant;
  double rho0 = 1.0, theta0 = 1.0;
  Vec2 u0;
  // Relative amplitude of the smooth perturbation.
  double amplitude = 0.1;
  int modes = 3;
  std::uint64_t seed = 1;
  // Snapshot CSV for kind == file.
  std::string path;
};

struct SolverConfig {
  Grid2D grid{64, 64};
  FluidParams fluid;
  double cfl = 0.4;
  double t_end = 0.1;
  // Record every n-th step; the final state is always recorded.
  int output_every = 1;
  InitialCondition ic;
  // "none" or "manufactured".
  std::string forcing = "none";
  Backend backend = Backend::openmp;

  // Throws std::invalid_argument / DomainError naming the offending setting.
  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ConservedState> states;
  // sum over steps of dt * integral S(grad u) : grad u, at each recorded time.
  std::vector<double> dissipation_accum;
  std::size_t steps = 0;
  SolverConfig config;

  std::size_t size() const { return times.size(); }
};

// Reference triplet implied by a config: the manufactured solution when
// forcing is enabled, otherwise the constant state (rho0, theta0).
std::unique_ptr<StrongSolution> reference_solution(const SolverConfig& c);

ConservedState initial_state(const SolverConfig& c);

// Smooth random perturbation of (rho0, theta0, 0) with relative amplitude
// ic.amplitude. Velocity modes vanish on the walls; rho and theta modes have
// zero normal derivative there.
ConservedState perturbed_state(const Grid2D& g, const InitialCondition& ic, const FluidParams& p);

double cfl_dt(const ConservedState& s, const FluidParams& p, double cfl, Backend backend = Backend::openmp);

// One explicit Euler step. forcing may be null. Throws SolverError naming
// the first cell that leaves the admissible set.
ConservedState step(const ConservedState& s, double t, double dt, const FluidParams& p, Backend backend,
                    const StrongSolution* forcing = nullptr);

// Throws SolverError naming the first inadmissible cell, if any.
void check_admissible(const ConservedState& s, const FluidParams& p, double time);

Trajectory run(const SolverConfig& c);
Trajectory run(const SolverConfig& c, const ConservedState& initial);

}  // namespace dmv
