#pragma once

#include <stdexcept>
#include <string>

#include "dmv/solver.hpp"

namespace dmv {

// Malformed configuration; line() is 0 when no single line is at fault.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Flat text with dotted keys, one `key = value` per line and `#` comments:
//   grid.nx, grid.ny, grid.lx, grid.ly
//   fluid.gamma, fluid.a, fluid.mu, fluid.lambda, fluid.c_star
//   run.t_end, run.cfl, run.output_every, run.backend (serial | openmp)
//   ic.kind (constant | perturbed | file), ic.rho0, ic.theta0, ic.ux, ic.uy,
//   ic.amplitude, ic.modes, ic.seed, ic.path
//   forcing (none | manufactured)
// grid.nx, grid.ny, run.t_end and ic.kind are required. Text starting with
// '{' is read as JSON with the same keys, nested or dotted.
SolverConfig parse_config(const std::string& text);
SolverConfig load_config(const std::string& path);

// Fully resolved config as JSON (nested by section).
std::string config_to_json(const SolverConfig& c);

}  // namespace dmv
