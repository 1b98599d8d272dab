#include "dmv/solver.hpp"

#include <cmath>
#include <random>

#include "dmv/io.hpp"

namespace dmv {

void SolverConfig::validate() const {
  fluid.validate();
  if (!(cfl > 0.0 && cfl <= 0.9)) throw std::invalid_argument("run.cfl must lie in (0, 0.9]");
  if (!(t_end >= 0.0)) throw std::invalid_argument("run.t_end must be nonnegative");
  if (output_every < 1) throw std::invalid_argument("run.output_every must be >= 1");
  if (forcing != "none" && forcing != "manufactured")
    throw std::invalid_argument("forcing must be 'none' or 'manufactured'");
  if (ic.kind != InitialCondition::Kind::file) {
    if (!(ic.rho0 > 0.0)) throw std::invalid_argument("ic.rho0 must be positive");
    if (!(ic.theta0 >= fluid.c_star)) throw std::invalid_argument("ic.theta0 must be >= fluid.c_star");
  }
  if (ic.kind == InitialCondition::Kind::perturbed) {
    if (!(ic.amplitude >= 0.0 && ic.amplitude < 1.0)) throw std::invalid_argument("ic.amplitude must lie in [0, 1)");
    if (ic.theta0 * (1.0 - ic.amplitude) < fluid.c_star)
      throw std::invalid_argument("ic.amplitude pushes theta below fluid.c_star");
    if (ic.modes < 1) throw std::invalid_argument("ic.modes must be >= 1");
  }
  if (ic.kind == InitialCondition::Kind::file && ic.path.empty()) throw std::invalid_argument("ic.path is required");
}

std::unique_ptr<StrongSolution> reference_solution(const SolverConfig& c) {
  if (c.forcing == "manufactured") {
    ManufacturedSolution::Params m;
    m.rho0 = c.ic.rho0;
    m.theta0 = c.ic.theta0;
    m.a_rho = c.ic.amplitude;
    m.a_theta = 0.5 * c.ic.amplitude;
    m.a_u = c.ic.amplitude;
    m.lx = c.grid.lx();
    m.ly = c.grid.ly();
    return std::make_unique<ManufacturedSolution>(m, c.fluid);
  }
  return std::make_unique<ConstantStrongSolution>(c.ic.rho0, c.ic.theta0);
}

ConservedState perturbed_state(const Grid2D& g, const InitialCondition& ic, const FluidParams&) {
  const double pi = 3.14159265358979323846;
  std::mt19937_64 rng(ic.seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> cos_mode(0, 3), sin_mode(1, 3);

  struct Mode {
    int p, q;
    double w;
  };
  auto draw = [&](std::uniform_int_distribution<int>& md) {
    std::vector<Mode> modes;
    double total = 0.0;
    for (int m = 0; m < ic.modes; ++m) {
      Mode mode{md(rng), md(rng), coef(rng)};
      total += std::abs(mode.w);
      modes.push_back(mode);
    }
    if (total > 0.0)
      for (Mode& m : modes) m.w /= total;
    return modes;
  };
  const auto rho_modes = draw(cos_mode);
  const auto theta_modes = draw(cos_mode);
  const auto ux_modes = draw(sin_mode);
  const auto uy_modes = draw(sin_mode);

  auto series = [&](const std::vector<Mode>& modes, double x, double y, bool sine) {
    double s = 0.0;
    for (const Mode& m : modes) {
      const double ax = m.p * pi * x / g.lx(), ay = m.q * pi * y / g.ly();
      s += m.w * (sine ? std::sin(ax) * std::sin(ay) : std::cos(ax) * std::cos(ay));
    }
    return s;
  };

  ScalarField rho(g), theta(g);
  VectorField u(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double x = g.xc(i), y = g.yc(j);
      rho(i, j) = ic.rho0 * (1.0 + ic.amplitude * series(rho_modes, x, y, false));
      theta(i, j) = ic.theta0 * (1.0 + ic.amplitude * series(theta_modes, x, y, false));
      u(i, j) = ic.amplitude * Vec2{series(ux_modes, x, y, true), series(uy_modes, x, y, true)};
    }
  }
  return ConservedState::from_primitive(rho, u, theta);
}

ConservedState initial_state(const SolverConfig& c) {
  if (c.forcing == "manufactured") return reference_solution(c)->project(c.grid, 0.0);
  switch (c.ic.kind) {
    case InitialCondition::Kind::constant:
      return ConservedState::uniform(c.grid, c.ic.rho0, c.ic.theta0, c.ic.u0);
    case InitialCondition::Kind::perturbed:
      return perturbed_state(c.grid, c.ic, c.fluid);
    case InitialCondition::Kind::file:
      return read_snapshot_csv(c.ic.path, c.grid);
  }
  throw std::logic_error("unreachable initial condition kind");
}

double cfl_dt(const ConservedState& s, const FluidParams& p, double cfl, Backend backend) {
  return cfl / kernels::max_rate(s, p, backend);
}

void check_admissible(const ConservedState& s, const FluidParams& p, double time) {
  const Grid2D& g = s.grid();
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double rho = s.rho(i, j);
      auto cell = [&] { return "cell (" + std::to_string(i) + ", " + std::to_string(j) + ")"; };
      if (!(rho > kDensityFloor)) throw SolverError("density floor violated at " + cell(), time);
      const double theta = s.z(i, j) / rho;
      if (!(theta >= p.c_star * (1.0 - kThetaTolerance)))
        throw SolverError("potential temperature below c_star at " + cell(), time);
      if (!std::isfinite(s.mom(i, j).x) || !std::isfinite(s.mom(i, j).y))
        throw SolverError("non-finite momentum at " + cell(), time);
    }
  }
}

ConservedState step(const ConservedState& s, double t, double dt, const FluidParams& p, Backend backend,
                    const StrongSolution* forcing) {
  Rhs r(s.grid());
  kernels::rhs(s, p, backend, r);
  const Grid2D& g = s.grid();
  if (forcing) {
    for (int j = 0; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) {
        const ForcingValue f = forcing->forcing(t, g.xc(i), g.yc(j), p);
        const std::size_t k = g.index(i, j);
        r.rho[k] += f.rho;
        r.mom[k] += f.mom;
        r.z[k] += f.z;
      }
    }
  }
  ConservedState out(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    out.rho[k] = s.rho[k] + dt * r.rho[k];
    out.mom[k] = s.mom[k] + dt * r.mom[k];
    out.z[k] = s.z[k] + dt * r.z[k];
  }
  check_admissible(out, p, t + dt);
  return out;
}

Trajectory run(const SolverConfig& c) { return run(c, initial_state(c)); }

Trajectory run(const SolverConfig& c, const ConservedState& initial) {
  c.validate();
  if (!(initial.grid() == c.grid)) throw std::invalid_argument("initial state grid does not match config grid");
  check_admissible(initial, c.fluid, 0.0);
  std::unique_ptr<StrongSolution> forcing;
  if (c.forcing == "manufactured") forcing = reference_solution(c);

  Trajectory tr;
  tr.config = c;
  ConservedState s = initial;
  double t = 0.0, accum = 0.0;
  tr.times.push_back(t);
  tr.states.push_back(s);
  tr.dissipation_accum.push_back(accum);

  while (t < c.t_end) {
    double dt;
    try {
      dt = cfl_dt(s, c.fluid, c.cfl, c.backend);
    } catch (const DomainError& e) {
      throw SolverError(e.what(), t);
    }
    bool last = false;
    if (t + dt >= c.t_end) {
      dt = c.t_end - t;
      last = true;
    }
    accum += dt * kernels::dissipation_rate(s, c.fluid, c.backend);
    s = step(s, t, dt, c.fluid, c.backend, forcing.get());
    t = last ? c.t_end : t + dt;
    ++tr.steps;
    if (last || tr.steps % static_cast<std::size_t>(c.output_every) == 0) {
      tr.times.push_back(t);
      tr.states.push_back(s);
      tr.dissipation_accum.push_back(accum);
    }
  }
  return tr;
}

}  // namespace dmv
