#include "dmv/uniqueness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "dmv/io.hpp"
#include "dmv/mvmeasure.hpp"
#include "dmv/relenergy.hpp"

namespace dmv {
namespace {

constexpr double kScalingTolerance = 0.10;
constexpr double kStabilityTolerance = 0.20;
constexpr double kEnvelopeSlack = 1.05;

std::vector<double> relative_energies(const Trajectory& tr, const StrongSolution& strong, const FluidParams& p) {
  std::vector<double> e(tr.size());
  for (std::size_t k = 0; k < tr.size(); ++k)
    e[k] = relative_energy_total(dirac_from_state(tr.states[k]), strong, tr.times[k], p);
  return e;
}

Trajectory run_eps(const SolverConfig& c, const StrongSolution& strong, double eps) {
  try {
    return run(c, perturbed_strong_state(c, strong, eps));
  } catch (const SolverError& e) {
    throw SolverError("eps = " + format_number(eps) + ": " + e.what(), e.time());
  }
}

std::string fmt(double v) { return format_number(v); }

}  // namespace

ConservedState perturbed_strong_state(const SolverConfig& base, const StrongSolution& strong, double eps) {
  const Grid2D& g = base.grid;
  const ConservedState s = strong.project(g, 0.0);
  if (eps == 0.0) return s;
  InitialCondition unit = base.ic;
  unit.rho0 = 1.0;
  unit.theta0 = 1.0;
  unit.amplitude = eps;
  const ConservedState f = perturbed_state(g, unit, base.fluid);
  const VectorField u = s.velocity(), du = f.velocity();
  const ScalarField theta = s.theta(), ftheta = f.theta();
  ScalarField rho(g), th(g);
  VectorField v(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    rho[k] = s.rho[k] * f.rho[k];
    th[k] = theta[k] * ftheta[k];
    v[k] = u[k] + du[k];
  }
  return ConservedState::from_primitive(rho, v, th);
}

UniquenessReport uniqueness_experiment(const SolverConfig& base, const std::vector<double>& eps,
                                       const StrongSolution& strong) {
  base.validate();
  if (eps.empty()) throw std::invalid_argument("uniqueness experiment needs at least one eps");
  std::vector<double> positive;
  bool zero = false;
  for (double e : eps) {
    if (e == 0.0) {
      zero = true;
    } else if (e > 0.0 && e < 1.0) {
      positive.push_back(e);
    } else {
      throw std::invalid_argument("eps must lie in [0, 1), got " + fmt(e));
    }
  }
  for (std::size_t k = 1; k < positive.size(); ++k)
    if (!(positive[k] < positive[k - 1])) throw std::invalid_argument("positive eps must be strictly decreasing");

  UniquenessReport rep;
  for (double e : positive) {
    const Trajectory tr = run_eps(base, strong, e);
    UniquenessRun r;
    r.eps = e;
    r.times = tr.times;
    r.E = relative_energies(tr, strong, base.fluid);
    r.E0 = r.E.front();
    if (!(r.E0 > 0.0)) throw std::runtime_error("eps = " + fmt(e) + ": initial relative energy is not positive");
    double sty = 0.0, stt = 0.0;
    for (std::size_t k = 0; k < r.times.size(); ++k) {
      sty += r.times[k] * std::log(r.E[k] / r.E0);
      stt += r.times[k] * r.times[k];
    }
    r.C = stt > 0.0 ? sty / stt : 0.0;
    for (std::size_t k = 0; k < r.times.size(); ++k) {
      const double ratio = r.E[k] / (r.E0 * std::exp(r.C * r.times[k]));
      r.envelope_ratio = std::max(r.envelope_ratio, ratio);
    }
    r.envelope_ok = r.envelope_ratio <= kEnvelopeSlack;
    rep.envelope_ok = rep.envelope_ok && r.envelope_ok;
    rep.runs.push_back(std::move(r));
  }

  for (std::size_t k = 1; k < rep.runs.size(); ++k) {
    const double q = rep.runs[k - 1].eps / rep.runs[k].eps;
    const double measured = rep.runs[k - 1].E0 / rep.runs[k].E0;
    if (std::abs(measured / (q * q) - 1.0) > kScalingTolerance) {
      rep.scaling_ok = false;
      rep.notes.push_back("E0 ratio " + fmt(measured) + " between eps " + fmt(rep.runs[k - 1].eps) + " and " +
                          fmt(rep.runs[k].eps) + " departs from " + fmt(q * q));
    }
  }
  if (rep.runs.size() >= 2) {
    rep.stability_checked = true;
    double lo = rep.runs[0].C, hi = rep.runs[0].C, mag = 0.0;
    for (const auto& r : rep.runs) {
      lo = std::min(lo, r.C);
      hi = std::max(hi, r.C);
      mag = std::max(mag, std::abs(r.C));
    }
    rep.stability_ok = hi - lo <= kStabilityTolerance * mag;
    if (!rep.stability_ok) rep.notes.push_back("fitted C spread " + fmt(hi - lo) + " exceeds 20% of " + fmt(mag));
  } else if (rep.runs.size() == 1) {
    rep.notes.push_back("single eps: C stability check skipped");
  }
  if (rep.runs.size() < 2 && !positive.empty()) rep.notes.push_back("single eps: E0 scaling check skipped");

  if (zero) {
    rep.zero_checked = true;
    // Discretisation error of the unperturbed run on the half-resolution grid.
    SolverConfig coarse = base;
    coarse.grid = Grid2D(std::max(1, base.grid.nx() / 2), std::max(1, base.grid.ny() / 2), base.grid.lx(),
                         base.grid.ly());
    const Trajectory tc = run_eps(coarse, strong, 0.0);
    const std::vector<double> ec = relative_energies(tc, strong, base.fluid);
    const auto b = strong.bounds();
    const double scale = thermo::pressure_potential(b.rho_hi * b.theta_hi, base.fluid) + b.rho_hi;
    rep.floor = std::max(*std::max_element(ec.begin(), ec.end()), 1e-12 * base.grid.area() * scale);

    const Trajectory tr = run_eps(base, strong, 0.0);
    UniquenessRun r;
    r.times = tr.times;
    r.E = relative_energies(tr, strong, base.fluid);
    r.E0 = r.E.front();
    for (double e : r.E) rep.zero_ok = rep.zero_ok && e <= rep.floor;
    if (!rep.zero_ok) rep.notes.push_back("eps = 0 relative energy exceeds the discretisation floor " + fmt(rep.floor));
    rep.runs.push_back(std::move(r));
  }
  return rep;
}

std::string uniqueness_report_json(const UniquenessReport& r) {
  nlohmann::ordered_json j;
  j["ok"] = r.ok();
  j["scaling_ok"] = r.scaling_ok;
  j["stability_checked"] = r.stability_checked;
  j["stability_ok"] = r.stability_ok;
  j["envelope_ok"] = r.envelope_ok;
  j["zero_checked"] = r.zero_checked;
  j["zero_ok"] = r.zero_ok;
  j["floor"] = r.floor;
  j["notes"] = r.notes;
  auto& runs = j["runs"] = nlohmann::ordered_json::array();
  for (const auto& run : r.runs) {
    nlohmann::ordered_json o;
    o["eps"] = run.eps;
    o["E0"] = run.E0;
    o["C"] = run.C;
    o["envelope_ratio"] = run.envelope_ratio;
    o["envelope_ok"] = run.envelope_ok;
    o["times"] = run.times;
    o["E"] = run.E;
    runs.push_back(std::move(o));
  }
  return j.dump(2);
}

}  // namespace dmv
