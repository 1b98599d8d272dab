#include "dmv/studies.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "dmv/config.hpp"
#include "dmv/io.hpp"
#include "dmv/relenergy.hpp"

namespace dmv {
namespace {

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text << '\n';
}

std::string snapshot_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%05zu.csv", k);
  return buf;
}

std::optional<double> order(double coarse, double fine, double ratio) {
  if (std::abs(coarse) <= kErrorFloor && std::abs(fine) <= kErrorFloor) return std::nullopt;
  return std::log(std::abs(coarse) / std::abs(fine)) / std::log(ratio);
}

}  // namespace

double max_dt(const Trajectory& tr) {
  double m = 0.0;
  for (std::size_t k = 1; k < tr.size(); ++k) m = std::max(m, tr.times[k] - tr.times[k - 1]);
  return m;
}

SimulateResult simulate(const SolverConfig& c, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const auto start = std::chrono::steady_clock::now();
  SimulateResult r;
  r.trajectory = run(c);
  const Trajectory& tr = r.trajectory;
  const auto strong = reference_solution(c);
  r.rel_energy = relative_energy_series(MeasureSequence::dirac(tr), *strong, c.fluid);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const fs::path out(out_dir);
  write_timeseries_csv((out / "timeseries.csv").string(), time_series(tr), r.rel_energy);
  std::vector<std::string> snaps;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    snaps.push_back(snapshot_name(k));
    write_snapshot_csv((out / snaps.back()).string(), tr.states[k]);
  }

  nlohmann::ordered_json m;
  m["command"] = "simulate";
  m["config"] = nlohmann::ordered_json::parse(config_to_json(c));
  m["reference"] = strong->name();
  m["steps"] = tr.steps;
  m["t_final"] = tr.times.back();
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < tr.size(); ++k) files.push_back({{"t", tr.times[k]}, {"file", snaps[k]}});
  m["snapshots"] = files;
  m["timeseries"] = "timeseries.csv";
  m["wall_seconds"] = seconds;
  write_text(out / "manifest.json", m.dump(2));
  return r;
}

ReiCheck rei_check(const SolverConfig& c, const std::string& out_dir) {
  const Trajectory tr = run(c);
  const auto strong = reference_solution(c);
  ReiCheck chk;
  chk.series = rei_series(tr, MeasureSequence::dirac(tr), {}, *strong, c.fluid);
  chk.slack = 1e-8 + kReiSlackConstant * (std::max(c.grid.dx(), c.grid.dy()) + max_dt(tr));
  chk.worst_margin = std::numeric_limits<double>::infinity();
  for (const ReiBreakdown& b : chk.series) {
    chk.worst_margin = std::min(chk.worst_margin, b.residual + chk.slack);
    for (int k = 2; k <= 5; ++k) chk.bracket_max = std::max(chk.bracket_max, std::abs(b.terms[k]));
  }
  // Brackets vanish only when the reference solves the unforced system.
  const bool exact_reference = c.forcing == "none";
  chk.ok = chk.worst_margin >= 0.0 && (!exact_reference || chk.bracket_max <= kBracketTolerance);

  if (!out_dir.empty()) {
    const fs::path out(out_dir);
    fs::create_directories(out);
    std::ofstream csv(out / "rei.csv");
    if (!csv) throw std::runtime_error("cannot write rei.csv");
    csv << "t,energy_jump,energy_defect,dissipation_defect,dissipation,lhs,T1,T2,T3,T4,T5,T6,T7,T8,rhs,residual\n";
    for (const ReiBreakdown& b : chk.series) {
      csv << format_number(b.t) << ',' << format_number(b.energy_jump) << ',' << format_number(b.energy_defect) << ','
          << format_number(b.dissipation_defect) << ',' << format_number(b.dissipation) << ','
          << format_number(b.lhs);
      for (double v : b.terms) csv << ',' << format_number(v);
      csv << ',' << format_number(b.rhs()) << ',' << format_number(b.residual) << '\n';
    }
    nlohmann::ordered_json m;
    m["command"] = "rei-check";
    m["config"] = nlohmann::ordered_json::parse(config_to_json(c));
    m["reference"] = strong->name();
    m["slack"] = chk.slack;
    m["worst_margin"] = chk.worst_margin;
    m["bracket_max"] = chk.bracket_max;
    m["ok"] = chk.ok;
    write_text(out / "manifest.json", m.dump(2));
  }
  return chk;
}

ConservedState restrict_state(const ConservedState& fine, const Grid2D& coarse) {
  const Grid2D& f = fine.grid();
  if (f.nx() % coarse.nx() != 0 || f.ny() % coarse.ny() != 0 || f.lx() != coarse.lx() || f.ly() != coarse.ly())
    throw std::invalid_argument("restrict_state: grids are not nested");
  const int rx = f.nx() / coarse.nx(), ry = f.ny() / coarse.ny();
  const double w = 1.0 / (rx * ry);
  ConservedState out(coarse);
  for (int j = 0; j < coarse.ny(); ++j) {
    for (int i = 0; i < coarse.nx(); ++i) {
      double r = 0.0, z = 0.0;
      Vec2 m;
      for (int b = 0; b < ry; ++b) {
        for (int a = 0; a < rx; ++a) {
          const std::size_t k = f.index(i * rx + a, j * ry + b);
          r += fine.rho[k];
          z += fine.z[k];
          m += fine.mom[k];
        }
      }
      out.rho(i, j) = w * r;
      out.z(i, j) = w * z;
      out.mom(i, j) = w * m;
    }
  }
  return out;
}

ConvergenceTable convergence_study(const SolverConfig& c, const std::vector<int>& levels_in) {
  if (levels_in.size() < 3) throw std::invalid_argument("convergence study needs at least three levels");
  std::vector<int> levels = levels_in;
  std::sort(levels.begin(), levels.end());
  if (std::adjacent_find(levels.begin(), levels.end()) != levels.end() || levels.front() < 2)
    throw std::invalid_argument("levels must be distinct and >= 2");
  ConvergenceTable t;
  t.reference_n = 2 * levels.back();
  for (int n : levels)
    if (t.reference_n % n != 0) throw std::invalid_argument("level " + std::to_string(n) + " does not divide the reference");

  SolverConfig ref = c;
  ref.grid = Grid2D(t.reference_n, t.reference_n, c.grid.lx(), c.grid.ly());
  ref.output_every = std::numeric_limits<int>::max();
  const ConservedState ref_final = run(ref).states.back();
  const auto strong = reference_solution(c);

  for (int n : levels) {
    SolverConfig lc = c;
    lc.grid = Grid2D(n, n, c.grid.lx(), c.grid.ly());
    const Trajectory tr = run(lc);
    const MeasureSequence ms = MeasureSequence::dirac(tr);
    const std::size_t last = tr.size() - 1;
    ConvergenceLevel L;
    L.n = n;
    L.dx = lc.grid.dx();
    L.dt_max = max_dt(tr);
    const ConservedState restricted = restrict_state(ref_final, lc.grid);
    ScalarField err(lc.grid);
    for (std::size_t k = 0; k < err.size(); ++k) err[k] = std::abs(tr.states[last].rho[k] - restricted.rho[k]);
    L.state_error = integrate(err);
    L.energy_residual = energy_inequality_residual(tr, ms, {}, lc.fluid, last);
    L.rei_residual = rei_series(tr, ms, {}, *strong, lc.fluid).back().residual;
    t.levels.push_back(L);
  }
  for (std::size_t k = 1; k < t.levels.size(); ++k) {
    ConvergenceLevel& a = t.levels[k - 1];
    ConvergenceLevel& b = t.levels[k];
    const double ratio = static_cast<double>(b.n) / a.n;
    b.state_order = order(a.state_error, b.state_error, ratio);
    b.energy_order = order(a.energy_residual, b.energy_residual, ratio);
    b.rei_order = order(a.rei_residual, b.rei_residual, ratio);
  }
  return t;
}

void write_convergence(const std::string& out_dir, const ConvergenceTable& t) {
  const fs::path out(out_dir);
  fs::create_directories(out);
  auto cell = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("n/a"); };
  std::ofstream csv(out / "convergence.csv");
  if (!csv) throw std::runtime_error("cannot write convergence.csv");
  csv << "n,dx,dt_max,state_error,state_order,energy_residual,energy_order,rei_residual,rei_order\n";
  nlohmann::ordered_json j;
  j["reference_n"] = t.reference_n;
  auto& rows = j["levels"] = nlohmann::ordered_json::array();
  for (const ConvergenceLevel& L : t.levels) {
    csv << L.n << ',' << format_number(L.dx) << ',' << format_number(L.dt_max) << ',' << format_number(L.state_error)
        << ',' << cell(L.state_order) << ',' << format_number(L.energy_residual) << ',' << cell(L.energy_order) << ','
        << format_number(L.rei_residual) << ',' << cell(L.rei_order) << '\n';
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json("n/a"); };
    rows.push_back({{"n", L.n},
                    {"dx", L.dx},
                    {"dt_max", L.dt_max},
                    {"state_error", L.state_error},
                    {"state_order", opt(L.state_order)},
                    {"energy_residual", L.energy_residual},
                    {"energy_order", opt(L.energy_order)},
                    {"rei_residual", L.rei_residual},
                    {"rei_order", opt(L.rei_order)}});
  }
  write_text(out / "convergence.json", j.dump(2));
}

}  // namespace dmv
