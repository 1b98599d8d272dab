#include "dmv/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dmv/solver.hpp"

namespace dmv {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_snapshot_csv(const std::string& path, const ConservedState& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "x,y,rho,ux,uy,theta\n";
  const Grid2D& g = s.grid();
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double rho = s.rho(i, j);
      const Vec2 u = (1.0 / rho) * s.mom(i, j);
      out << format_number(g.xc(i)) << ',' << format_number(g.yc(j)) << ',' << format_number(rho) << ','
          << format_number(u.x) << ',' << format_number(u.y) << ',' << format_number(s.z(i, j) / rho) << '\n';
    }
  }
}

namespace {

double parse_number(std::string_view tok, const std::string& where) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw std::runtime_error(where + ": cannot parse number '" + std::string(tok) + "'");
  return v;
}

}  // namespace

ConservedState read_snapshot_csv(const std::string& path, const Grid2D& g) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != "x,y,rho,ux,uy,theta")
    throw std::runtime_error(path + ": line 1: expected header x,y,rho,ux,uy,theta");
  ScalarField rho(g), theta(g);
  VectorField u(g);
  std::size_t k = 0;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = path + ": line " + std::to_string(lineno);
    if (k >= g.size()) throw std::runtime_error(where + ": more rows than grid cells");
    double v[6];
    std::size_t start = 0;
    for (int c = 0; c < 6; ++c) {
      const std::size_t end = c < 5 ? line.find(',', start) : line.size();
      if (end == std::string::npos) throw std::runtime_error(where + ": expected 6 columns");
      v[c] = parse_number(std::string_view(line).substr(start, end - start), where);
      start = end + 1;
    }
    const int i = static_cast<int>(k % g.nx()), j = static_cast<int>(k / g.nx());
    const double tol = 1e-9 * std::max(g.dx(), g.dy());
    if (std::abs(v[0] - g.xc(i)) > tol || std::abs(v[1] - g.yc(j)) > tol)
      throw std::runtime_error(where + ": cell centre does not match the configured grid");
    rho[k] = v[2];
    u[k] = {v[3], v[4]};
    theta[k] = v[5];
    ++k;
  }
  if (k != g.size()) throw std::runtime_error(path + ": expected " + std::to_string(g.size()) + " rows");
  return ConservedState::from_primitive(rho, u, theta);
}

SeriesRow series_row(double t, const ConservedState& s, double dissipation_accum, const FluidParams& p) {
  const Grid2D& g = s.grid();
  ScalarField energy(g), ent(g);
  double min_theta = INFINITY, max_rho = -INFINITY;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double rho = s.rho[k], theta = s.z[k] / rho;
    energy[k] = 0.5 * norm2(s.mom[k]) / rho + thermo::pressure_potential(s.z[k], p);
    ent[k] = rho * std::log(theta);
    min_theta = std::min(min_theta, theta);
    max_rho = std::max(max_rho, rho);
  }
  return {t, integrate(s.rho), integrate(s.z), integrate(energy), integrate(ent), dissipation_accum, min_theta,
          max_rho};
}

std::vector<SeriesRow> time_series(const Trajectory& tr) {
  std::vector<SeriesRow> rows;
  rows.reserve(tr.size());
  for (std::size_t n = 0; n < tr.size(); ++n)
    rows.push_back(series_row(tr.times[n], tr.states[n], tr.dissipation_accum[n], tr.config.fluid));
  return rows;
}

void write_timeseries_csv(const std::string& path, const std::vector<SeriesRow>& rows,
                          const std::optional<std::vector<double>>& rel_energy) {
  if (rel_energy && rel_energy->size() != rows.size())
    throw std::invalid_argument("rel_energy column length does not match the time series");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "t,total_mass,total_rhotheta,total_energy,entropy_integral,dissipation_accum,min_theta,max_rho";
  if (rel_energy) out << ",rel_energy";
  out << '\n';
  for (std::size_t n = 0; n < rows.size(); ++n) {
    const SeriesRow& r = rows[n];
    out << format_number(r.t) << ',' << format_number(r.total_mass) << ',' << format_number(r.total_rhotheta) << ','
        << format_number(r.total_energy) << ',' << format_number(r.entropy_integral) << ','
        << format_number(r.dissipation_accum) << ',' << format_number(r.min_theta) << ','
        << format_number(r.max_rho);
    if (rel_energy) out << ',' << format_number((*rel_energy)[n]);
    out << '\n';
  }
}

}  // namespace dmv
