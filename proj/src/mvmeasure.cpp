#include "dmv/mvmeasure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "dmv/io.hpp"

namespace dmv {

CellMeasure::CellMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("CellMeasure: needs at least one atom");
  double sum = 0.0;
  for (const Atom& a : atoms_) sum += a.weight;
  if (sum != 1.0 && std::abs(sum - 1.0) <= kWeightTolerance)
    for (Atom& a : atoms_) a.weight /= sum;
}

CellMeasure CellMeasure::dirac(double rho, double theta, Vec2 u) { return CellMeasure({Atom{1.0, rho, theta, u}}); }

MeasureField::MeasureField(const Grid2D& g, const std::vector<CellMeasure>& cells) : grid_(g) {
  if (cells.size() != g.size()) throw std::invalid_argument("MeasureField: need one measure per cell");
  offsets_.reserve(cells.size() + 1);
  offsets_.push_back(0);
  for (const CellMeasure& c : cells) {
    atoms_.insert(atoms_.end(), c.atoms().begin(), c.atoms().end());
    offsets_.push_back(atoms_.size());
  }
}

namespace {

constexpr std::string_view kNames[] = {"rho",           "momentum",        "rho_theta", "rho_theta_u",
                                       "rho_log_theta", "rho_log_theta_u", "velocity",  "rho_u_u",
                                       "pressure",      "energy"};

double log_theta_weight(const Atom& a) { return a.rho == 0.0 ? 0.0 : a.rho * std::log(a.theta); }

ObservableValue evaluate(const Atom& a, Observable o, const FluidParams& p) {
  switch (o) {
    case Observable::rho: return a.rho;
    case Observable::momentum: return a.rho * a.u;
    case Observable::rho_theta: return a.rho * a.theta;
    case Observable::rho_theta_u: return (a.rho * a.theta) * a.u;
    case Observable::rho_log_theta: return log_theta_weight(a);
    case Observable::rho_log_theta_u: return log_theta_weight(a) * a.u;
    case Observable::velocity: return a.u;
    case Observable::rho_u_u: return a.rho * Mat2::outer(a.u, a.u);
    case Observable::pressure: return thermo::pressure(a.rho * a.theta, p);
    case Observable::energy: return 0.5 * a.rho * norm2(a.u) + thermo::pressure_potential(a.rho * a.theta, p);
  }
  throw std::invalid_argument("unknown observable");
}

template <class T>
T expect_as(std::span<const Atom> cell, Observable o, const FluidParams& p) {
  T s{};
  for (const Atom& a : cell) {
    const ObservableValue v = evaluate(a, o, p);
    const T* x = std::get_if<T>(&v);
    if (!x) throw std::invalid_argument("observable '" + std::string(observable_name(o)) + "' has a different rank");
    s += a.weight * *x;
  }
  return s;
}

template <class T, class Out>
Out field_of(const MeasureField& m, Observable o, const FluidParams& p) {
  const Grid2D& g = m.grid();
  Out out(g);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(g.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = expect_as<T>(m.cell(k), o, p);
  return out;
}

}  // namespace

Observable observable_from_name(std::string_view name) {
  for (std::size_t k = 0; k < std::size(kNames); ++k)
    if (kNames[k] == name) return static_cast<Observable>(k);
  throw std::invalid_argument("unknown observable '" + std::string(name) + "'");
}

std::string_view observable_name(Observable o) { return kNames[static_cast<std::size_t>(o)]; }

ObservableValue expectation(std::span<const Atom> cell, Observable o, const FluidParams& p) {
  if (cell.empty()) throw std::invalid_argument("expectation: empty cell measure");
  const ObservableValue first = evaluate(cell[0], o, p);
  if (std::holds_alternative<double>(first)) return expect_as<double>(cell, o, p);
  if (std::holds_alternative<Vec2>(first)) return expect_as<Vec2>(cell, o, p);
  return expect_as<Mat2>(cell, o, p);
}

double expect_scalar(std::span<const Atom> cell, Observable o, const FluidParams& p) {
  return expect_as<double>(cell, o, p);
}
Vec2 expect_vector(std::span<const Atom> cell, Observable o, const FluidParams& p) {
  return expect_as<Vec2>(cell, o, p);
}
Mat2 expect_tensor(std::span<const Atom> cell, Observable o, const FluidParams& p) {
  return expect_as<Mat2>(cell, o, p);
}

ScalarField expectation_field(const MeasureField& m, Observable o, const FluidParams& p) {
  return field_of<double, ScalarField>(m, o, p);
}
VectorField expectation_vector_field(const MeasureField& m, Observable o, const FluidParams& p) {
  return field_of<Vec2, VectorField>(m, o, p);
}
TensorField expectation_tensor_field(const MeasureField& m, Observable o, const FluidParams& p) {
  return field_of<Mat2, TensorField>(m, o, p);
}

MeasureField dirac_from_state(const ConservedState& s) {
  const Grid2D& g = s.grid();
  std::vector<CellMeasure> cells;
  cells.reserve(g.size());
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double rho = s.rho(i, j);
      if (!(rho > 0.0))
        throw DomainError("dirac_from_state: zero density at cell (" + std::to_string(i) + ", " + std::to_string(j) +
                          ")");
      cells.push_back(CellMeasure::dirac(rho, s.z(i, j) / rho, (1.0 / rho) * s.mom(i, j)));
    }
  }
  return MeasureField(g, cells);
}

MeasureField ensemble_from_refinement(const std::vector<ConservedState>& fine, const Grid2D& coarse) {
  if (fine.empty()) throw std::invalid_argument("ensemble_from_refinement: no fine states");
  const Grid2D& fg = fine.front().grid();
  for (const ConservedState& s : fine)
    if (!(s.grid() == fg)) throw std::invalid_argument("ensemble_from_refinement: fine states on different grids");
  const bool same_box = std::abs(fg.lx() - coarse.lx()) <= 1e-12 * coarse.lx() &&
                        std::abs(fg.ly() - coarse.ly()) <= 1e-12 * coarse.ly();
  if (!same_box || fg.nx() % coarse.nx() != 0 || fg.ny() % coarse.ny() != 0 ||
      fg.nx() / coarse.nx() != fg.ny() / coarse.ny())
    throw std::invalid_argument("ensemble_from_refinement: fine grid is not a uniform refinement of the coarse grid");
  const int k = fg.nx() / coarse.nx();
  const double w = 1.0 / (static_cast<double>(k) * k * fine.size());

  std::vector<CellMeasure> cells;
  cells.reserve(coarse.size());
  for (int J = 0; J < coarse.ny(); ++J) {
    for (int I = 0; I < coarse.nx(); ++I) {
      std::vector<Atom> atoms;
      atoms.reserve(static_cast<std::size_t>(k) * k * fine.size());
      for (const ConservedState& s : fine) {
        for (int b = 0; b < k; ++b) {
          for (int a = 0; a < k; ++a) {
            const int i = I * k + a, j = J * k + b;
            const double rho = s.rho(i, j);
            if (!(rho > 0.0)) throw DomainError("ensemble_from_refinement: zero density in fine state");
            atoms.push_back(Atom{w, rho, s.z(i, j) / rho, (1.0 / rho) * s.mom(i, j)});
          }
        }
      }
      cells.emplace_back(std::move(atoms));
    }
  }
  return MeasureField(coarse, cells);
}

ConservedState barycentre(const MeasureField& m) {
  ConservedState s(m.grid());
  const FluidParams p;
  for (std::size_t k = 0; k < m.grid().size(); ++k) {
    s.rho[k] = expect_scalar(m.cell(k), Observable::rho, p);
    s.mom[k] = expect_vector(m.cell(k), Observable::momentum, p);
    s.z[k] = expect_scalar(m.cell(k), Observable::rho_theta, p);
  }
  return s;
}

DefectFields DefectFields::zero(const Grid2D& g, int dim) {
  DefectFields d(g);
  d.d_lo = 1.0;
  d.d_hi = dim;
  return d;
}

DefectFields infer_defects(const MeasureField& m, const FluidParams& p) {
  const Grid2D& g = m.grid();
  DefectFields d = DefectFields::zero(g, p.dim);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto cell = m.cell(k);
    const double rho = expect_scalar(cell, Observable::rho, p);
    const Vec2 mom = expect_vector(cell, Observable::momentum, p);
    const double z = expect_scalar(cell, Observable::rho_theta, p);
    const Vec2 ubar = (1.0 / rho) * mom;
    // Density-weighted velocity covariance: <rho u u> - m m / rho, PSD by construction.
    Mat2 R{};
    for (const Atom& a : cell) R += (a.weight * a.rho) * Mat2::outer(a.u - ubar, a.u - ubar);
    double pgap = 0.0;
    for (const Atom& a : cell) pgap += a.weight * thermo::pressure_potential(a.rho * a.theta, p);
    pgap -= thermo::pressure_potential(z, p);
    d.R[k] = R;
    d.E[k] = 0.5 * R.trace() + std::max(0.0, pgap);
  }
  return d;
}

bool ValidationReport::has(std::string_view kind) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

ValidationReport validate(const MeasureField& m, const DefectFields& d, const FluidParams& p) {
  ValidationReport r;
  auto add = [&](std::string kind, int i, int j, std::string msg) {
    r.violations.push_back({std::move(kind), i, j, std::move(msg)});
  };
  const Grid2D& g = m.grid();
  if (!(d.E.grid() == g) || !(d.D.grid() == g) || !(d.R.grid() == g)) {
    add("grid", -1, -1, "defect fields live on a different grid than the measure");
    return r;
  }
  if (!(d.d_lo > 0.0) || !(d.d_lo <= d.d_hi))
    add("trace_constants", -1, -1, "trace constants must satisfy 0 < d_lo <= d_hi");

  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const auto cell = m.cell(i, j);
      double sum = 0.0;
      for (std::size_t a = 0; a < cell.size(); ++a) {
        const Atom& at = cell[a];
        sum += at.weight;
        const std::string tag = "atom " + std::to_string(a) + ": ";
        if (!(at.weight > 0.0 && at.weight <= 1.0)) add("weight", i, j, tag + "weight outside (0, 1]");
        if (!(at.rho >= 0.0)) add("density", i, j, tag + "negative density");
        if (!(at.theta >= p.c_star)) add("theta_floor", i, j, tag + "theta below c_star");
      }
      if (!(std::abs(sum - 1.0) <= kWeightTolerance)) add("weight_sum", i, j, "weights do not sum to 1");

      const double E = d.E(i, j), D = d.D(i, j);
      const Mat2& R = d.R(i, j);
      if (!(E >= 0.0)) add("energy_defect", i, j, "negative energy defect");
      if (!(D >= 0.0)) add("dissipation_defect", i, j, "negative dissipation defect");
      const double scale = std::max({std::abs(R.xx), std::abs(R.yy), std::abs(R.xy), std::abs(R.yx), std::abs(E)});
      const double tol = 1e-12 * scale;
      if (std::abs(R.xy - R.yx) > tol) add("reynolds_symmetry", i, j, "Reynolds defect not symmetric");
      const double off = 0.5 * (R.xy + R.yx);
      const double min_eig = 0.5 * (R.xx + R.yy) - std::hypot(0.5 * (R.xx - R.yy), off);
      if (min_eig < -tol) add("reynolds_psd", i, j, "Reynolds defect not positive semi-definite");
      const double tr = R.trace();
      if (tr < d.d_lo * E - tol || tr > d.d_hi * E + tol)
        add("trace_bound", i, j, "tr(R) outside [d_lo E, d_hi E]");
    }
  }
  return r;
}

void write_measure_csv(const std::string& path, const MeasureField& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "cell_i,cell_j,atom_k,weight,rho,theta,ux,uy\n";
  const Grid2D& g = m.grid();
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const auto cell = m.cell(i, j);
      for (std::size_t a = 0; a < cell.size(); ++a) {
        const Atom& at = cell[a];
        out << i << ',' << j << ',' << a << ',' << format_number(at.weight) << ',' << format_number(at.rho) << ','
            << format_number(at.theta) << ',' << format_number(at.u.x) << ',' << format_number(at.u.y) << '\n';
      }
    }
  }
}

void write_defect_csv(const std::string& path, const DefectFields& d) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "x,y,E,D,R11,R12,R22\n";
  const Grid2D& g = d.E.grid();
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const Mat2& R = d.R(i, j);
      out << format_number(g.xc(i)) << ',' << format_number(g.yc(j)) << ',' << format_number(d.E(i, j)) << ','
          << format_number(d.D(i, j)) << ',' << format_number(R.xx) << ',' << format_number(R.xy) << ','
          << format_number(R.yy) << '\n';
    }
  }
}

}  // namespace dmv
