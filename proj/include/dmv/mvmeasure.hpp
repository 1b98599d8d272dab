#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dmv/field.hpp"
#include "dmv/thermo.hpp"

namespace dmv {

struct Atom {
  double weight = 1.0;
  double rho = 0.0;
  double theta = 0.0;
  Vec2 u;
};

inline constexpr double kWeightTolerance = 1e-14;

// Finite-atom probability measure for one cell. Weights whose sum is within
// kWeightTolerance of 1 are renormalized exactly; anything else is kept as
// given so that validate() can report it.
class CellMeasure {
 public:
  explicit CellMeasure(std::vector<Atom> atoms);
  static CellMeasure dirac(double rho, double theta, Vec2 u);

  std::span<const Atom> atoms() const { return atoms_; }

 private:
  std::vector<Atom> atoms_;
};

// One CellMeasure per grid cell, stored contiguously (offsets into a flat
// atom array).
class MeasureField {
 public:
  MeasureField(const Grid2D& g, const std::vector<CellMeasure>& cells);

  const Grid2D& grid() const { return grid_; }
  std::span<const Atom> cell(std::size_t k) const {
    return {atoms_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
  }
  std::span<const Atom> cell(int i, int j) const { return cell(grid_.index(i, j)); }
  std::size_t atom_count() const { return atoms_.size(); }

 private:
  Grid2D grid_;
  std::vector<std::size_t> offsets_;
  std::vector<Atom> atoms_;
};

enum class Observable {
  rho,              // rho~
  momentum,         // rho~ u~
  rho_theta,        // rho~ theta~
  rho_theta_u,      // rho~ theta~ u~
  rho_log_theta,    // rho~ ln theta~
  rho_log_theta_u,  // rho~ ln theta~ u~
  velocity,         // u~
  rho_u_u,          // rho~ u~ (x) u~
  pressure,         // p(rho~ theta~)
  energy,           // 1/2 rho~ |u~|^2 + P(rho~ theta~)
};

// Throws std::invalid_argument for unknown names.
Observable observable_from_name(std::string_view name);
std::string_view observable_name(Observable o);

using ObservableValue = std::variant<double, Vec2, Mat2>;

ObservableValue expectation(std::span<const Atom> cell, Observable o, const FluidParams& p);
double expect_scalar(std::span<const Atom> cell, Observable o, const FluidParams& p);
Vec2 expect_vector(std::span<const Atom> cell, Observable o, const FluidParams& p);
Mat2 expect_tensor(std::span<const Atom> cell, Observable o, const FluidParams& p);

// Weighted sum of an arbitrary function of an atom.
template <class F>
auto expectation(std::span<const Atom> cell, F&& g) {
  decltype(g(cell[0])) s{};
  for (const Atom& a : cell) s += a.weight * g(a);
  return s;
}

ScalarField expectation_field(const MeasureField& m, Observable o, const FluidParams& p);
VectorField expectation_vector_field(const MeasureField& m, Observable o, const FluidParams& p);
TensorField expectation_tensor_field(const MeasureField& m, Observable o, const FluidParams& p);

// One atom per cell at (rho, z/rho, m/rho). Throws DomainError on rho <= 0.
MeasureField dirac_from_state(const ConservedState& s);

// Each coarse cell collects the k x k fine subcells of every supplied state
// as equal-weight atoms. Throws std::invalid_argument on non-nested grids.
MeasureField ensemble_from_refinement(const std::vector<ConservedState>& fine, const Grid2D& coarse);

// Conserved-variable barycentre (<rho~>, <rho~ u~>, <rho~ theta~>) per cell.
ConservedState barycentre(const MeasureField& m);

struct DefectFields {
  ScalarField E;  // energy concentration defect
  ScalarField D;  // dissipation defect, accumulated in time
  TensorField R;  // Reynolds defect
  double d_lo = 1.0, d_hi = 2.0;

  explicit DefectFields(const Grid2D& g) : E(g), D(g), R(g) {}
  static DefectFields zero(const Grid2D& g, int dim = 2);
};

// E = <energy> - energy(barycentre), R = <rho~ u~ (x) u~> - m (x) m / rho,
// D = 0, d_lo = 1, d_hi = d.
DefectFields infer_defects(const MeasureField& m, const FluidParams& p);

struct Violation {
  std::string kind;
  int i = -1, j = -1;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(std::string_view kind) const;
};

// Lists every violated constraint with its cell; never throws on bad data.
ValidationReport validate(const MeasureField& m, const DefectFields& d, const FluidParams& p);

// CSV dumps: cell_i,cell_j,atom_k,weight,rho,theta,ux,uy and x,y,E,D,R11,R12,R22.
void write_measure_csv(const std::string& path, const MeasureField& m);
void write_defect_csv(const std::string& path, const DefectFields& d);

}  // namespace dmv
