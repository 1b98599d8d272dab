#pragma once

#include <array>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "dmv/mvmeasure.hpp"
#include "dmv/solver.hpp"
#include "dmv/strong.hpp"

namespace dmv {

// Measures aligned with the recorded times of a trajectory. Dirac sequences
// are generated on demand from the stored states.
class MeasureSequence {
 public:
  MeasureSequence(std::vector<double> times, std::vector<MeasureField> fields);
  // The trajectory must outlive the sequence.
  static MeasureSequence dirac(const Trajectory& tr);

  std::size_t size() const { return times_.size(); }
  double time(std::size_t k) const { return times_.at(k); }
  MeasureField at(std::size_t k) const;

 private:
  MeasureSequence() = default;
  std::vector<double> times_;
  std::vector<MeasureField> fields_;
  std::function<MeasureField(std::size_t)> make_;
};

enum class TestFunction { one, cos_x, bump, bubble, bubble_x, bubble_y };

// Throws std::invalid_argument for unknown names.
TestFunction test_function_from_name(std::string_view name);

struct ScalarTest {
  double value = 0.0, dt = 0.0;
  Vec2 grad;
};
struct VectorTest {
  Vec2 value, dt;
  Mat2 grad;
};

// one = 1; cos_x = cos(pi x/lx); bump = 1 + cos(pi x/lx) cos(pi y/ly)/2;
// bubble = (1+t) 16 x(lx-x) y(ly-y)/(lx^2 ly^2); bubble_x/y = bubble e_x / e_y.
ScalarTest eval_scalar_test(TestFunction f, double t, double x, double y, const Grid2D& g);
VectorTest eval_vector_test(TestFunction f, double t, double x, double y, const Grid2D& g);
bool is_vector_test(TestFunction f);
bool is_nonnegative_test(TestFunction f);

enum class Equation { continuity, momentum, theta };

// Zero defects are assumed when the defect span is empty; otherwise it must
// be aligned with the trajectory.
using DefectSpan = std::span<const DefectFields>;

// integral <energy>(tau) + dissipation_accum(tau) + E_def(tau) + D_def(tau) - initial energy.
// Nonpositive means the energy inequality holds.
double energy_inequality_residual(const Trajectory& tr, const MeasureSequence& ms, DefectSpan defects,
                                  const FluidParams& p, std::size_t n);

// [integral <.> phi]_0^tau minus the trapezoid time integral of the flux terms.
// Momentum needs a test function vanishing on the walls.
double weak_form_residual(const Trajectory& tr, const MeasureSequence& ms, Equation eq, TestFunction phi,
                          DefectSpan defects, const FluidParams& p, std::size_t n);

// [integral <rho~ ln theta~> psi]_0^tau minus the trapezoid time integral of
// <rho~ ln theta~> psi_t + <rho~ ln theta~ u~> . grad psi. Nonnegative means
// the inequality holds. Sign-changing psi is rejected.
double entropy_inequality_residual(const Trajectory& tr, const MeasureSequence& ms, TestFunction psi,
                                   const FluidParams& p, std::size_t n);

// Spatial integrands of the Poincare inequality at one instant.
struct PoincareTerms {
  double lhs = 0.0;     // integral <|u~ - U|^2>
  double grad = 0.0;    // compact Dirichlet energy of u_V - U
  double defect = 0.0;  // integral of E_def
};
PoincareTerms poincare_terms(const MeasureField& m, const VectorField& U, const DefectFields* d);

// Trapezoid-in-time LHS - C_P RHS up to snapshot n (D_def taken at n).
// U holds one field (time independent) or one per snapshot.
double poincare_residual(const MeasureSequence& ms, std::span<const VectorField> U, DefectSpan defects, double C_P,
                         std::size_t n);

// max(1/lambda_h, 2/rho_min): lambda_h is the smallest compact Dirichlet
// eigenvalue, rho_min the least atom density over the sequence.
double poincare_constant(const Grid2D& g, const MeasureSequence& ms);

struct ReiBreakdown {
  double t = 0.0;
  double energy_jump = 0.0, energy_defect = 0.0, dissipation_defect = 0.0, dissipation = 0.0;
  double lhs = 0.0;
  std::array<double, 8> terms{};
  double residual = 0.0;  // sum(terms) - lhs

  double rhs() const;
};

// Relative energy inequality at every snapshot 0..N-1, trapezoid in time.
std::vector<ReiBreakdown> rei_series(const Trajectory& tr, const MeasureSequence& ms, DefectSpan defects,
                                     const StrongSolution& strong, const FluidParams& p);
ReiBreakdown rei_breakdown(const Trajectory& tr, const MeasureSequence& ms, DefectSpan defects,
                           const StrongSolution& strong, const FluidParams& p, std::size_t n);

// Relative energy against the reference at every snapshot.
std::vector<double> relative_energy_series(const MeasureSequence& ms, const StrongSolution& strong,
                                           const FluidParams& p);

}  // namespace dmv
