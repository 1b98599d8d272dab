#include <gtest/gtest.h>

#include <cmath>

#include "dmv/relenergy.hpp"
#include "dmv/residuals.hpp"
#include "dmv/solver.hpp"

using namespace dmv;

namespace {

SolverConfig perturbed(int n, double t_end = 0.05, std::uint64_t seed = 1) {
  SolverConfig c;
  c.grid = Grid2D(n, n);
  c.t_end = t_end;
  c.ic.kind = InitialCondition::Kind::perturbed;
  c.ic.seed = seed;
  return c;
}

SolverConfig constant(int n, double t_end = 0.05) {
  SolverConfig c;
  c.grid = Grid2D(n, n);
  c.t_end = t_end;
  return c;
}

std::vector<DefectFields> zero_defects(const Trajectory& tr) {
  return std::vector<DefectFields>(tr.size(), DefectFields::zero(tr.config.grid));
}

}  // namespace

TEST(TestFunctions, Catalogue) {
  const Grid2D g(8, 8, 2.0, 1.0);
  EXPECT_EQ(test_function_from_name("bubble_x"), TestFunction::bubble_x);
  EXPECT_THROW(test_function_from_name("hat"), std::invalid_argument);
  EXPECT_EQ(eval_scalar_test(TestFunction::one, 0.3, 0.1, 0.2, g).value, 1.0);
  EXPECT_DOUBLE_EQ(eval_scalar_test(TestFunction::bump, 0.0, 0.0, 0.0, g).value, 1.5);
  EXPECT_DOUBLE_EQ(eval_scalar_test(TestFunction::bubble, 0.0, 1.0, 0.5, g).value, 1.0);
  EXPECT_DOUBLE_EQ(eval_scalar_test(TestFunction::bubble, 1.0, 1.0, 0.5, g).value, 2.0);
  for (double s = 0.0; s <= 1.0; s += 0.25) {
    EXPECT_EQ(eval_vector_test(TestFunction::bubble_x, 0.4, 0.0, s, g).value, Vec2{});
    EXPECT_EQ(eval_vector_test(TestFunction::bubble_y, 0.4, 2.0 * s, 1.0, g).value, Vec2{});
  }
  EXPECT_THROW(eval_vector_test(TestFunction::bump, 0.0, 0.5, 0.5, g), std::invalid_argument);
  EXPECT_THROW(eval_scalar_test(TestFunction::bubble_x, 0.0, 0.5, 0.5, g), std::invalid_argument);
  EXPECT_FALSE(is_nonnegative_test(TestFunction::cos_x));
  // Gradients against central differences.
  const double h = 1e-6, x = 0.7, y = 0.3, t = 0.2;
  for (TestFunction f : {TestFunction::cos_x, TestFunction::bump, TestFunction::bubble}) {
    const ScalarTest v = eval_scalar_test(f, t, x, y, g);
    EXPECT_NEAR(v.grad.x, (eval_scalar_test(f, t, x + h, y, g).value - eval_scalar_test(f, t, x - h, y, g).value) / (2 * h), 1e-8);
    EXPECT_NEAR(v.grad.y, (eval_scalar_test(f, t, x, y + h, g).value - eval_scalar_test(f, t, x, y - h, g).value) / (2 * h), 1e-8);
    EXPECT_NEAR(v.dt, (eval_scalar_test(f, t + h, x, y, g).value - eval_scalar_test(f, t - h, x, y, g).value) / (2 * h), 1e-8);
  }
}

TEST(EnergyResidual, ConstantStateIsZero) {
  const Trajectory tr = run(constant(12));
  const auto ms = MeasureSequence::dirac(tr);
  for (std::size_t n = 0; n < tr.size(); ++n)
    EXPECT_NEAR(energy_inequality_residual(tr, ms, {}, tr.config.fluid, n), 0.0, 1e-14);
}

TEST(EnergyResidual, SolverRunSatisfiesInequality) {
  const Trajectory tr = run(perturbed(24));
  const auto ms = MeasureSequence::dirac(tr);
  for (std::size_t n = 0; n < tr.size(); ++n) EXPECT_LE(energy_inequality_residual(tr, ms, {}, tr.config.fluid, n), 1e-12);
}

TEST(EnergyResidual, DissipationDefectEntersLinearly) {
  const Trajectory tr = run(perturbed(16, 0.02));
  const auto ms = MeasureSequence::dirac(tr);
  auto d = zero_defects(tr);
  const std::size_t n = tr.size() - 1;
  const double base = energy_inequality_residual(tr, ms, d, tr.config.fluid, n);
  for (auto& f : d)
    for (double& v : f.D.values()) v = 0.5;
  const double inflated = energy_inequality_residual(tr, ms, d, tr.config.fluid, n);
  EXPECT_NEAR(inflated - base, 0.5, 1e-14);
}

TEST(EnergyResidual, RejectsMisalignedInputs) {
  const Trajectory tr = run(perturbed(12, 0.01));
  const Trajectory other = run(perturbed(12, 0.02));
  const auto ms = MeasureSequence::dirac(other);
  EXPECT_THROW(energy_inequality_residual(tr, ms, {}, tr.config.fluid, 0), std::invalid_argument);
  const auto own = MeasureSequence::dirac(tr);
  std::vector<DefectFields> one(1, DefectFields::zero(tr.config.grid));
  EXPECT_THROW(energy_inequality_residual(tr, own, one, tr.config.fluid, 0), std::invalid_argument);
  EXPECT_THROW(energy_inequality_residual(tr, own, {}, tr.config.fluid, tr.size()), std::invalid_argument);
}

TEST(WeakForm, ConstantTestFunctionConservation) {
  const Trajectory tr = run(perturbed(24));
  const auto ms = MeasureSequence::dirac(tr);
  for (std::size_t n = 0; n < tr.size(); n += 5) {
    EXPECT_LE(std::abs(weak_form_residual(tr, ms, Equation::continuity, TestFunction::one, {}, tr.config.fluid, n)), 1e-12);
    EXPECT_LE(std::abs(weak_form_residual(tr, ms, Equation::theta, TestFunction::one, {}, tr.config.fluid, n)), 1e-12);
  }
}

TEST(WeakForm, MomentumNeedsWallVanishingTestFunction) {
  const Trajectory tr = run(perturbed(12, 0.01));
  const auto ms = MeasureSequence::dirac(tr);
  EXPECT_THROW(weak_form_residual(tr, ms, Equation::momentum, TestFunction::one, {}, tr.config.fluid, 1), std::invalid_argument);
  EXPECT_THROW(weak_form_residual(tr, ms, Equation::momentum, TestFunction::bump, {}, tr.config.fluid, 1), std::invalid_argument);
  EXPECT_THROW(weak_form_residual(tr, ms, Equation::continuity, TestFunction::bubble_x, {}, tr.config.fluid, 1), std::invalid_argument);
  EXPECT_NO_THROW(weak_form_residual(tr, ms, Equation::momentum, TestFunction::bubble_y, {}, tr.config.fluid, 1));
}

TEST(WeakForm, MomentumResidualDecaysUnderRefinement) {
  double prev = 0.0;
  for (int n : {16, 32, 64}) {
    const Trajectory tr = run(perturbed(n, 0.02));
    const auto ms = MeasureSequence::dirac(tr);
    const double r = std::abs(weak_form_residual(tr, ms, Equation::momentum, TestFunction::bubble_x, {}, tr.config.fluid, tr.size() - 1)) +
                     std::abs(weak_form_residual(tr, ms, Equation::momentum, TestFunction::bubble_y, {}, tr.config.fluid, tr.size() - 1));
    if (prev > 0.0) {
      EXPECT_LT(r, prev);
    }
    prev = r;
  }
}

TEST(WeakForm, NonconstantScalarTestFunctionsConverge) {
  double prev = 0.0;
  for (int n : {16, 32, 64}) {
    const Trajectory tr = run(perturbed(n, 0.02));
    const auto ms = MeasureSequence::dirac(tr);
    const double r = std::abs(weak_form_residual(tr, ms, Equation::continuity, TestFunction::bump, {}, tr.config.fluid, tr.size() - 1));
    if (prev > 0.0) {
      EXPECT_LT(r, prev);
    }
    prev = r;
  }
}

TEST(EntropyResidual, Examples) {
  const Trajectory still = run(constant(12));
  const auto ms0 = MeasureSequence::dirac(still);
  EXPECT_NEAR(entropy_inequality_residual(still, ms0, TestFunction::one, still.config.fluid, still.size() - 1), 0.0, 1e-14);

  for (std::uint64_t seed : {1u, 5u}) {
    const Trajectory tr = run(perturbed(24, 0.05, seed));
    const auto ms = MeasureSequence::dirac(tr);
    for (std::size_t n = 0; n < tr.size(); ++n)
      EXPECT_GE(entropy_inequality_residual(tr, ms, TestFunction::one, tr.config.fluid, n), -1e-10);
  }
  EXPECT_THROW(entropy_inequality_residual(still, ms0, TestFunction::cos_x, still.config.fluid, 0), std::invalid_argument);
  EXPECT_THROW(entropy_inequality_residual(still, ms0, TestFunction::bubble_x, still.config.fluid, 0), std::invalid_argument);
}

TEST(EntropyResidual, WeightedProductionDeficitShrinksWithRefinement) {
  double prev = 0.0;
  for (int n : {16, 32, 64}) {
    const Trajectory tr = run(perturbed(n, 0.02));
    const auto ms = MeasureSequence::dirac(tr);
    const double r = entropy_inequality_residual(tr, ms, TestFunction::bump, tr.config.fluid, tr.size() - 1);
    const double deficit = std::max(0.0, -r);
    EXPECT_LE(deficit, 0.05 * tr.config.grid.dx());
    if (prev > 0.0 && deficit > 0.0) {
      EXPECT_LT(deficit, prev);
    }
    prev = deficit;
  }
}

TEST(Poincare, Examples) {
  const Trajectory tr = run(perturbed(16, 0.02));
  const auto ms = MeasureSequence::dirac(tr);
  const Grid2D& g = tr.config.grid;
  const double C_P = poincare_constant(g, ms);
  EXPECT_GE(C_P, 1.0 / dirichlet_eigenvalue(g));

  std::vector<VectorField> own;
  for (const auto& s : tr.states) own.push_back(s.velocity());
  const PoincareTerms t0 = poincare_terms(ms.at(1), own[1], nullptr);
  EXPECT_EQ(t0.lhs, 0.0);
  EXPECT_LE(poincare_residual(ms, own, {}, C_P, tr.size() - 1), 0.0);

  const std::vector<VectorField> zero(1, VectorField(g));
  EXPECT_LE(poincare_residual(ms, zero, {}, C_P, tr.size() - 1), 0.0);
  EXPECT_LE(poincare_residual(ms, zero, {}, 1.0 / dirichlet_eigenvalue(g), tr.size() - 1), 0.0);
}

TEST(Poincare, EnsembleVarianceCoveredByInferredDefect) {
  const FluidParams p;
  const Grid2D coarse(8, 8), fine(16, 16);
  ConservedState s = ConservedState::uniform(fine, 1.0, 1.0);
  for (int j = 0; j < fine.ny(); ++j)
    for (int i = 0; i < fine.nx(); ++i) s.mom(i, j) = Vec2{(i + j) % 2 ? 0.2 : -0.2, 0.0};
  const MeasureField m = ensemble_from_refinement({s}, coarse);
  const DefectFields d = infer_defects(m, p);
  const MeasureSequence ms({0.0, 0.1}, {m, m});
  const std::vector<DefectFields> defects{d, d};
  const std::vector<VectorField> zero(1, VectorField(coarse));
  const PoincareTerms t = poincare_terms(m, zero[0], &d);
  EXPECT_NEAR(t.lhs, 0.04, 1e-14);
  EXPECT_NEAR(t.grad, 0.0, 1e-20);
  EXPECT_NEAR(t.defect, 0.02, 1e-14);
  const double C_P = poincare_constant(coarse, ms);
  EXPECT_LE(poincare_residual(ms, zero, defects, C_P, 1), 0.0);
  EXPECT_GT(poincare_residual(ms, zero, {}, C_P, 1), 0.0);
}

TEST(Rei, ConstantStateIsIdenticallyZero) {
  const Trajectory tr = run(constant(12));
  const auto ms = MeasureSequence::dirac(tr);
  const ConstantStrongSolution strong(1.0, 1.0);
  for (const ReiBreakdown& b : rei_series(tr, ms, {}, strong, tr.config.fluid)) {
    EXPECT_EQ(b.lhs, 0.0);
    for (double v : b.terms) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(b.residual, 0.0);
  }
}

TEST(Rei, PerturbedRunAgainstConstantState) {
  const Trajectory tr = run(perturbed(32));
  const auto ms = MeasureSequence::dirac(tr);
  const ConstantStrongSolution strong(1.0, 1.0);
  const auto series = rei_series(tr, ms, {}, strong, tr.config.fluid);
  for (const ReiBreakdown& b : series) {
    EXPECT_GE(b.residual, -1e-8);
    EXPECT_EQ(b.residual, b.rhs() - b.lhs);
    for (int k = 2; k <= 5; ++k) EXPECT_EQ(b.terms[k], 0.0);
    EXPECT_GE(b.dissipation, 0.0);
  }
  const std::size_t mid = series.size() / 2;
  const ReiBreakdown b = rei_breakdown(tr, ms, {}, strong, tr.config.fluid, mid);
  EXPECT_EQ(b.residual, series[mid].residual);
  EXPECT_EQ(b.lhs, series[mid].lhs);
  const auto e = relative_energy_series(ms, strong, tr.config.fluid);
  EXPECT_NEAR(series.back().energy_jump, e.back() - e.front(), 1e-15);
}

TEST(Rei, ManufacturedReferenceKeepsEveryTermFinite) {
  SolverConfig c = constant(16, 0.02);
  c.forcing = "manufactured";
  const Trajectory tr = run(c);
  const auto strong = reference_solution(c);
  const auto series = rei_series(tr, MeasureSequence::dirac(tr), {}, *strong, c.fluid);
  for (const auto& b : series) {
    EXPECT_TRUE(std::isfinite(b.residual));
    EXPECT_EQ(b.residual, b.rhs() - b.lhs);
  }
  // Defects enter the left-hand side one for one.
  auto d = zero_defects(tr);
  for (auto& f : d)
    for (double& v : f.E.values()) v = 0.25;
  const auto with = rei_series(tr, MeasureSequence::dirac(tr), d, *strong, c.fluid);
  EXPECT_NEAR(with.back().lhs - series.back().lhs, 0.25, 1e-14);
}
