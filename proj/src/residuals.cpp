#include "dmv/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dmv/kernels.hpp"
#include "dmv/relenergy.hpp"

namespace dmv {

MeasureSequence::MeasureSequence(std::vector<double> times, std::vector<MeasureField> fields)
    : times_(std::move(times)), fields_(std::move(fields)) {
  if (times_.size() != fields_.size()) throw std::invalid_argument("MeasureSequence: times and fields differ in length");
}

MeasureSequence MeasureSequence::dirac(const Trajectory& tr) {
  MeasureSequence s;
  s.times_ = tr.times;
  s.make_ = [&tr](std::size_t k) { return dirac_from_state(tr.states.at(k)); };
  return s;
}

MeasureField MeasureSequence::at(std::size_t k) const {
  if (k >= times_.size()) throw std::out_of_range("MeasureSequence: snapshot index out of range");
  return make_ ? make_(k) : fields_[k];
}

namespace {

constexpr double kPi = 3.14159265358979323846;

constexpr std::string_view kTestNames[] = {"one", "cos_x", "bump", "bubble", "bubble_x", "bubble_y"};

void check_alignment(const Trajectory& tr, const MeasureSequence& ms, DefectSpan defects, std::size_t n) {
  if (ms.size() != tr.size()) throw std::invalid_argument("measures are not aligned with the trajectory");
  if (!defects.empty() && defects.size() != tr.size())
    throw std::invalid_argument("defects are not aligned with the trajectory");
  if (n >= tr.size()) throw std::invalid_argument("snapshot index beyond the trajectory");
  for (std::size_t k = 0; k < tr.size(); ++k)
    if (ms.time(k) != tr.times[k]) throw std::invalid_argument("measure times differ from trajectory times");
}

double trapz(const std::vector<double>& t, const std::vector<double>& f, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 1; k <= n; ++k) s += 0.5 * (t[k] - t[k - 1]) * (f[k] + f[k - 1]);
  return s;
}

double defect_integral(DefectSpan d, std::size_t k, bool energy) {
  if (d.empty()) return 0.0;
  return integrate(energy ? d[k].E : d[k].D);
}

TensorField ghost_gradient(const VectorField& u) { return gradient(Ghosted<Vec2>(u, Parity::odd)); }

double initial_energy(const ConservedState& s, const FluidParams& p) {
  ScalarField e(s.grid());
  for (std::size_t k = 0; k < e.size(); ++k)
    e[k] = 0.5 * norm2(s.mom[k]) / s.rho[k] + thermo::pressure_potential(s.z[k], p);
  return integrate(e);
}

}  // namespace

TestFunction test_function_from_name(std::string_view name) {
  for (std::size_t k = 0; k < std::size(kTestNames); ++k)
    if (kTestNames[k] == name) return static_cast<TestFunction>(k);
  throw std::invalid_argument("unknown test function '" + std::string(name) + "'");
}

bool is_vector_test(TestFunction f) { return f == TestFunction::bubble_x || f == TestFunction::bubble_y; }

bool is_nonnegative_test(TestFunction f) { return f != TestFunction::cos_x; }

ScalarTest eval_scalar_test(TestFunction f, double t, double x, double y, const Grid2D& g) {
  const double lx = g.lx(), ly = g.ly();
  ScalarTest r;
  switch (f) {
    case TestFunction::one:
      r.value = 1.0;
      return r;
    case TestFunction::cos_x:
      r.value = std::cos(kPi * x / lx);
      r.grad = {-kPi / lx * std::sin(kPi * x / lx), 0.0};
      return r;
    case TestFunction::bump: {
      const double cx = std::cos(kPi * x / lx), cy = std::cos(kPi * y / ly);
      r.value = 1.0 + 0.5 * cx * cy;
      r.grad = {-0.5 * kPi / lx * std::sin(kPi * x / lx) * cy, -0.5 * kPi / ly * cx * std::sin(kPi * y / ly)};
      return r;
    }
    case TestFunction::bubble: {
      const double c = 16.0 / (lx * lx * ly * ly);
      const double shape = c * x * (lx - x) * y * (ly - y);
      r.value = (1.0 + t) * shape;
      r.dt = shape;
      r.grad = ((1.0 + t) * c) * Vec2{(lx - 2.0 * x) * y * (ly - y), x * (lx - x) * (ly - 2.0 * y)};
      return r;
    }
    default:
      throw std::invalid_argument("test function '" + std::string(kTestNames[static_cast<int>(f)]) +
                                  "' is vector valued");
  }
}

VectorTest eval_vector_test(TestFunction f, double t, double x, double y, const Grid2D& g) {
  if (!is_vector_test(f))
    throw std::invalid_argument("momentum test function must be bubble_x or bubble_y (vanishing on the boundary), got '" +
                                std::string(kTestNames[static_cast<int>(f)]) + "'");
  const ScalarTest b = eval_scalar_test(TestFunction::bubble, t, x, y, g);
  VectorTest r;
  if (f == TestFunction::bubble_x) {
    r.value = {b.value, 0.0};
    r.dt = {b.dt, 0.0};
    r.grad = {b.grad.x, b.grad.y, 0.0, 0.0};
  } else {
    r.value = {0.0, b.value};
    r.dt = {0.0, b.dt};
    r.grad = {0.0, 0.0, b.grad.x, b.grad.y};
  }
  return r;
}

double energy_inequality_residual(const Trajectory& tr, const MeasureSequence& ms, DefectSpan defects,
                                  const FluidParams& p, std::size_t n) {
  check_alignment(tr, ms, defects, n);
  const double e = integrate(expectation_field(ms.at(n), Observable::energy, p));
  return e + tr.dissipation_accum[n] + defect_integral(defects, n, true) + defect_integral(defects, n, false) -
         initial_energy(tr.states[0], p);
}

double weak_form_residual(const Trajectory& tr, const MeasureSequence& ms, Equation eq, TestFunction phi,
                          DefectSpan defects, const FluidParams& p, std::size_t n) {
  check_alignment(tr, ms, defects, n);
  if (eq == Equation::momentum && !is_vector_test(phi))
    throw std::invalid_argument("momentum test function must vanish on the boundary (bubble_x or bubble_y)");
  if (eq != Equation::momentum && is_vector_test(phi))
    throw std::invalid_argument("scalar equations need a scalar test function");

  std::vector<double> held(n + 1), flux(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const MeasureField m = ms.at(k);
    const Grid2D& g = m.grid();
    const double t = ms.time(k);
    ScalarField h(g), f(g);
    if (eq == Equation::momentum) {
      const VectorField mom = expectation_vector_field(m, Observable::momentum, p);
      const TensorField ruu = expectation_tensor_field(m, Observable::rho_u_u, p);
      const ScalarField pr = expectation_field(m, Observable::pressure, p);
      const TensorField gu = ghost_gradient(expectation_vector_field(m, Observable::velocity, p));
      for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
          const VectorTest v = eval_vector_test(phi, t, g.xc(i), g.yc(j), g);
          const std::size_t c = g.index(i, j);
          Mat2 flux_t = ruu[c] + pr[c] * Mat2::identity() - viscous_stress(gu[c], p);
          if (!defects.empty()) flux_t += defects[k].R[c];
          h[c] = dot(mom[c], v.value);
          f[c] = dot(mom[c], v.dt) + contract(flux_t, v.grad);
        }
      }
    } else {
      const Observable dens = eq == Equation::continuity ? Observable::rho : Observable::rho_theta;
      const Observable flx = eq == Equation::continuity ? Observable::momentum : Observable::rho_theta_u;
      const ScalarField d = expectation_field(m, dens, p);
      const VectorField q = expectation_vector_field(m, flx, p);
      for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
          const ScalarTest s = eval_scalar_test(phi, t, g.xc(i), g.yc(j), g);
          const std::size_t c = g.index(i, j);
          h[c] = d[c] * s.value;
          f[c] = d[c] * s.dt + dot(q[c], s.grad);
        }
      }
    }
    held[k] = integrate(h);
    flux[k] = integrate(f);
  }
  return (held[n] - held[0]) - trapz(tr.times, flux, n);
}

double entropy_inequality_residual(const Trajectory& tr, const MeasureSequence& ms, TestFunction psi,
                                   const FluidParams& p, std::size_t n) {
  check_alignment(tr, ms, {}, n);
  if (is_vector_test(psi)) throw std::invalid_argument("entropy inequality needs a scalar test function");
  if (!is_nonnegative_test(psi)) throw std::invalid_argument("entropy inequality needs a nonnegative test function");
  std::vector<double> held(n + 1), flux(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const MeasureField m = ms.at(k);
    const Grid2D& g = m.grid();
    const ScalarField e = expectation_field(m, Observable::rho_log_theta, p);
    const VectorField q = expectation_vector_field(m, Observable::rho_log_theta_u, p);
    ScalarField h(g), f(g);
    for (int j = 0; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) {
        const ScalarTest s = eval_scalar_test(psi, ms.time(k), g.xc(i), g.yc(j), g);
        const std::size_t c = g.index(i, j);
        h[c] = e[c] * s.value;
        f[c] = e[c] * s.dt + dot(q[c], s.grad);
      }
    }
    held[k] = integrate(h);
    flux[k] = integrate(f);
  }
  return (held[n] - held[0]) - trapz(tr.times, flux, n);
}

PoincareTerms poincare_terms(const MeasureField& m, const VectorField& U, const DefectFields* d) {
  const Grid2D& g = m.grid();
  if (!(U.grid() == g)) throw std::invalid_argument("poincare: U lives on a different grid");
  ScalarField var(g);
  VectorField diff(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto cell = m.cell(k);
    var[k] = expectation(cell, [&](const Atom& a) { return norm2(a.u - U[k]); });
    diff[k] = expectation(cell, [](const Atom& a) { return a.u; }) - U[k];
  }
  PoincareTerms t;
  t.lhs = integrate(var);
  t.grad = dirichlet_energy(diff);
  t.defect = d ? integrate(d->E) : 0.0;
  return t;
}

double poincare_residual(const MeasureSequence& ms, std::span<const VectorField> U, DefectSpan defects, double C_P,
                         std::size_t n) {
  if (n >= ms.size()) throw std::invalid_argument("snapshot index beyond the sequence");
  if (U.size() != 1 && U.size() != ms.size()) throw std::invalid_argument("U must hold one field or one per snapshot");
  if (!defects.empty() && defects.size() != ms.size())
    throw std::invalid_argument("defects are not aligned with the measures");
  std::vector<double> t(n + 1), lhs(n + 1), rhs(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    t[k] = ms.time(k);
    const PoincareTerms pt = poincare_terms(ms.at(k), U.size() == 1 ? U[0] : U[k], defects.empty() ? nullptr : &defects[k]);
    lhs[k] = pt.lhs;
    rhs[k] = pt.grad + pt.defect;
  }
  const double D = defects.empty() ? 0.0 : integrate(defects[n].D);
  return trapz(t, lhs, n) - C_P * (trapz(t, rhs, n) + D);
}

double poincare_constant(const Grid2D& g, const MeasureSequence& ms) {
  double rho_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ms.size(); ++k) {
    const MeasureField m = ms.at(k);
    for (std::size_t c = 0; c < g.size(); ++c)
      for (const Atom& a : m.cell(c)) rho_min = std::min(rho_min, a.rho);
  }
  if (!(rho_min > 0.0)) throw DomainError("poincare_constant: atoms with zero density");
  return std::max(1.0 / dirichlet_eigenvalue(g), 2.0 / rho_min);
}

double ReiBreakdown::rhs() const { return std::accumulate(terms.begin(), terms.end(), 0.0); }

std::vector<double> relative_energy_series(const MeasureSequence& ms, const StrongSolution& strong,
                                           const FluidParams& p) {
  std::vector<double> e(ms.size());
  for (std::size_t k = 0; k < ms.size(); ++k) e[k] = relative_energy_total(ms.at(k), strong, ms.time(k), p);
  return e;
}

namespace {

struct ReiIntegrands {
  double energy = 0.0, dissipation = 0.0;
  std::array<double, 8> terms{};
};

ReiIntegrands rei_integrands(const MeasureField& m, const DefectFields* d, const StrongSolution& strong, double t,
                             const FluidParams& p) {
  const Grid2D& g = m.grid();
  const std::size_t n = g.size();
  std::vector<StrongSample> ss(n);
  VectorField diff(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t c = g.index(i, j);
      ss[c] = strong.sample(t, g.xc(i), g.yc(j));
      diff[c] = expectation(m.cell(c), [](const Atom& a) { return a.u; }) - ss[c].u;
    }
  }
  const TensorField gd = ghost_gradient(diff);

  std::array<ScalarField, 8> T{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g),
                                ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g)};
  ScalarField E(g), D(g);
  const std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < nn; ++c) {
    const StrongSample& s = ss[c];
    const StrongThermo th = strong_thermo(s, p);
    const Brackets b = brackets(s, p);
    const double div_u = s.grad_u.trace();
    const auto cell = m.cell(c);
    double t1 = 0, t2 = 0, t4w = 0, t6w = 0, t8 = 0;
    Vec2 t3w, t7w;
    for (const Atom& a : cell) {
      const double St = thermo::entropy(a.rho, a.theta, p);
      const double pt = thermo::pressure_rho_s(a.rho, St, p);
      const Vec2 w = a.u - s.u;
      const double sw = a.rho / s.rho * th.S - St;
      t1 += a.weight * a.rho * dot(w, s.grad_u * w);
      t2 += a.weight * (pt - th.dp_drho * (a.rho - s.rho) - th.dp_dS * (St - th.S) - th.p);
      t3w += (a.weight * a.rho / s.rho) * (-1.0 * w);
      t4w += a.weight * (s.rho - a.rho) / s.rho;
      t6w += a.weight * sw;
      t7w += (a.weight * sw) * w;
      t8 += a.weight * (a.rho - s.rho) / s.rho * dot(s.div_stress, -1.0 * w);
    }
    T[0][c] = -t1;
    T[1][c] = -t2 * div_u;
    T[2][c] = dot(t3w, b.momentum);
    T[3][c] = t4w * th.dp_drho * b.continuity;
    T[4][c] = t4w * th.dp_dS * b.entropy;
    T[5][c] = t6w * b.temperature;
    T[6][c] = dot(t7w, th.grad_vartheta) - (d ? contract(s.grad_u, d->R[c]) : 0.0);
    T[7][c] = t8;
    E[c] = relative_energy_cell(cell, s.rho, s.theta, s.u, p);
    D[c] = contract(viscous_stress(gd[c], p), gd[c]);
  }
  ReiIntegrands r;
  for (int k = 0; k < 8; ++k) r.terms[k] = integrate(T[k]);
  r.energy = integrate(E);
  r.dissipation = integrate(D);
  return r;
}

}  // namespace

std::vector<ReiBreakdown> rei_series(const Trajectory& tr, const MeasureSequence& ms, DefectSpan defects,
                                     const StrongSolution& strong, const FluidParams& p) {
  check_alignment(tr, ms, defects, 0);
  const std::size_t N = tr.size();
  std::vector<ReiIntegrands> in(N);
  for (std::size_t k = 0; k < N; ++k)
    in[k] = rei_integrands(ms.at(k), defects.empty() ? nullptr : &defects[k], strong, tr.times[k], p);

  std::vector<ReiBreakdown> out(N);
  ReiBreakdown acc;
  for (std::size_t k = 0; k < N; ++k) {
    if (k > 0) {
      const double h = 0.5 * (tr.times[k] - tr.times[k - 1]);
      acc.dissipation += h * (in[k].dissipation + in[k - 1].dissipation);
      for (int j = 0; j < 8; ++j) acc.terms[j] += h * (in[k].terms[j] + in[k - 1].terms[j]);
    }
    ReiBreakdown r = acc;
    r.t = tr.times[k];
    r.energy_jump = in[k].energy - in[0].energy;
    r.energy_defect = defect_integral(defects, k, true);
    r.dissipation_defect = defect_integral(defects, k, false);
    r.lhs = r.energy_jump + r.energy_defect + r.dissipation_defect + r.dissipation;
    r.residual = r.rhs() - r.lhs;
    out[k] = r;
  }
  return out;
}

ReiBreakdown rei_breakdown(const Trajectory& tr, const MeasureSequence& ms, DefectSpan defects,
                           const StrongSolution& strong, const FluidParams& p, std::size_t n) {
  check_alignment(tr, ms, defects, n);
  Trajectory head;
  head.times.assign(tr.times.begin(), tr.times.begin() + n + 1);
  head.dissipation_accum.assign(tr.dissipation_accum.begin(), tr.dissipation_accum.begin() + n + 1);
  head.config = tr.config;
  std::vector<MeasureField> fields;
  for (std::size_t k = 0; k <= n; ++k) fields.push_back(ms.at(k));
  const MeasureSequence sub(head.times, std::move(fields));
  head.states.assign(tr.states.begin(), tr.states.begin() + std::min(n + 1, tr.states.size()));
  return rei_series(head, sub, defects.empty() ? defects : defects.first(n + 1), strong, p).back();
}

}  // namespace dmv
