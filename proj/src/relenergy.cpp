#include "dmv/relenergy.hpp"

#include <cmath>
#include <stdexcept>

namespace dmv {

double relative_pressure_potential(double rho_t, double S_t, double rho, double S, const FluidParams& p) {
  if (!(rho > 0.0)) throw DomainError("relative_pressure_potential: reference density must be positive");
  const double P = thermo::pressure_potential_rho_s(rho, S, p);
  const double Pt = thermo::pressure_potential_rho_s(rho_t, S_t, p);
  return Pt - thermo::dP_drho(rho, S, p) * (rho_t - rho) - thermo::dP_dS(rho, S, p) * (S_t - S) - P;
}

double relative_energy_cell(std::span<const Atom> cell, double rho, double theta, Vec2 u, const FluidParams& p) {
  if (!(rho > 0.0) || !(theta > 0.0)) throw DomainError("relative_energy_cell: reference rho, theta must be positive");
  const double S = rho / (p.gamma - 1.0) * (std::log(p.a) + p.gamma * std::log(theta));
  const double P = thermo::pressure_potential_rho_s(rho, S, p);
  const double dr = thermo::dP_drho(rho, S, p), ds = thermo::dP_dS(rho, S, p);
  double e = 0.0;
  for (const Atom& a : cell) {
    const double St = thermo::entropy(a.rho, a.theta, p);
    const double F = thermo::pressure_potential_rho_s(a.rho, St, p) - dr * (a.rho - rho) - ds * (St - S) - P;
    e += a.weight * (0.5 * a.rho * norm2(a.u - u) + F);
  }
  return e;
}

ScalarField relative_energy_density(const MeasureField& m, const StrongSolution& strong, double t,
                                    const FluidParams& p) {
  const Grid2D& g = m.grid();
  ScalarField e(g);
  const int nx = g.nx(), ny = g.ny();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const StrongSample s = strong.sample(t, g.xc(i), g.yc(j));
      e(i, j) = relative_energy_cell(m.cell(i, j), s.rho, s.theta, s.u, p);
    }
  }
  return e;
}

double relative_energy_total(const MeasureField& m, const StrongSolution& strong, double t, const FluidParams& p) {
  return integrate(relative_energy_density(m, strong, t, p));
}

CoercivitySets::CoercivitySets(const FluidParams& p, const ReferenceBox& box, double c1, double c2, double c3)
    : p_(p), box_(box), c1_(c1), c2_(c2), c3_(c3) {
  if (!(c1 > 0.0) || !(c1 <= c2)) throw std::invalid_argument("coercivity sets need 0 < c1 <= c2");
  if (!(c3 >= p.c_star / box.theta_hi)) throw std::invalid_argument("coercivity sets need c3 >= c_star / theta_hi");
}

bool CoercivitySets::in_R(double rho_t, double theta_t) const {
  return rho_t >= c1_ * box_.rho_lo && rho_t <= c2_ * box_.rho_hi && theta_t >= p_.c_star &&
         theta_t <= c3_ * box_.theta_hi;
}

double coercivity_bound(const CoercivitySets& sets, double rho_t, double theta_t, double rho, double theta,
                        const FluidParams& p) {
  if (sets.in_R(rho_t, theta_t)) {
    const double S = rho / (p.gamma - 1.0) * (std::log(p.a) + p.gamma * std::log(theta));
    const double dS = thermo::entropy(rho_t, theta_t, p) - S;
    return (rho_t - rho) * (rho_t - rho) + dS * dS;
  }
  return 1.0 + std::pow(rho_t * theta_t, p.gamma);
}

}  // namespace dmv
