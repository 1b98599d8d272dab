#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "dmv/field.hpp"
#include "dmv/mvmeasure.hpp"
#include "dmv/strong.hpp"
#include "dmv/thermo.hpp"

namespace dmv {

// F(rho~, S~ | rho, S) = P(rho~, S~) - dP/drho (rho~ - rho) - dP/dS (S~ - S) - P(rho, S).
// Bregman divergence of the convex potential P(rho, S); needs rho > 0.
double relative_pressure_potential(double rho_t, double S_t, double rho, double S, const FluidParams& p);

// <V; 1/2 rho~ |u~ - u|^2 + F(rho~, S~ | rho, S)> with S~ = S(rho~, theta~).
double relative_energy_cell(std::span<const Atom> cell, double rho, double theta, Vec2 u, const FluidParams& p);

// Cellwise relative energy against the reference sampled at cell centres.
ScalarField relative_energy_density(const MeasureField& m, const StrongSolution& strong, double t,
                                    const FluidParams& p);
double relative_energy_total(const MeasureField& m, const StrongSolution& strong, double t, const FluidParams& p);

struct ReferenceBox {
  double rho_lo, rho_hi, theta_lo, theta_hi;
};

// Near set R = {c1 rho_lo <= rho~ <= c2 rho_hi, c_star <= theta~ <= c3 theta_hi}
// and far set S = admissible quadrant minus R.
class CoercivitySets {
 public:
  // Throws std::invalid_argument unless 0 < c1 <= c2 and c3 >= c_star / theta_hi.
  CoercivitySets(const FluidParams& p, const ReferenceBox& box, double c1, double c2, double c3);

  bool admissible(double rho_t, double theta_t) const { return rho_t >= 0.0 && theta_t >= p_.c_star; }
  bool in_R(double rho_t, double theta_t) const;
  bool in_S(double rho_t, double theta_t) const { return admissible(rho_t, theta_t) && !in_R(rho_t, theta_t); }

  double c1() const { return c1_; }
  double c2() const { return c2_; }
  double c3() const { return c3_; }

 private:
  FluidParams p_;
  ReferenceBox box_;
  double c1_, c2_, c3_;
};

struct CoercivitySampling {
  int n_rho = 160;         // log-spaced rho~ values (plus rho~ = 0)
  int n_theta = 120;       // log-spaced theta~ values
  int n_ref = 5;           // reference grid per axis, corners included
  int max_level = 8;       // c1 = 2^-k, c2 = 2^k, c3 = max(2^k, c_star/theta_hi) for k = 1..max_level
  long fresh = 100000;     // independent random checks
  std::uint64_t seed = 7;
  double coincidence_radius = 1e-8;
};

struct CoercivityCertificate {
  bool passed = false;
  double c1 = 0, c2 = 0, c3 = 0, c4 = 0;
  int level = 0;
  long samples = 0;
  // Location of the minimising ratio.
  double min_rho_t = 0, min_theta_t = 0, min_rho = 0, min_theta = 0;
  std::string min_set;  // "R", "S" or "hessian"
  long fresh_checked = 0;
  long fresh_violations = 0;
  // First fresh violation, if any.
  double viol_rho_t = 0, viol_theta_t = 0, viol_rho = 0, viol_theta = 0, viol_ratio = 0;
  FluidParams params;
  ReferenceBox box{};
  std::string message;
};

// Lower bound demanded of F: |rho~-rho|^2 + |S~-S|^2 on R, 1 + (rho~ theta~)^gamma on S.
double coercivity_bound(const CoercivitySets& sets, double rho_t, double theta_t, double rho, double theta,
                        const FluidParams& p);

// Throws std::invalid_argument for inadmissible boxes (including c_star > theta_hi).
CoercivityCertificate verify_coercivity(const FluidParams& p, const ReferenceBox& box,
                                        const CoercivitySampling& s = {});

}  // namespace dmv
