#pragma once

#include <memory>
#include <string>

#include "dmv/field.hpp"
#include "dmv/thermo.hpp"

namespace dmv {

// Pointwise values and first derivatives of a smooth reference triplet,
// plus div S(grad u).
struct StrongSample {
  double rho = 0.0, theta = 0.0;
  Vec2 u;
  Vec2 grad_rho, grad_theta;
  Mat2 grad_u;
  double rho_t = 0.0, theta_t = 0.0;
  Vec2 u_t;
  Vec2 div_stress;
};

// PDE residual factors of a reference triplet:
//   momentum    rho u_t + rho grad u u + grad p - div S
//   continuity  rho_t + div(rho u)
//   entropy     S_t + div(S u)
//   temperature vartheta_t + u . grad vartheta + dp/dS div u
struct Brackets {
  Vec2 momentum;
  double continuity = 0.0, entropy = 0.0, temperature = 0.0;
};

Brackets brackets(const StrongSample& s, const FluidParams& p);

// Derived thermodynamic quantities of a sample.
struct StrongThermo {
  double S, p, dp_drho, dp_dS, vartheta;
  Vec2 grad_vartheta;
};
StrongThermo strong_thermo(const StrongSample& s, const FluidParams& p);

// Source terms for (rho, rho u, rho theta) that make the triplet an exact
// solution of the forced system.
struct ForcingValue {
  double rho = 0.0;
  Vec2 mom;
  double z = 0.0;
};

class StrongSolution {
 public:
  struct Bounds {
    double rho_lo, rho_hi, theta_lo, theta_hi;
  };

  virtual ~StrongSolution() = default;
  virtual StrongSample sample(double t, double x, double y) const = 0;
  // Floors and caps of rho and theta over all times.
  virtual Bounds bounds() const = 0;
  virtual std::string name() const = 0;

  ForcingValue forcing(double t, double x, double y, const FluidParams& p) const;
  // Cell-centre samples as a conserved state.
  ConservedState project(const Grid2D& g, double t) const;
};

class ConstantStrongSolution final : public StrongSolution {
 public:
  ConstantStrongSolution(double rho, double theta);
  StrongSample sample(double t, double x, double y) const override;
  Bounds bounds() const override { return {rho_, rho_, theta_, theta_}; }
  std::string name() const override { return "constant"; }

 private:
  double rho_, theta_;
};

// Smooth time-periodic triplet on [0, lx] x [0, ly] with zero wall velocity
// and zero normal derivatives of rho and theta:
//   rho   = rho0 (1 + A_rho cos(wt) cos(kx x) cos(ky y))
//   theta = theta0 (1 + A_theta cos(wt) cos(2 kx x) cos(ky y))
//   u     = A_u cos(wt) (sin^2(kx x) sin(2 ky y), -sin(2 kx x) sin^2(ky y))
// with kx = pi/lx, ky = pi/ly.
class ManufacturedSolution final : public StrongSolution {
 public:
  struct Params {
    double rho0 = 1.0, theta0 = 1.0;
    double a_rho = 0.1, a_theta = 0.05, a_u = 0.1;
    double omega = 2.0 * 3.14159265358979323846;
    double lx = 1.0, ly = 1.0;
  };

  ManufacturedSolution(const Params& m, const FluidParams& fluid);
  StrongSample sample(double t, double x, double y) const override;
  Bounds bounds() const override;
  std::string name() const override { return "manufactured"; }

 private:
  Params m_;
  FluidParams fluid_;
};

}  // namespace dmv
