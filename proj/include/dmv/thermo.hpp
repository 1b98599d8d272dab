#pragma once

#include <stdexcept>
#include <string>

namespace dmv {

// Raised when a thermodynamic formula is evaluated outside its admissible domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Physical constants of the potential-temperature Navier-Stokes system.
//
// Validation is explicit (validate()) so that limiting cases such as
// vanishing viscosity can still be fed to pointwise formulas.
struct FluidParams {
  double gamma = 1.4;   // adiabatic index, > 1
  double a = 1.0;       // pressure constant in p = a (rho theta)^gamma
  double mu = 0.01;     // shear viscosity
  double lambda = 0.0;  // bulk viscosity parameter, >= -(2/d) mu
  double c_star = 0.5;  // potential temperature floor
  int dim = 2;

  // Throws DomainError naming the first violated constraint.
  void validate() const;
};

namespace thermo {

// Pressure and pressure potential as functions of z = rho * theta.
double pressure(double z, const FluidParams& p);
double pressure_potential(double z, const FluidParams& p);
double dpressure_dz(double z, const FluidParams& p);

// Total physical entropy S(rho, theta) = rho/(gamma-1) * ln(a theta^gamma).
// Requires theta >= c_star; the theta = 0 branch is not representable.
double entropy(double rho, double theta, const FluidParams& p);

// Inverse of entropy() in theta, for rho > 0.
double theta_of_entropy(double rho, double S, const FluidParams& p);

// Pressure in (rho, S) variables. rho = 0 is admissible only with S <= 0.
double pressure_rho_s(double rho, double S, const FluidParams& p);
double pressure_potential_rho_s(double rho, double S, const FluidParams& p);

double dP_drho(double rho, double S, const FluidParams& p);
double dP_dS(double rho, double S, const FluidParams& p);
double dp_drho(double rho, double S, const FluidParams& p);
double dp_dS(double rho, double S, const FluidParams& p);

// Absolute temperature (1/(gamma-1)) dp/dS; equals a rho^(gamma-1) theta^gamma.
double absolute_temperature(double rho, double S, const FluidParams& p);

// Hessian of P(rho, S) in closed form, row-major [PP_rr, PP_rS, PP_SS].
struct Hessian2 {
  double rr, rs, ss;
  double min_eigenvalue() const;
};
Hessian2 potential_hessian(double rho, double S, const FluidParams& p);

// Acoustic speed at frozen theta: sqrt(a gamma (rho theta)^(gamma-1) theta).
double sound_speed(double rho, double theta, const FluidParams& p);

// A (rho, theta, S) triple that is consistent by construction.
class ThermoPoint {
 public:
  ThermoPoint(double rho, double theta, const FluidParams& p);
  static ThermoPoint from_entropy(double rho, double S, const FluidParams& p);

  double rho() const { return rho_; }
  double theta() const { return theta_; }
  double S() const { return S_; }

 private:
  ThermoPoint(double rho, double theta, double S) : rho_(rho), theta_(theta), S_(S) {}
  double rho_, theta_, S_;
};

}  // namespace thermo
}  // namespace dmv
