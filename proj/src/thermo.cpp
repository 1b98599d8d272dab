#include "dmv/thermo.hpp"

#include <cmath>

namespace dmv {

void FluidParams::validate() const {
  if (!(gamma > 1.0)) throw DomainError("fluid.gamma must be > 1");
  if (!(a > 0.0)) throw DomainError("fluid.a must be > 0");
  if (!(mu > 0.0)) throw DomainError("fluid.mu must be > 0");
  if (dim < 1) throw DomainError("fluid.dim must be positive");
  if (!(lambda >= -2.0 / dim * mu)) throw DomainError("fluid.lambda must be >= -(2/d) mu");
  if (!(c_star > 0.0)) throw DomainError("fluid.c_star must be > 0");
}

namespace thermo {

double pressure(double z, const FluidParams& p) {
  if (z < 0.0) throw DomainError("pressure: rho*theta must be nonnegative");
  return p.a * std::pow(z, p.gamma);
}

double pressure_potential(double z, const FluidParams& p) {
  return pressure(z, p) / (p.gamma - 1.0);
}

double dpressure_dz(double z, const FluidParams& p) {
  if (z < 0.0) throw DomainError("dpressure_dz: rho*theta must be nonnegative");
  return p.a * p.gamma * std::pow(z, p.gamma - 1.0);
}

double entropy(double rho, double theta, const FluidParams& p) {
  if (rho < 0.0) throw DomainError("entropy: negative density");
  if (theta < p.c_star) throw DomainError("entropy: theta below c_star");
  if (rho == 0.0) return 0.0;
  return rho / (p.gamma - 1.0) * (std::log(p.a) + p.gamma * std::log(theta));
}

double theta_of_entropy(double rho, double S, const FluidParams& p) {
  if (!(rho > 0.0)) throw DomainError("theta_of_entropy: density must be positive");
  return std::exp(((p.gamma - 1.0) * S / rho - std::log(p.a)) / p.gamma);
}

double pressure_rho_s(double rho, double S, const FluidParams& p) {
  if (rho < 0.0) throw DomainError("pressure_rho_s: negative density");
  if (rho == 0.0) {
    if (S > 0.0) throw DomainError("pressure_rho_s: infinite pressure at rho = 0, S > 0");
    return 0.0;
  }
  return std::pow(rho, p.gamma) * std::exp((p.gamma - 1.0) * S / rho);
}

double pressure_potential_rho_s(double rho, double S, const FluidParams& p) {
  return pressure_rho_s(rho, S, p) / (p.gamma - 1.0);
}

double dP_drho(double rho, double S, const FluidParams& p) {
  if (!(rho > 0.0)) throw DomainError("dP_drho: density must be positive");
  const double P = pressure_potential_rho_s(rho, S, p);
  return P / rho * (p.gamma - (p.gamma - 1.0) * S / rho);
}

double dP_dS(double rho, double S, const FluidParams& p) {
  if (!(rho > 0.0)) throw DomainError("dP_dS: density must be positive");
  return pressure_rho_s(rho, S, p) / rho;
}

double dp_drho(double rho, double S, const FluidParams& p) { return (p.gamma - 1.0) * dP_drho(rho, S, p); }

double dp_dS(double rho, double S, const FluidParams& p) { return (p.gamma - 1.0) * dP_dS(rho, S, p); }

double absolute_temperature(double rho, double S, const FluidParams& p) { return dP_dS(rho, S, p); }

double Hessian2::min_eigenvalue() const {
  const double half_tr = 0.5 * (rr + ss);
  const double half_diff = 0.5 * (rr - ss);
  return half_tr - std::hypot(half_diff, rs);
}

// With k = gamma - 1 and s = S/rho the Hessian is
//   P k / rho^2 * [[1 + k (1-s)^2, k (1-s)], [k (1-s), k]],
// whose determinant factor is k > 0.
Hessian2 potential_hessian(double rho, double S, const FluidParams& p) {
  if (!(rho > 0.0)) throw DomainError("potential_hessian: density must be positive");
  const double k = p.gamma - 1.0;
  const double s = S / rho;
  const double scale = pressure_potential_rho_s(rho, S, p) * k / (rho * rho);
  const double w = 1.0 - s;
  return {scale * (1.0 + k * w * w), scale * k * w, scale * k};
}

double sound_speed(double rho, double theta, const FluidParams& p) {
  if (!(rho > 0.0)) throw DomainError("sound_speed: density must be positive");
  return std::sqrt(p.a * p.gamma * std::pow(rho * theta, p.gamma - 1.0) * theta);
}

ThermoPoint::ThermoPoint(double rho, double theta, const FluidParams& p)
    : rho_(rho), theta_(theta), S_(entropy(rho, theta, p)) {}

ThermoPoint ThermoPoint::from_entropy(double rho, double S, const FluidParams& p) {
  return ThermoPoint(rho, theta_of_entropy(rho, S, p), S);
}

}  // namespace thermo
}  // namespace dmv
