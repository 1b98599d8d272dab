#include "dmv/strong.hpp"

#include <cmath>

namespace dmv {

StrongThermo strong_thermo(const StrongSample& s, const FluidParams& p) {
  const double k = p.gamma - 1.0;
  StrongThermo t{};
  t.S = thermo::entropy(s.rho, s.theta, p);
  t.p = thermo::pressure(s.rho * s.theta, p);
  t.dp_drho = thermo::dp_drho(s.rho, t.S, p);
  t.dp_dS = thermo::dp_dS(s.rho, t.S, p);
  t.vartheta = p.a * std::pow(s.rho, k) * std::pow(s.theta, p.gamma);
  t.grad_vartheta = t.vartheta * ((k / s.rho) * s.grad_rho + (p.gamma / s.theta) * s.grad_theta);
  return t;
}

Brackets brackets(const StrongSample& s, const FluidParams& p) {
  const double k = p.gamma - 1.0;
  const StrongThermo th = strong_thermo(s, p);
  const double div_u = s.grad_u.trace();
  const double log_term = (std::log(p.a) + p.gamma * std::log(s.theta)) / k;
  const Vec2 grad_S = log_term * s.grad_rho + (s.rho * p.gamma / (k * s.theta)) * s.grad_theta;
  const double S_t = log_term * s.rho_t + s.rho * p.gamma / (k * s.theta) * s.theta_t;
  const Vec2 grad_p = p.a * p.gamma * std::pow(s.rho * s.theta, k) * (s.theta * s.grad_rho + s.rho * s.grad_theta);
  const double vartheta_t = th.vartheta * (k * s.rho_t / s.rho + p.gamma * s.theta_t / s.theta);

  Brackets b;
  b.momentum = s.rho * (s.u_t + s.grad_u * s.u) + grad_p - s.div_stress;
  b.continuity = s.rho_t + dot(s.grad_rho, s.u) + s.rho * div_u;
  b.entropy = S_t + dot(grad_S, s.u) + th.S * div_u;
  b.temperature = vartheta_t + dot(s.u, th.grad_vartheta) + th.dp_dS * div_u;
  return b;
}

ForcingValue StrongSolution::forcing(double t, double x, double y, const FluidParams& p) const {
  const StrongSample s = sample(t, x, y);
  const Brackets b = brackets(s, p);
  ForcingValue f;
  f.rho = b.continuity;
  f.mom = b.momentum + b.continuity * s.u;
  f.z = s.theta * b.continuity + s.rho * (s.theta_t + dot(s.u, s.grad_theta));
  return f;
}

ConservedState StrongSolution::project(const Grid2D& g, double t) const {
  ScalarField rho(g), theta(g);
  VectorField u(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const StrongSample s = sample(t, g.xc(i), g.yc(j));
      rho(i, j) = s.rho;
      theta(i, j) = s.theta;
      u(i, j) = s.u;
    }
  }
  return ConservedState::from_primitive(rho, u, theta);
}

ConstantStrongSolution::ConstantStrongSolution(double rho, double theta) : rho_(rho), theta_(theta) {
  if (!(rho > 0.0) || !(theta > 0.0)) throw DomainError("constant strong solution needs rho, theta > 0");
}

StrongSample ConstantStrongSolution::sample(double, double, double) const {
  StrongSample s;
  s.rho = rho_;
  s.theta = theta_;
  return s;
}

ManufacturedSolution::ManufacturedSolution(const Params& m, const FluidParams& fluid) : m_(m), fluid_(fluid) {
  if (!(m.rho0 > 0.0) || !(m.theta0 > 0.0)) throw DomainError("manufactured solution needs rho0, theta0 > 0");
  if (!(std::abs(m.a_rho) < 1.0) || !(std::abs(m.a_theta) < 1.0))
    throw DomainError("manufactured amplitudes must be below 1");
}

StrongSolution::Bounds ManufacturedSolution::bounds() const {
  const double ar = std::abs(m_.a_rho), at = std::abs(m_.a_theta);
  return {m_.rho0 * (1.0 - ar), m_.rho0 * (1.0 + ar), m_.theta0 * (1.0 - at), m_.theta0 * (1.0 + at)};
}

StrongSample ManufacturedSolution::sample(double t, double x, double y) const {
  const double pi = 3.14159265358979323846;
  const double kx = pi / m_.lx, ky = pi / m_.ly;
  const double C = std::cos(m_.omega * t), Ct = -m_.omega * std::sin(m_.omega * t);
  const double cx = std::cos(kx * x), sx = std::sin(kx * x), cy = std::cos(ky * y), sy = std::sin(ky * y);
  const double c2x = std::cos(2 * kx * x), s2x = std::sin(2 * kx * x);
  const double c2y = std::cos(2 * ky * y), s2y = std::sin(2 * ky * y);

  StrongSample s;
  s.rho = m_.rho0 * (1.0 + m_.a_rho * C * cx * cy);
  s.grad_rho = (m_.rho0 * m_.a_rho * C) * Vec2{-kx * sx * cy, -ky * cx * sy};
  s.rho_t = m_.rho0 * m_.a_rho * Ct * cx * cy;

  s.theta = m_.theta0 * (1.0 + m_.a_theta * C * c2x * cy);
  s.grad_theta = (m_.theta0 * m_.a_theta * C) * Vec2{-2 * kx * s2x * cy, -ky * c2x * sy};
  s.theta_t = m_.theta0 * m_.a_theta * Ct * c2x * cy;

  const double U = m_.a_u * C, Ut = m_.a_u * Ct;
  const Vec2 shape{sx * sx * s2y, -s2x * sy * sy};
  s.u = U * shape;
  s.u_t = Ut * shape;
  s.grad_u = {U * kx * s2x * s2y, U * sx * sx * 2 * ky * c2y, -U * 2 * kx * c2x * sy * sy, -U * ky * s2x * s2y};

  const Vec2 lap{U * (2 * kx * kx * c2x * s2y - 4 * ky * ky * sx * sx * s2y),
                 -U * (-4 * kx * kx * s2x * sy * sy + 2 * ky * ky * s2x * c2y)};
  const Vec2 grad_div = (U * (kx - ky)) * Vec2{2 * kx * c2x * s2y, 2 * ky * s2x * c2y};
  const double mu = fluid_.mu;
  s.div_stress = mu * lap + (mu - 2.0 * mu / fluid_.dim + fluid_.lambda) * grad_div;
  return s;
}

}  // namespace dmv
