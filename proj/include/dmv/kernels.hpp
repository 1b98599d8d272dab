#pragma once

#include "dmv/field.hpp"
#include "dmv/thermo.hpp"

namespace dmv {

// Time derivative of the conserved unknowns produced by the spatial operator.
struct Rhs {
  ScalarField rho;
  VectorField mom;
  ScalarField z;

  explicit Rhs(const Grid2D& g) : rho(g), mom(g), z(g) {}
  friend bool operator==(const Rhs&, const Rhs&) = default;
};

enum class Backend { serial, openmp };

// S(grad u) = mu (grad u + grad u^T - (2/d) div u I) + lambda div u I.
Mat2 viscous_stress(const Mat2& grad_u, const FluidParams& p);

namespace kernels {

// Velocity gradient used by the scheme: central differences with odd
// (no-slip) velocity ghosts.
TensorField velocity_gradient(const ConservedState& s, Backend backend);

// Semi-discrete right-hand side: Rusanov interface fluxes for (rho, rho u,
// rho theta), face-averaged pressure and viscous stress. Walls are handled
// by no-slip ghost reflection.
//
// The serial backend recomputes both faces of every cell; the openmp backend
// stores face fluxes once. Both evaluate the same expressions in the same
// order and agree bit for bit.
void rhs(const ConservedState& s, const FluidParams& p, Backend backend, Rhs& out);

// max over cells of (|u_x|+c)/dx + (|u_y|+c)/dy + 2(2mu+|lambda|)/rho (1/dx^2+1/dy^2).
// Throws DomainError naming the cell if a density is not positive.
double max_rate(const ConservedState& s, const FluidParams& p, Backend backend);

// integral of S(grad u) : grad u with the scheme's velocity gradient.
double dissipation_rate(const ConservedState& s, const FluidParams& p, Backend backend);

}  // namespace kernels
}  // namespace dmv
