#pragma once

#include "rmill/types.hpp"

namespace rmill {

/// Uniform Bernoulli-beam section data for one link.
struct BeamParams {
  double L = 0;    // length, m
  double rho = 0;  // mass density, kg/m^3
  double A = 0;    // cross-section area, m^2
  double Ip = 0;   // torsional constant, m^4
  double Iy = 0;   // quadratic momentum about y, m^4
  double Iz = 0;   // quadratic momentum about z, m^4

  double mass() const { return rho * A * L; }
  bool valid() const {
    return L > 0 && rho > 0 && A > 0 && Ip > 0 && Iy > 0 && Iz > 0;
  }
};

struct ShapeValues {
  double f, g, h;
};

/// Tip-loaded beam interpolation values at position x along a beam of
/// length L: f = x/L, g = x^2(3L - x)/(2L^3), h = 2x(L - x/2)/L^2.
ShapeValues shape_functions(double x, double L);

/// 12x12 reduced link mass matrix coupling the end displacements
/// (dt_root, dt_tip) in the beam's local frame (x along the beam), from
/// the kinetic energy of the beam with tip-loaded deformation shapes.
/// Gauss-Legendre quadrature; the integrand is polynomial of degree <= 6,
/// so order 8 is exact to roundoff.
Matrix12d reduced_link_mass(const BeamParams& beam, int quadrature_order = 8);

/// 6x12 interpolation matrix B(x): cross-section displacement as a linear
/// map of the stacked end displacements. Exposed for tests.
Eigen::Matrix<double, 6, 12> beam_interpolation(double x, double L);

}  // namespace rmill
