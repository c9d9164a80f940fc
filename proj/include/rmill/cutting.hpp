#pragma once

#include "rmill/types.hpp"

#include <vector>

namespace rmill {

/// Fractional cutting-force law constants, tool geometry and process
/// settings. SI internally; rpm / (m/min) are converted on load.
struct CuttingParams {
  double k0 = 0;     // cutting stiffness at small chip, N/m
  double hs = 0;     // specific chip thickness, m
  double r = 0;      // k_inf / k0, dimensionless, in (0, 1)
  double kr = 0;     // radial/tangential force ratio
  double ap = 0;     // depth of cut, m
  double R = 0;      // tool radius, m
  int Nz = 0;        // tooth count
  double omega = 0;  // spindle speed, rev/min
  double vf = 0;     // feed rate, m/min

  double spindle_rate() const { return 2.0 * M_PI * omega / 60.0; }  // rad/s
  double feed_speed() const { return vf / 60.0; }                    // m/s
  double feed_per_tooth() const { return vf / (Nz * omega); }        // m
  double tooth_period() const { return 60.0 / (omega * Nz); }        // s

  void validate() const;
};

struct ToothState {
  int index = 0;
  double phi = 0;       // angular position, rad, in [0, 2*pi)
  double h = 0;         // chip thickness, m
  bool engaged = false;
};

/// Tangential cutting force of one edge for chip thickness h; zero for
/// h <= 0 (lost contact), else k0*ap*(u + r*u^2)/(1 + u) with u = h/hs.
double fractional_force(double h, const CuttingParams& p);

/// Radial component, F_r = kr * F_t.
double radial_force(double Ft, const CuttingParams& p);

/// Resolve the engaged teeth into tool-frame force components:
/// F_x = sum(-F_r cos(phi) + F_t sin(phi)),
/// F_y = sum( F_r sin(phi) + F_t cos(phi)).
Eigen::Vector2d tool_frame_force(const std::vector<ToothState>& teeth,
                                 const CuttingParams& p);

/// Planar force as the 6-vector end-point wrench [F_x F_y 0 0 0 0].
Vector6d tool_wrench(const Eigen::Vector2d& fxy);

/// Tooth angles at time tau: phi_i = spindle_rate*tau + 2*pi*i/Nz, mod 2*pi.
/// Angles are measured so that the tooth tip direction is (sin m, cos m):
/// phi = 0 points along +y and phi = pi/2 along the +x feed direction.
std::vector<double> tooth_positions(const CuttingParams& p, double tau);

/// Tip direction unit vector for an angle.
inline Eigen::Vector2d tooth_direction(double phi) {
  return {std::sin(phi), std::cos(phi)};
}

inline double wrap_angle(double phi) {
  phi = std::fmod(phi, 2.0 * M_PI);
  return phi < 0 ? phi + 2.0 * M_PI : phi;
}

}  // namespace rmill
