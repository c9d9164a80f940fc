#include "rmill/cutting.hpp"

#include <cmath>

namespace rmill {

void CuttingParams::validate() const {
  if (!(k0 > 0)) throw ConfigError("cutting.k0 must be positive");
  if (!(hs > 0)) throw ConfigError("cutting.hs must be positive");
  if (!(r > 0 && r < 1)) throw ConfigError("cutting.r must lie in (0, 1)");
  if (kr < 0) throw ConfigError("cutting.kr must be nonnegative");
  if (!(ap > 0)) throw ConfigError("cutting.ap must be positive");
  if (!(R > 0)) throw ConfigError("cutting.R must be positive");
  if (Nz < 1) throw ConfigError("cutting.Nz must be at least 1");
  if (!(omega > 0)) throw ConfigError("cutting.omega must be positive");
  if (vf < 0) throw ConfigError("cutting.vf must be nonnegative");
}

double fractional_force(double h, const CuttingParams& p) {
  if (h <= 0) return 0.0;
  const double u = h / p.hs;
  return p.k0 * p.ap * (u + p.r * u * u) / (1.0 + u);
}

double radial_force(double Ft, const CuttingParams& p) { return p.kr * Ft; }

Eigen::Vector2d tool_frame_force(const std::vector<ToothState>& teeth,
                                 const CuttingParams& p) {
  double fx = 0, fy = 0;
  for (const ToothState& tooth : teeth) {
    if (!tooth.engaged) continue;
    const double ft = fractional_force(tooth.h, p);
    const double fr = radial_force(ft, p);
    fx += -fr * std::cos(tooth.phi) + ft * std::sin(tooth.phi);
    fy += fr * std::sin(tooth.phi) + ft * std::cos(tooth.phi);
  }
  return {fx, fy};
}

Vector6d tool_wrench(const Eigen::Vector2d& fxy) {
  Vector6d F = Vector6d::Zero();
  F[0] = fxy.x();
  F[1] = fxy.y();
  return F;
}

std::vector<double> tooth_positions(const CuttingParams& p, double tau) {
  std::vector<double> phis(p.Nz);
  const double base = p.spindle_rate() * tau;
  for (int i = 0; i < p.Nz; ++i)
    phis[i] = wrap_angle(base + 2.0 * M_PI * i / p.Nz);
  return phis;
}

}  // namespace rmill
