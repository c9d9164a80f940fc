#include "rmill/beam_mass.hpp"

#include "rmill/se3.hpp"

#include <cmath>
#include <vector>

namespace rmill {

ShapeValues shape_functions(double x, double L) {
  if (L <= 0) throw ConfigError("beam length must be positive");
  if (x < 0 || x > L) throw ConfigError("shape function argument outside [0, L]");
  const double f = x / L;
  const double g = 0.5 * x * x * (3.0 * L - x) / (L * L * L);
  const double h = 2.0 * x * (L - 0.5 * x) / (L * L);
  return {f, g, h};
}

namespace {

// rigid carry-over of the root displacement to position x along the beam
Eigen::Matrix<double, 6, 6> carry_over(double x) {
  Eigen::Matrix<double, 6, 6> D = Eigen::Matrix<double, 6, 6>::Identity();
  D.block<3, 3>(0, 3) = se3::skew(Eigen::Vector3d(x, 0, 0));
  return D;
}

Eigen::Matrix<double, 6, 6> shape_diag(double x, double L) {
  const ShapeValues s = shape_functions(x, L);
  Eigen::Matrix<double, 6, 6> S = Eigen::Matrix<double, 6, 6>::Zero();
  S.diagonal() << s.f, s.g, s.g, s.f, s.h, s.h;
  return S;
}

// Gauss-Legendre nodes and weights on [-1, 1], Newton on the Legendre
// polynomial from a Chebyshev starting guess
void gauss_legendre(int order, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.resize(order);
  weights.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[order - 1 - i] = w;
  }
}

}  // namespace

Eigen::Matrix<double, 6, 12> beam_interpolation(double x, double L) {
  Eigen::Matrix<double, 6, 12> B;
  const Eigen::Matrix<double, 6, 6> S = shape_diag(x, L);
  B.leftCols<6>() = carry_over(x) - S * carry_over(L);
  B.rightCols<6>() = S;
  return B;
}

Matrix12d reduced_link_mass(const BeamParams& beam, int quadrature_order) {
  if (!beam.valid()) throw ConfigError("invalid beam parameters");
  if (quadrature_order < 4) throw ConfigError("quadrature order too low");

  Vector6d q_diag;
  q_diag << beam.A, beam.A, beam.A, beam.Ip, beam.Iy, beam.Iz;

  std::vector<double> nodes, weights;
  gauss_legendre(quadrature_order, nodes, weights);

  Matrix12d M = Matrix12d::Zero();
  const double half = 0.5 * beam.L;
  for (int i = 0; i < quadrature_order; ++i) {
    const double x = half * (nodes[i] + 1.0);
    const Eigen::Matrix<double, 6, 12> B = beam_interpolation(x, beam.L);
    M.noalias() += (weights[i] * half * beam.rho) *
                   (B.transpose() * q_diag.asDiagonal() * B);
  }
  return 0.5 * (M + M.transpose());
}

}  // namespace rmill
