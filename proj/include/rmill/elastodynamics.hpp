#pragma once

#include "rmill/beam_mass.hpp"
#include "rmill/elastostatics.hpp"

namespace rmill {

/// 6x6 Cartesian mass matrix at the tool end-point. Link beam energies are
/// assembled over the node displacements and condensed onto the TCP through
/// the static-deformation shape under an end-point load: the node motion for
/// a TCP displacement dt is J_node * (K_theta - H)^-1 J_tcp^T K_c * dt.
Matrix6d cartesian_mass(const ManipulatorDescription& model,
                        const LoadedState& state,
                        const std::vector<Matrix12d>& link_masses);

/// Convenience overload building the reduced link masses from
/// model.link_beams.
Matrix6d cartesian_mass(const ManipulatorDescription& model,
                        const LoadedState& state);

/// Rayleigh damping C = alpha * M + beta * K.
Matrix6d damping_matrix(const Matrix6d& M_c, const Matrix6d& K_c, double alpha,
                        double beta);

}  // namespace rmill
