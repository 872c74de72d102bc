#pragma once

#include "femsel/beam_structure.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace femsel {

using Matrix12 = Eigen::Matrix<double, 12, 12>;

struct ElementMatrices {
    Matrix12 stiffness;
    Matrix12 mass;
};

struct GlobalSystem {
    Eigen::MatrixXd k_global;
    Eigen::MatrixXd m_global;

    std::size_t dof_count() const { return static_cast<std::size_t>(k_global.rows()); }

    /// Global index of DOF `local` (0..5: ux, uy, uz, rx, ry, rz) at `node`.
    static std::size_t dof_index(std::size_t node, std::size_t local) {
        return node * kDofPerNode + local;
    }
};

/// 12-DOF Euler-Bernoulli space-frame element in local coordinates
/// (node a: ux uy uz rx ry rz, then node b). Consistent mass.
ElementMatrices beam_element_matrices(double youngs_modulus, double shear_modulus,
                                      const CrossSection& section, double density,
                                      double length);

/// Rotates local element matrices into the global frame. `frame` rows are the
/// local axes in global coordinates, so u_local = frame * u_global.
ElementMatrices transform_to_global(const ElementMatrices& local, const Eigen::Matrix3d& frame);

GlobalSystem assemble(const BeamGeometry& geometry, const ModulusVector& moduli,
                      const Material& material, const CrossSection& section);

}  // namespace femsel
