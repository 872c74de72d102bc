#include "femsel/fem_core.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace femsel {

namespace {

// Fills a symmetric 4x4 block into the DOF positions `idx`.
void scatter_block(Matrix12& target, const std::array<int, 4>& idx, const Eigen::Matrix4d& block) {
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) target(idx[i], idx[j]) = block(i, j);
    }
}

void scatter_pair(Matrix12& target, int i, int j, double diag, double off) {
    target(i, i) = diag;
    target(j, j) = diag;
    target(i, j) = off;
    target(j, i) = off;
}

}  // namespace

ElementMatrices beam_element_matrices(double youngs_modulus, double shear_modulus,
                                      const CrossSection& section, double density,
                                      double length) {
    if (!(youngs_modulus > 0.0)) throw std::invalid_argument("Young's modulus must be positive");
    if (!(shear_modulus > 0.0)) throw std::invalid_argument("shear modulus must be positive");
    if (!(length > 0.0)) throw std::invalid_argument("element length must be positive");

    const double E = youngs_modulus;
    const double L = length;
    const double L2 = L * L;
    const double L3 = L2 * L;

    ElementMatrices out;
    Matrix12& k = out.stiffness;
    Matrix12& m = out.mass;
    k.setZero();
    m.setZero();

    const double axial = E * section.area / L;
    const double torsion = shear_modulus * section.torsion_constant / L;
    scatter_pair(k, 0, 6, axial, -axial);
    scatter_pair(k, 3, 9, torsion, -torsion);

    // Bending in the local xy plane: (uy_a, rz_a, uy_b, rz_b).
    const double ez = E * section.iz;
    Eigen::Matrix4d bend_xy;
    bend_xy << 12 * ez / L3, 6 * ez / L2, -12 * ez / L3, 6 * ez / L2,
               6 * ez / L2, 4 * ez / L, -6 * ez / L2, 2 * ez / L,
               -12 * ez / L3, -6 * ez / L2, 12 * ez / L3, -6 * ez / L2,
               6 * ez / L2, 2 * ez / L, -6 * ez / L2, 4 * ez / L;
    scatter_block(k, {1, 5, 7, 11}, bend_xy);

    // Bending in the local xz plane: (uz_a, ry_a, uz_b, ry_b). A positive ry
    // produces a negative uz slope, hence the flipped coupling signs.
    const double ey = E * section.iy;
    Eigen::Matrix4d bend_xz;
    bend_xz << 12 * ey / L3, -6 * ey / L2, -12 * ey / L3, -6 * ey / L2,
               -6 * ey / L2, 4 * ey / L, 6 * ey / L2, 2 * ey / L,
               -12 * ey / L3, 6 * ey / L2, 12 * ey / L3, 6 * ey / L2,
               -6 * ey / L2, 2 * ey / L, 6 * ey / L2, 4 * ey / L;
    scatter_block(k, {2, 4, 8, 10}, bend_xz);

    const double total = density * section.area * L;
    scatter_pair(m, 0, 6, total / 3.0, total / 6.0);
    const double rot = density * section.polar_moment() * L;
    scatter_pair(m, 3, 9, rot / 3.0, rot / 6.0);

    const double c = total / 420.0;
    Eigen::Matrix4d mass_xy;
    mass_xy << 156, 22 * L, 54, -13 * L,
               22 * L, 4 * L2, 13 * L, -3 * L2,
               54, 13 * L, 156, -22 * L,
               -13 * L, -3 * L2, -22 * L, 4 * L2;
    scatter_block(m, {1, 5, 7, 11}, c * mass_xy);

    Eigen::Matrix4d mass_xz;
    mass_xz << 156, -22 * L, 54, 13 * L,
               -22 * L, 4 * L2, -13 * L, -3 * L2,
               54, -13 * L, 156, 22 * L,
               13 * L, -3 * L2, 22 * L, 4 * L2;
    scatter_block(m, {2, 4, 8, 10}, c * mass_xz);

    return out;
}

ElementMatrices transform_to_global(const ElementMatrices& local, const Eigen::Matrix3d& frame) {
    constexpr double kTol = 1e-10;
    if (((frame * frame.transpose()) - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > kTol) {
        throw std::invalid_argument("element frame is not orthonormal");
    }
    if (std::abs(frame.determinant() - 1.0) > kTol) {
        throw std::invalid_argument("element frame is not a proper rotation");
    }

    Matrix12 t = Matrix12::Zero();
    for (int b = 0; b < 4; ++b) t.block<3, 3>(3 * b, 3 * b) = frame;

    ElementMatrices out;
    out.stiffness.noalias() = t.transpose() * local.stiffness * t;
    out.mass.noalias() = t.transpose() * local.mass * t;
    return out;
}

GlobalSystem assemble(const BeamGeometry& geometry, const ModulusVector& moduli,
                      const Material& material, const CrossSection& section) {
    if (geometry.elements.size() != moduli.size()) {
        throw std::invalid_argument("modulus vector does not match element count");
    }
    const auto n = static_cast<Eigen::Index>(geometry.dof_count());
    GlobalSystem sys;
    sys.k_global = Eigen::MatrixXd::Zero(n, n);
    sys.m_global = Eigen::MatrixXd::Zero(n, n);

    for (std::size_t e = 0; e < geometry.elements.size(); ++e) {
        const BeamElementDef& el = geometry.elements[e];
        const double E = moduli[e];
        const ElementMatrices global = transform_to_global(
            beam_element_matrices(E, material.shear_modulus(E), section, material.density,
                                  el.length(geometry.nodes)),
            el.frame);

        std::array<Eigen::Index, 12> map{};
        for (std::size_t i = 0; i < kDofPerNode; ++i) {
            map[i] = static_cast<Eigen::Index>(GlobalSystem::dof_index(el.node_a, i));
            map[i + 6] = static_cast<Eigen::Index>(GlobalSystem::dof_index(el.node_b, i));
        }
        for (int i = 0; i < 12; ++i) {
            for (int j = 0; j < 12; ++j) {
                sys.k_global(map[i], map[j]) += global.stiffness(i, j);
                sys.m_global(map[i], map[j]) += global.mass(i, j);
            }
        }
    }
    return sys;
}

}  // namespace femsel
