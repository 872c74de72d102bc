#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace femsel {

/// Number of parameter slots in every particle (the largest model has five).
inline constexpr std::size_t kMaxParameters = 5;
inline constexpr std::size_t kElementCount = 12;
inline constexpr std::size_t kNodeCount = 13;
inline constexpr std::size_t kDofPerNode = 6;

using ParameterVector = std::array<double, kMaxParameters>;
using ModulusVector = std::array<double, kElementCount>;

struct Material {
    double youngs_modulus_mean = 7.2e10;  // Pa
    double density = 2793.0;              // kg/m^3
    double poisson_ratio = 0.33;

    double shear_modulus(double youngs_modulus) const {
        return youngs_modulus / (2.0 * (1.0 + poisson_ratio));
    }
};

/// Solid rectangular section. The width runs along local z (normal to the plane
/// of the frame), the thickness along local y (in the plane).
struct CrossSection {
    double width = 0.0;
    double thickness = 0.0;
    double area = 0.0;
    double iy = 0.0;  // thickness * width^3 / 12, out-of-plane bending (about local y)
    double iz = 0.0;  // width * thickness^3 / 12, in-plane bending (about local z)
    double torsion_constant = 0.0;

    double polar_moment() const { return iy + iz; }
};

CrossSection make_rectangular_section(double width, double thickness);

Material nominal_material();
CrossSection nominal_section();

struct BeamElementDef {
    int id;  // 1-based, 1..12
    std::size_t node_a;
    std::size_t node_b;
    /// Rows are the local x (axis), y, z directions expressed in global coordinates.
    Eigen::Matrix3d frame;

    double length(std::span<const Eigen::Vector3d> nodes) const {
        return (nodes[node_b] - nodes[node_a]).norm();
    }
};

struct BeamGeometry {
    std::vector<Eigen::Vector3d> nodes;
    std::vector<BeamElementDef> elements;
    std::size_t left_joint = 0;
    std::size_t right_joint = 0;

    std::size_t dof_count() const { return nodes.size() * kDofPerNode; }
};

/// Local frame for a member from a to b, with local z along `normal`.
Eigen::Matrix3d member_frame(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                             const Eigen::Vector3d& normal);

/**
 * The unsymmetrical H frame in the global XY plane (Z is the thickness
 * direction):
 *
 *   - left leg at x = 0, y in [-0.2, 0.2]; elements 1-2 below the joint,
 *     3-4 above it
 *   - crossbar along y = 0, x in [0, 0.6]; elements 5-10 left to right
 *   - right leg at x = 0.6, y in [-0.1, 0.1]; element 11 below, 12 above
 *
 * Both legs meet the crossbar at their midpoints and share all six DOFs there.
 * Every member has its local z along global Z, so the 9.8 mm thickness bends
 * in the plane of the H.
 */
BeamGeometry build_h_beam_geometry();

struct ModelSpec {
    int model_id;                         // 1..8
    std::vector<std::vector<int>> groups;  // element ids, 1-based

    std::size_t d() const { return groups.size(); }
    /// 0-based group index for a 1-based element id.
    std::size_t group_of(int element_id) const;
};

/// The eight competing parameterizations, in order m1..m8.
const std::vector<ModelSpec>& model_catalog();

/// Throws std::out_of_range for ids outside 1..8.
const ModelSpec& model_by_id(int model_id);

/// Per-element Young's modulus for a particle position. Only the first d
/// entries of `position` are read; each must be strictly positive.
ModulusVector element_modulus_vector(const ModelSpec& model, const ParameterVector& position);

struct MeasuredData {
    std::array<double, 5> frequencies_hz{53.9, 117.3, 208.4, 254.0, 445.0};
    std::array<std::size_t, 5> mode_indices{7, 8, 10, 11, 13};  // 1-based ranks
};

MeasuredData measured_h_beam();

}  // namespace femsel
