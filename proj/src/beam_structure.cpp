#include "femsel/beam_structure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace femsel {

CrossSection make_rectangular_section(double width, double thickness) {
    if (!(width > 0.0) || !(thickness > 0.0)) {
        throw std::invalid_argument("section dimensions must be positive");
    }
    CrossSection s;
    s.width = width;
    s.thickness = thickness;
    s.area = width * thickness;
    s.iy = thickness * width * width * width / 12.0;
    s.iz = width * thickness * thickness * thickness / 12.0;

    // Saint-Venant approximation for a solid rectangle, a >= b.
    const double a = std::max(width, thickness);
    const double b = std::min(width, thickness);
    const double ratio = b / a;
    s.torsion_constant = a * b * b * b *
                         (1.0 / 3.0 - 0.21 * ratio * (1.0 - std::pow(ratio, 4) / 12.0));
    return s;
}

Material nominal_material() { return Material{}; }

CrossSection nominal_section() { return make_rectangular_section(0.0322, 0.0098); }

Eigen::Matrix3d member_frame(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                             const Eigen::Vector3d& normal) {
    const Eigen::Vector3d ex = (b - a).normalized();
    const Eigen::Vector3d ez = (normal - normal.dot(ex) * ex).normalized();
    const Eigen::Vector3d ey = ez.cross(ex);
    Eigen::Matrix3d frame;
    frame.row(0) = ex.transpose();
    frame.row(1) = ey.transpose();
    frame.row(2) = ez.transpose();
    return frame;
}

BeamGeometry build_h_beam_geometry() {
    BeamGeometry g;
    g.nodes = {
        {0.0, -0.2, 0.0},  // 0  lower end of left leg
        {0.0, -0.1, 0.0},  // 1
        {0.0, 0.0, 0.0},   // 2  left joint
        {0.0, 0.1, 0.0},   // 3
        {0.0, 0.2, 0.0},   // 4  upper end of left leg
        {0.1, 0.0, 0.0},   // 5
        {0.2, 0.0, 0.0},   // 6
        {0.3, 0.0, 0.0},   // 7
        {0.4, 0.0, 0.0},   // 8
        {0.5, 0.0, 0.0},   // 9
        {0.6, 0.0, 0.0},   // 10 right joint
        {0.6, -0.1, 0.0},  // 11 lower end of right leg
        {0.6, 0.1, 0.0},   // 12 upper end of right leg
    };
    g.left_joint = 2;
    g.right_joint = 10;

    const std::array<std::pair<std::size_t, std::size_t>, kElementCount> connectivity{{
        {0, 1}, {1, 2}, {2, 3}, {3, 4},                   // left leg
        {2, 5}, {5, 6}, {6, 7}, {7, 8}, {8, 9}, {9, 10},  // crossbar
        {11, 10}, {10, 12},                               // right leg
    }};
    const Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
    for (std::size_t e = 0; e < connectivity.size(); ++e) {
        const auto [a, b] = connectivity[e];
        g.elements.push_back({static_cast<int>(e + 1), a, b,
                              member_frame(g.nodes[a], g.nodes[b], normal)});
    }
    return g;
}

std::size_t ModelSpec::group_of(int element_id) const {
    for (std::size_t j = 0; j < groups.size(); ++j) {
        for (int e : groups[j]) {
            if (e == element_id) return j;
        }
    }
    throw std::out_of_range("element " + std::to_string(element_id) + " not in model m" +
                            std::to_string(model_id));
}

const std::vector<ModelSpec>& model_catalog() {
    static const std::vector<ModelSpec> catalog{
        {1, {{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}}},
        {2, {{1, 4, 6, 7, 8, 9}, {2, 3, 5, 10, 11, 12}}},
        {3, {{1, 4, 6, 7, 8, 9}, {2, 3, 11, 12}, {5, 10}}},
        {4, {{1, 4, 6, 7, 8, 9}, {2, 3}, {11, 12}, {5, 10}}},
        {5, {{1, 4, 6, 7, 8, 9}, {2, 3}, {11, 12}, {5}, {10}}},
        {6, {{1, 2, 3, 4}, {5, 6, 7, 8, 9, 10, 11, 12}}},
        {7, {{1, 2, 3, 4, 5, 6}, {7, 8, 9, 10, 11, 12}}},
        {8, {{1, 2, 3, 4, 5}, {6, 7, 8, 9}, {10, 11, 12}}},
    };
    return catalog;
}

const ModelSpec& model_by_id(int model_id) {
    const auto& catalog = model_catalog();
    if (model_id < 1 || model_id > static_cast<int>(catalog.size())) {
        throw std::out_of_range("unknown model id " + std::to_string(model_id));
    }
    return catalog[static_cast<std::size_t>(model_id - 1)];
}

ModulusVector element_modulus_vector(const ModelSpec& model, const ParameterVector& position) {
    for (std::size_t j = 0; j < model.d(); ++j) {
        if (!(position[j] > 0.0)) {
            throw std::invalid_argument("non-physical modulus in parameter " +
                                        std::to_string(j + 1) + " of model m" +
                                        std::to_string(model.model_id));
        }
    }
    ModulusVector moduli{};
    for (std::size_t j = 0; j < model.d(); ++j) {
        for (int e : model.groups[j]) {
            moduli[static_cast<std::size_t>(e - 1)] = position[j];
        }
    }
    return moduli;
}

MeasuredData measured_h_beam() { return MeasuredData{}; }

}  // namespace femsel
