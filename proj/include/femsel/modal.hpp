#pragma once

#include "femsel/beam_structure.hpp"
#include "femsel/fem_core.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace femsel {

struct EigenSolveConfig {
    double residual_tolerance = 1e-9;
    int max_iterations = 100;  // Jacobi sweeps; 78x78 needs well under 20
};

struct EigenPairs {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns, M-orthonormal; empty when not requested
    int sweeps = 0;
};

/// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations.
/// `a` is overwritten. When `vectors` is non-null it receives the rotation
/// product (columns are eigenvectors, unsorted). Returns the sweep count.
int jacobi_eigen(Eigen::MatrixXd& a, Eigen::MatrixXd* vectors, int max_sweeps);

/**
 * Solves K phi = lambda M phi for symmetric K and symmetric positive definite M.
 *
 * M is Cholesky-factored (M = L L^T), the problem is reduced to the standard
 * symmetric form L^-1 K L^-T y = lambda y, diagonalized by Jacobi rotations,
 * and the vectors are mapped back with phi = L^-T y.
 *
 * When vectors are requested the residual contract is verified: each elastic
 * pair must satisfy |K phi - lambda M phi| <= tol |K phi| and each pair below
 * the rigid-body threshold must satisfy |K phi| <= tol |K| |phi|.
 *
 * Throws DecompositionError when M is not positive definite and
 * ConvergenceError when the iteration or the residual check fails.
 */
EigenPairs solve_generalized_eigen(const Eigen::MatrixXd& k, const Eigen::MatrixXd& m,
                                   const EigenSolveConfig& config = {},
                                   bool want_vectors = true);

inline EigenPairs solve_generalized_eigen(const GlobalSystem& system,
                                          const EigenSolveConfig& config = {},
                                          bool want_vectors = true) {
    return solve_generalized_eigen(system.k_global, system.m_global, config, want_vectors);
}

/// A mode is rigid when its eigenvalue is below this fraction of the 7th smallest.
inline constexpr double kRigidBodyRatio = 1e-6;
inline constexpr std::size_t kExpectedRigidModes = 6;

/// Number of eigenvalues (ascending input) below kRigidBodyRatio times the 7th.
std::size_t count_rigid_modes(const Eigen::VectorXd& ascending_eigenvalues);

double eigenvalue_to_hz(double eigenvalue);

struct ModalResult {
    std::vector<double> frequencies_hz;  // ascending
    std::vector<double> eigenvalues;     // ascending, unclamped
    std::size_t rigid_body_count = 0;
    std::optional<Eigen::MatrixXd> mode_shapes;
};

/// Throws StructureError unless exactly six rigid-body modes are found.
ModalResult natural_frequencies(const GlobalSystem& system, const EigenSolveConfig& config = {},
                                bool with_mode_shapes = false);

/// Frequencies at the measured 1-based ranks.
std::array<double, 5> select_modes(const ModalResult& result, const MeasuredData& measured);

}  // namespace femsel
