#include "femsel/modal.hpp"

#include "femsel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace femsel {

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < j; ++i) sum += a(i, j) * a(i, j);
    }
    return std::sqrt(2.0 * sum);
}

}  // namespace

int jacobi_eigen(Eigen::MatrixXd& a, Eigen::MatrixXd* vectors, int max_sweeps) {
    const Eigen::Index n = a.rows();
    if (vectors != nullptr) vectors->setIdentity(n, n);

    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        double off = 0.0;
        for (Eigen::Index q = 1; q < n; ++q) {
            for (Eigen::Index p = 0; p < q; ++p) off += std::abs(a(p, q));
        }
        if (off == 0.0) return sweep - 1;

        for (Eigen::Index q = 1; q < n; ++q) {
            for (Eigen::Index p = 0; p < q; ++p) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                const double g = 100.0 * std::abs(apq);
                // Entries already below the diagonals' resolution are dropped
                // once the early sweeps have done the bulk of the work.
                if (sweep > 4 && std::abs(app) + g == std::abs(app) &&
                    std::abs(aqq) + g == std::abs(aqq)) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }

                const double diff = aqq - app;
                double t;
                if (std::abs(diff) + g == std::abs(diff)) {
                    t = apq / diff;
                } else {
                    const double theta = 0.5 * diff / apq;
                    t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                double* col_p = a.col(p).data();
                double* col_q = a.col(q).data();
                for (Eigen::Index r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = col_p[r];
                    const double arq = col_q[r];
                    col_p[r] = arp - s * (arq + arp * tau);
                    col_q[r] = arq + s * (arp - arq * tau);
                }
                for (Eigen::Index r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    a(p, r) = col_p[r];
                    a(q, r) = col_q[r];
                }

                if (vectors != nullptr) {
                    double* vp = vectors->col(p).data();
                    double* vq = vectors->col(q).data();
                    for (Eigen::Index r = 0; r < n; ++r) {
                        const double x = vp[r];
                        const double y = vq[r];
                        vp[r] = x - s * (y + x * tau);
                        vq[r] = y + s * (x - y * tau);
                    }
                }
            }
        }
    }
    throw ConvergenceError("Jacobi iteration did not converge in " + std::to_string(max_sweeps) +
                               " sweeps",
                           off_diagonal_norm(a));
}

EigenPairs solve_generalized_eigen(const Eigen::MatrixXd& k, const Eigen::MatrixXd& m,
                                   const EigenSolveConfig& config, bool want_vectors) {
    if (k.rows() != k.cols() || m.rows() != m.cols() || k.rows() != m.rows()) {
        throw std::invalid_argument("K and M must be square and of equal size");
    }
    if (!(config.residual_tolerance > 0.0) || config.max_iterations < 1) {
        throw std::invalid_argument("invalid eigen-solve configuration");
    }
    const Eigen::Index n = k.rows();

    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        throw DecompositionError("mass matrix is not positive definite");
    }
    const auto lower = llt.matrixL();

    // A = L^-1 K L^-T, symmetrized against roundoff.
    Eigen::MatrixXd a = lower.solve(k);
    a = lower.solve(a.transpose()).eval();
    a = 0.5 * (a + a.transpose()).eval();

    Eigen::MatrixXd rotations;
    EigenPairs out;
    out.sweeps = jacobi_eigen(a, want_vectors ? &rotations : nullptr, config.max_iterations);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

    out.values.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) out.values[i] = a(order[i], order[i]);
    if (!want_vectors) return out;

    Eigen::MatrixXd sorted(n, n);
    for (Eigen::Index i = 0; i < n; ++i) sorted.col(i) = rotations.col(order[i]);
    out.vectors = llt.matrixU().solve(sorted);

    const double tol = config.residual_tolerance;
    const double k_norm = k.norm();
    const double threshold =
        n > static_cast<Eigen::Index>(kExpectedRigidModes)
            ? kRigidBodyRatio * out.values[static_cast<Eigen::Index>(kExpectedRigidModes)]
            : 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd phi = out.vectors.col(i);
        const Eigen::VectorXd k_phi = k * phi;
        const double lambda = out.values[i];
        if (lambda < threshold) {
            if (k_phi.norm() > tol * k_norm * phi.norm()) {
                throw ConvergenceError("rigid-body residual check failed for mode " +
                                           std::to_string(i + 1),
                                       off_diagonal_norm(a));
            }
        } else if ((k_phi - lambda * (m * phi)).norm() > tol * k_phi.norm()) {
            throw ConvergenceError("residual check failed for mode " + std::to_string(i + 1),
                                   off_diagonal_norm(a));
        }
    }
    return out;
}

std::size_t count_rigid_modes(const Eigen::VectorXd& ascending_eigenvalues) {
    if (ascending_eigenvalues.size() <= static_cast<Eigen::Index>(kExpectedRigidModes)) {
        return static_cast<std::size_t>(ascending_eigenvalues.size());
    }
    const double threshold =
        kRigidBodyRatio * ascending_eigenvalues[static_cast<Eigen::Index>(kExpectedRigidModes)];
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < ascending_eigenvalues.size(); ++i) {
        if (ascending_eigenvalues[i] < threshold) ++count;
    }
    return count;
}

double eigenvalue_to_hz(double eigenvalue) {
    return std::sqrt(std::max(eigenvalue, 0.0)) / (2.0 * std::numbers::pi);
}

ModalResult natural_frequencies(const GlobalSystem& system, const EigenSolveConfig& config,
                                bool with_mode_shapes) {
    EigenPairs pairs = solve_generalized_eigen(system, config, with_mode_shapes);

    ModalResult result;
    result.rigid_body_count = count_rigid_modes(pairs.values);
    if (result.rigid_body_count != kExpectedRigidModes) {
        throw StructureError("expected 6 rigid-body modes, found " +
                             std::to_string(result.rigid_body_count));
    }
    result.eigenvalues.assign(pairs.values.begin(), pairs.values.end());
    result.frequencies_hz.reserve(result.eigenvalues.size());
    for (double lambda : result.eigenvalues) {
        result.frequencies_hz.push_back(eigenvalue_to_hz(lambda));
    }
    if (with_mode_shapes) result.mode_shapes = std::move(pairs.vectors);
    return result;
}

std::array<double, 5> select_modes(const ModalResult& result, const MeasuredData& measured) {
    std::array<double, 5> out{};
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::size_t rank = measured.mode_indices[i];
        if (rank < 1 || rank > result.frequencies_hz.size()) {
            throw std::invalid_argument("modal result has " +
                                        std::to_string(result.frequencies_hz.size()) +
                                        " modes, rank " + std::to_string(rank) + " requested");
        }
        out[i] = result.frequencies_hz[rank - 1];
    }
    return out;
}

}  // namespace femsel
