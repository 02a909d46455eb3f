#pragma once

#include <Eigen/Dense>

#include "den/fem.hpp"

namespace den {

/// Eigenpairs sorted ascending by (|lambda|, Re, Im); eigenvector columns are
/// unit-norm with the largest-modulus entry rotated real positive.
struct SpectrumResult {
    Eigen::VectorXcd eigenvalues;
    Eigen::MatrixXcd eigenvectors;  // N x K
    Eigen::VectorXd residuals;      // ||A u - lambda B u||_2 per pair
};

/// First K eigenpairs of A x = lambda B x by Schur-complement reduction to
/// the boundary block (B is singular on interior nodes). The interior block
/// of A must be invertible; K may not exceed the boundary node count.
SpectrumResult solve_steklov(const AssembledSystem& system, std::int64_t count);

/// All finite eigenvalues of the pencil (one per boundary unknown).
SpectrumResult full_spectrum_boundary(const AssembledSystem& system);

/// Residual acceptance threshold used by the solver contract:
/// 1e-8 * (||A||_1 + |lambda| * ||B||_1).
double residual_scale(const AssembledSystem& system, const std::complex<double>& lambda);

}  // namespace den
