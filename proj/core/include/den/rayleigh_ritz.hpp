#pragma once

#include <Eigen/Dense>

#include "den/fem.hpp"

namespace den {

/// Ritz pairs recovered from a predicted subspace; values sorted by the
/// global (|mu|, Re, Im) convention, lifted vectors unit-norm and phase-fixed.
struct RitzResult {
    Eigen::VectorXcd ritz_values;
    Eigen::MatrixXcd reduced_vectors;  // k_U x k (selected columns)
    Eigen::MatrixXcd lifted_vectors;   // N x k
    Eigen::Index selected_count = 0;
};

struct ReducedPencil {
    Eigen::MatrixXcd a_hat;  // Q^H A Q
    Eigen::MatrixXcd b_hat;  // Q^H B Q
};

/// Galerkin compression of (A, B) onto span(Q_U); O(N k_U^2) sparse-dense
/// products.
ReducedPencil reduce(const Eigen::MatrixXcd& q_u, const AssembledSystem& system);

/// Dense reduced GEP, sorted; throws ReducedPencilSingular when B_hat is
/// numerically singular.
RitzResult solve_reduced(const Eigen::MatrixXcd& a_hat, const Eigen::MatrixXcd& b_hat);

/// reduce -> solve_reduced -> lift; keeps the K smallest-modulus Ritz pairs.
RitzResult reconstruct_eigenpairs(const Eigen::MatrixXcd& q_u, const AssembledSystem& system,
                                  Eigen::Index k);

}  // namespace den
