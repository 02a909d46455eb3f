#pragma once

#include <Eigen/Dense>

#include "den/mesh.hpp"

namespace den {

enum class BasisKind { pod_y, pod_xy, laplacian };

const char* to_string(BasisKind k);
BasisKind basis_kind_from_string(const std::string& s);

/// Orthonormal spectral basis Psi (complex N x K). POD variants carry the
/// snapshot singular values; the Laplacian variant carries the graph
/// eigenvalues in `singular_values` slots left empty.
struct SpectralBasis {
    Eigen::MatrixXcd psi;
    Eigen::VectorXd singular_values;  // POD variants only (empty otherwise)
    BasisKind kind = BasisKind::pod_y;

    Eigen::Index dim() const { return psi.rows(); }
    Eigen::Index modes() const { return psi.cols(); }
};

/// Left singular vectors of the output snapshot matrix, deterministic phase
/// fix per column. Emits a RankDeficient warning on stderr (and keeps the
/// basis) when sigma_K < 1e-12 sigma_1.
SpectralBasis build_pod_y(const Eigen::MatrixXcd& snapshots, Eigen::Index k_pod);

/// Joint input/output POD: blocks are scaled to unit Frobenius energy before
/// concatenation so neither dominates.
SpectralBasis build_pod_xy(const Eigen::MatrixXcd& inputs, const Eigen::MatrixXcd& outputs,
                           Eigen::Index k_pod);

/// Eigenvectors of the combinatorial graph Laplacian of the mesh node
/// adjacency, ascending eigenvalue order, embedded as complex.
SpectralBasis build_laplacian_basis(const Mesh& mesh, Eigen::Index k_pod);

Eigen::MatrixXcd project(const SpectralBasis& basis, const Eigen::MatrixXcd& z);
Eigen::MatrixXcd expand(const SpectralBasis& basis, const Eigen::MatrixXcd& coeffs);

}  // namespace den
