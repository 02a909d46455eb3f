#include "den/pod_basis.hpp"

#include "den/sparse.hpp"

#include <algorithm>
#include <iostream>

#include "den/errors.hpp"
#include "den/linalg.hpp"

namespace den {

const char* to_string(BasisKind k) {
    switch (k) {
        case BasisKind::pod_y: return "pod_y";
        case BasisKind::pod_xy: return "pod_xy";
        case BasisKind::laplacian: return "laplacian";
    }
    return "?";
}

BasisKind basis_kind_from_string(const std::string& s) {
    if (s == "pod_y") return BasisKind::pod_y;
    if (s == "pod_xy") return BasisKind::pod_xy;
    if (s == "laplacian") return BasisKind::laplacian;
    throw ValidationError("unknown basis kind: " + s);
}

namespace {

/// Thin left singular pairs via the Hermitian Gram eigenproblem on the
/// smaller side (method of snapshots). Deterministic for fixed input.
void pod_left_vectors(const Eigen::MatrixXcd& y, Eigen::Index k, Eigen::MatrixXcd& u,
                      Eigen::VectorXd& sigma) {
    const Eigen::Index n = y.rows(), s = y.cols();
    const Eigen::Index rank_cap = std::min(n, s);
    if (k < 1 || k > rank_cap) throw ValidationError("k_pod out of range for the snapshot matrix");
    if (n <= s) {
        Eigen::MatrixXcd gram = y * y.adjoint();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
        u.resize(n, k);
        sigma.resize(k);
        for (Eigen::Index j = 0; j < k; ++j) {
            const Eigen::Index src = n - 1 - j;  // ascending -> descending
            sigma(j) = std::sqrt(std::max(0.0, es.eigenvalues()(src)));
            u.col(j) = es.eigenvectors().col(src);
        }
    } else {
        Eigen::MatrixXcd gram = y.adjoint() * y;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
        u.resize(n, k);
        sigma.resize(k);
        for (Eigen::Index j = 0; j < k; ++j) {
            const Eigen::Index src = s - 1 - j;
            sigma(j) = std::sqrt(std::max(0.0, es.eigenvalues()(src)));
            if (sigma(j) > 0.0)
                u.col(j) = (y * es.eigenvectors().col(src)) / sigma(j);
            else
                u.col(j).setZero();
        }
    }
}

}  // namespace

SpectralBasis build_pod_y(const Eigen::MatrixXcd& snapshots, Eigen::Index k_pod) {
    SpectralBasis basis;
    basis.kind = BasisKind::pod_y;
    pod_left_vectors(snapshots, k_pod, basis.psi, basis.singular_values);
    if (basis.singular_values(k_pod - 1) < 1e-12 * basis.singular_values(0))
        std::cerr << "[den] warning: rank-deficient POD basis (sigma_" << k_pod << " < 1e-12 sigma_1)\n";
    phase_fix_columns(basis.psi);
    return basis;
}

SpectralBasis build_pod_xy(const Eigen::MatrixXcd& inputs, const Eigen::MatrixXcd& outputs,
                           Eigen::Index k_pod) {
    if (inputs.size() == 0) {
        SpectralBasis basis = build_pod_y(outputs, k_pod);
        basis.kind = BasisKind::pod_xy;
        return basis;
    }
    if (inputs.rows() != outputs.rows()) throw ShapeMismatch("input/output snapshot dimension mismatch");
    const double ex = inputs.norm();
    const double ey = outputs.norm();
    if (ex == 0.0 || ey == 0.0) throw ValidationError("zero-energy snapshot block");
    Eigen::MatrixXcd joint(inputs.rows(), inputs.cols() + outputs.cols());
    joint << inputs / ex, outputs / ey;
    SpectralBasis basis;
    basis.kind = BasisKind::pod_xy;
    pod_left_vectors(joint, k_pod, basis.psi, basis.singular_values);
    if (basis.singular_values(k_pod - 1) < 1e-12 * basis.singular_values(0))
        std::cerr << "[den] warning: rank-deficient POD basis (sigma_" << k_pod << " < 1e-12 sigma_1)\n";
    phase_fix_columns(basis.psi);
    return basis;
}

SpectralBasis build_laplacian_basis(const Mesh& mesh, Eigen::Index k_pod) {
    const Eigen::Index n = mesh.node_count();
    if (k_pod < 1 || k_pod > n) throw ValidationError("k_pod out of range for the mesh");
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (const auto& tri : mesh.triangles)
        for (int a = 0; a < 3; ++a) {
            const auto i = tri[static_cast<std::size_t>(a)], j = tri[static_cast<std::size_t>((a + 1) % 3)];
            if (lap(i, j) == 0.0) {
                lap(i, j) = -1.0;
                lap(j, i) = -1.0;
                lap(i, i) += 1.0;
                lap(j, j) += 1.0;
            }
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap);
    SpectralBasis basis;
    basis.kind = BasisKind::laplacian;
    basis.psi = es.eigenvectors().leftCols(k_pod).cast<Complex>();
    basis.singular_values.resize(0);
    phase_fix_columns(basis.psi);
    return basis;
}

Eigen::MatrixXcd project(const SpectralBasis& basis, const Eigen::MatrixXcd& z) {
    if (z.rows() != basis.psi.rows()) throw ShapeMismatch("project: row count does not match basis");
    return basis.psi.adjoint() * z;
}

Eigen::MatrixXcd expand(const SpectralBasis& basis, const Eigen::MatrixXcd& coeffs) {
    if (coeffs.rows() != basis.psi.cols()) throw ShapeMismatch("expand: row count does not match basis");
    return basis.psi * coeffs;
}

}  // namespace den
