#include "den/rayleigh_ritz.hpp"

#include "den/errors.hpp"
#include "den/linalg.hpp"

namespace den {

ReducedPencil reduce(const Eigen::MatrixXcd& q_u, const AssembledSystem& system) {
    if (q_u.rows() != system.a.rows()) throw ShapeMismatch("reduce: basis rows do not match the system");
    ReducedPencil out;
    out.a_hat = q_u.adjoint() * (system.a * q_u);
    out.b_hat = q_u.adjoint() * (system.b * q_u);
    return out;
}

RitzResult solve_reduced(const Eigen::MatrixXcd& a_hat, const Eigen::MatrixXcd& b_hat) {
    PencilEig eig = solve_dense_pencil(a_hat, b_hat);
    const auto order = eig_sort_order(eig.values);
    RitzResult out;
    const Eigen::Index k = a_hat.rows();
    out.ritz_values.resize(k);
    out.reduced_vectors.resize(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        out.ritz_values(j) = eig.values(order[static_cast<std::size_t>(j)]);
        out.reduced_vectors.col(j) = eig.right.col(order[static_cast<std::size_t>(j)]);
    }
    out.selected_count = k;
    return out;
}

RitzResult reconstruct_eigenpairs(const Eigen::MatrixXcd& q_u, const AssembledSystem& system,
                                  Eigen::Index k) {
    if (k < 1 || k > q_u.cols()) throw ValidationError("reconstruct_eigenpairs: K must lie in [1, k_U]");
    ReducedPencil red = reduce(q_u, system);
    RitzResult all = solve_reduced(red.a_hat, red.b_hat);
    RitzResult out;
    out.selected_count = k;
    out.ritz_values = all.ritz_values.head(k);
    out.reduced_vectors = all.reduced_vectors.leftCols(k);
    out.lifted_vectors = q_u * out.reduced_vectors;
    for (Eigen::Index j = 0; j < k; ++j) out.lifted_vectors.col(j).normalize();
    phase_fix_columns(out.lifted_vectors);
    return out;
}

}  // namespace den
