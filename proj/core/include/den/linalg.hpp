#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace den {

/// Multiply each column by a unit phase so its largest-modulus entry becomes
/// real positive (lowest index wins ties). Columns with zero norm are left
/// untouched.
void phase_fix_columns(Eigen::MatrixXcd& m);

/// Thin QR with the R diagonal rotated real positive; returns Q. Throws
/// RankCollapse when a diagonal modulus falls below `diag_tol`.
Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& m, double diag_tol = 1e-12);

/// Largest singular value by power iteration (deterministic seeded start).
double spectral_norm_dense(const Eigen::MatrixXcd& m, double rel_tol = 1e-8, int max_iter = 10000);

/// sin(theta_j) of the principal angles between equal- or mixed-dimension
/// orthonormal bases, descending; computed from the singular values of
/// Qa^H Qb clamped into [0, 1].
std::vector<double> principal_angle_sines(const Eigen::MatrixXcd& qa, const Eigen::MatrixXcd& qb);

/// Ascending (|lambda|, Re, Im) ordering used everywhere a spectrum is
/// reported.
bool eig_less(const std::complex<double>& a, const std::complex<double>& b);
std::vector<Eigen::Index> eig_sort_order(const Eigen::VectorXcd& eigs);

struct PencilEig {
    Eigen::VectorXcd values;       // unsorted, as produced
    Eigen::MatrixXcd right;        // columns x_i with A x = lambda B x
};

/// Dense generalized eigenproblem A x = lambda B x via B^{-1} A. Throws
/// ReducedPencilSingular when B is numerically singular (condition estimate
/// above `max_condition`).
PencilEig solve_dense_pencil(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                             double max_condition = 1e12);

}  // namespace den
