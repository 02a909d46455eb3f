#pragma once

#include <vector>

#include <Eigen/Dense>

#include "den/fem.hpp"
#include "den/reference_solver.hpp"

namespace den {

/// Circular integration contour with an even trapezoidal node count.
struct ContourSpec {
    std::complex<double> center{0.0, 0.0};
    double radius = 1.0;
    int quadrature_nodes = 64;

    void validate() const;
    double circumference() const;
    std::complex<double> node(int j) const;
};

/// Assumption report for one sample against a fixed contour: delta is the
/// gap from the contour to the excluded reference spectrum, r_gamma the
/// resolvent sup over the quadrature nodes of the reference system, m_norm
/// the perturbation norm ||k^2 (M_n - M_nbar)||_2.
struct ResolventReport {
    double r_gamma = 0.0;
    double delta = 0.0;
    double m_norm = 0.0;
    bool assumption1_ok = false;  // delta > 0
    bool assumption2_ok = false;  // r_gamma finite
    bool assumption3_ok = false;  // m_norm * r_gamma < 1
};

struct RieszProjection {
    Eigen::MatrixXcd p;  // dense N x N
    ContourSpec contour;
    Eigen::Index numeric_rank = 0;  // singular values > 0.5
};

/// Circle through the margin midpoint between the first K eigenvalues and the
/// rest; the reference spectrum must be ordered by the global convention.
/// Throws ClusterNotSeparable when no separating circle exists.
ContourSpec design_contour(const SpectrumResult& reference_spectrum, Eigen::Index k,
                           int quadrature_nodes = 64);

/// ||(Bz - A)^{-1}||_2 by power iteration on the factored solve operator and
/// its adjoint. Throws SingularResolvent when the factorization fails.
double resolvent_norm(const AssembledSystem& system, const std::complex<double>& z,
                      double rel_tol = 1e-6);

/// Trapezoidal quadrature of (1 / 2 pi i) contour-integral of (Bz-A)^{-1} B dz.
RieszProjection riesz_projection(const AssembledSystem& system, const ContourSpec& contour);

/// ||P^2 - P||_2 of a computed projection (reported, never assumed).
double idempotency_defect(const RieszProjection& proj);

/// Per-sample assumption reports; the reference quantities (delta, r_gamma)
/// are computed once from the mean-field system.
std::vector<ResolventReport> verify_assumptions(const ContourSpec& contour,
                                                const AssembledSystem& system_mean,
                                                const std::vector<ParameterField>& sample_fields);

struct StabilityCheck {
    double lhs = 0.0;                // ||P_1 - P_2||_2
    double first_order_bound = 0.0;  // (|Gamma| / 2 pi) R^2_{Gamma,1} ||dM|| ||B||
    double lipschitz_ratio = 0.0;    // lhs / ||n_1 - n_2||_inf
    double r_gamma_1 = 0.0;
    double delta_m_norm = 0.0;
    double slack = 0.0;              // 3 R_{Gamma,1} ||dM||
    bool within_bound = false;       // lhs <= bound * (1 + slack)
};

StabilityCheck projection_stability_check(const AssembledSystem& system1,
                                          const AssembledSystem& system2, const ContourSpec& contour);

/// max over true eigenvalues of the distance to the nearest approximation.
double spectral_variation(const Eigen::VectorXcd& true_eigs, const Eigen::VectorXcd& approx_eigs);

struct PencilConditioning {
    Eigen::VectorXd nu;
    double nu_max = 0.0;
};

/// Eigenvalue condition numbers nu_i = ||x_i|| ||y_i|| / sqrt(|L_ii|^2 + |W_ii|^2)
/// of a diagonalizable dense pencil. Throws NotDiagonalizable when the
/// eigenvector matrix is numerically singular.
PencilConditioning pencil_condition_numbers(const Eigen::MatrixXcd& a_r, const Eigen::MatrixXcd& b_r,
                                            double max_condition = 1e12);

/// 2 sqrt(2) nu_max sin(theta) sqrt(||A||_2^2 + ||B||_2^2).
double ritz_error_bound(const AssembledSystem& system, double nu_max, double sin_theta);
double ritz_error_bound_norms(double a_norm, double b_norm, double nu_max, double sin_theta);

struct DiagApproxError {
    double eps_diag = 0.0;          // Frobenius norm of the off-diagonal part
    Eigen::VectorXcd best_diag;     // the diagonal itself
};

DiagApproxError diag_vs_full_error(const Eigen::MatrixXcd& a_psi);

}  // namespace den
