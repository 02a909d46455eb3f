#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace den {

struct EigenvalueMetrics {
    double mae = 0.0;
    std::optional<double> r_squared;  // empty when the truth variance degenerates
    double mape_percent = 0.0;
};

/// Per-index eigenvalue metrics across samples; both sides must already be
/// sorted by the global (|lambda|, Re, Im) convention. truth/predictions are
/// samples x indices.
std::vector<EigenvalueMetrics> eigenvalue_metrics(const Eigen::MatrixXcd& truth,
                                                  const Eigen::MatrixXcd& predictions);

struct SubspaceMetrics {
    double l1 = 0.0;    // k_V - ||Q_V^H Q_U||_F^2
    double d_pr = 0.0;  // ||P_U - P_V||_2
    double d_ch = 0.0;  // ||P_U - P_V||_F / sqrt(2)
};

/// Distances between orthonormal bases. Equal dimensions use principal
/// angles of the cross-Gram; unequal dimensions fall back to the dense
/// projector difference for d_pr.
SubspaceMetrics subspace_metrics(const Eigen::MatrixXcd& q_u, const Eigen::MatrixXcd& q_v);

struct EigenfunctionMetrics {
    double max_ae = 0.0;
    double cosine_similarity = 0.0;  // reported 0 when the projection vanishes
    double rel_l1 = 0.0;
};

/// Projection-based eigenfunction fidelity of a unit-norm truth vector
/// against span(Q_U).
EigenfunctionMetrics eigenfunction_metrics(const Eigen::VectorXcd& u_truth, const Eigen::MatrixXcd& q_u);

}  // namespace den
