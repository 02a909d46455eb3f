#pragma once

#include "den/mesh.hpp"
#include "den/metrics.hpp"
#include "den/rayleigh_ritz.hpp"
#include "den/sparse.hpp"
#include "den/trainer.hpp"

namespace den {

/// Row-stochastic barycentric interpolation from a source to a destination
/// mesh (each row holds at most three weights summing to one).
struct TransferOperator {
    SparseMatrix t;  // M1 x M0, real weights
    const Mesh* src = nullptr;
    const Mesh* dst = nullptr;
};

TransferOperator build_interpolation(const Mesh& src, const Mesh& dst);

Eigen::VectorXcd transfer_values(const TransferOperator& op, const Eigen::VectorXcd& v);

/// Interpolate an orthonormal basis and re-orthonormalize by thin QR.
/// Throws RankCollapse when the interpolated columns become dependent.
Eigen::MatrixXcd transfer_subspace(const TransferOperator& op, const Eigen::MatrixXcd& q);

struct ZeroShotArm {
    std::vector<SubspaceMetrics> subspace;        // vs dst-truth subspace, per sample
    Eigen::MatrixXcd ritz_values;                 // samples x K
    std::vector<std::vector<EigenfunctionMetrics>> eigenfunction;  // per sample, per index
};

struct ZeroShotReport {
    ZeroShotArm predicted;   // transferred network prediction
    ZeroShotArm truth;       // transferred source ground-truth subspace
    Eigen::MatrixXcd dst_eigvals;   // samples x K (fine-mesh reference)
    Eigen::MatrixXcd src_eigvals;   // samples x K (coarse-mesh reference)
    std::vector<double> mae_predicted;  // per index, Ritz vs dst truth
    std::vector<double> mae_truth;      // per index, transferred-truth Ritz vs dst truth
    std::vector<double> mae_raw;        // per index, src truth vs dst truth
};

/// Two-arm zero-shot generalization study: predict on the source mesh,
/// transfer, Rayleigh-Ritz against the destination operator, compare with
/// the destination reference solve. `resample_fields` re-runs the random
/// field sampler on the destination mesh instead of interpolating nodal n.
ZeroShotReport zero_shot_eval(const Checkpoint& model, const Dataset& dataset, const Mesh& dst_mesh,
                              std::int64_t max_samples = -1, bool resample_fields = false,
                              int threads = 0);

}  // namespace den
