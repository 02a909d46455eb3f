#include "den/interp.hpp"

#include "den/errors.hpp"
#include "den/fem.hpp"
#include "den/linalg.hpp"
#include "den/threading.hpp"

namespace den {

TransferOperator build_interpolation(const Mesh& src, const Mesh& dst) {
    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(dst.node_count()) * 3);
    for (std::int64_t i = 0; i < dst.node_count(); ++i) {
        const PointLocation loc = locate_point(src, dst.nodes.row(i));
        const auto& tri = src.triangles[static_cast<std::size_t>(loc.triangle)];
        for (int k = 0; k < 3; ++k)
            if (loc.barycentric[static_cast<std::size_t>(k)] != 0.0)
                trip.push_back({i, tri[static_cast<std::size_t>(k)],
                                Complex(loc.barycentric[static_cast<std::size_t>(k)], 0.0)});
    }
    TransferOperator op;
    op.t = SparseMatrix::from_triplets(dst.node_count(), src.node_count(), std::move(trip));
    op.src = &src;
    op.dst = &dst;
    return op;
}

Eigen::VectorXcd transfer_values(const TransferOperator& op, const Eigen::VectorXcd& v) {
    return op.t * v;
}

Eigen::MatrixXcd transfer_subspace(const TransferOperator& op, const Eigen::MatrixXcd& q) {
    Eigen::MatrixXcd moved = op.t * q;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(moved);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= 0.0 || s(0) / s(s.size() - 1) > 1e10)
        throw RankCollapse("interpolated subspace columns became dependent");
    return orthonormalize(moved);
}

ZeroShotReport zero_shot_eval(const Checkpoint& model, const Dataset& dataset, const Mesh& dst_mesh,
                              std::int64_t max_samples, bool resample_fields, int threads) {
    const std::int64_t avail = dataset.test_count();
    if (avail < 1) throw ValidationError("zero_shot_eval: dataset has no test samples");
    const std::int64_t count = max_samples > 0 ? std::min(max_samples, avail) : avail;
    const std::int64_t k = dataset.k;

    TransferOperator op = build_interpolation(dataset.mesh, dst_mesh);

    ZeroShotReport rep;
    rep.predicted.subspace.resize(static_cast<std::size_t>(count));
    rep.truth.subspace.resize(static_cast<std::size_t>(count));
    rep.predicted.ritz_values.resize(count, k);
    rep.truth.ritz_values.resize(count, k);
    rep.predicted.eigenfunction.resize(static_cast<std::size_t>(count));
    rep.truth.eigenfunction.resize(static_cast<std::size_t>(count));
    rep.dst_eigvals.resize(count, k);
    rep.src_eigvals.resize(count, k);

    parallel_for(count, threads, [&](std::int64_t i) {
        const auto& s = dataset.samples[static_cast<std::size_t>(dataset.train_count + i)];
        // Destination-side field: interpolated nodal n (or re-sampled).
        Eigen::VectorXcd n_dst;
        if (resample_fields) {
            n_dst = sample_parameter_field(dataset.field_spec, dst_mesh, s.sample_id).values;
        } else {
            n_dst = transfer_values(op, s.n);
        }
        AssembledSystem dst_sys = build_system(dst_mesh, n_dst, dataset.k_squared);
        SpectrumResult dst_ref = solve_steklov(dst_sys, k);
        rep.dst_eigvals.row(i) = dst_ref.eigenvalues.transpose();
        rep.src_eigvals.row(i) = s.eigvals.transpose();
        Eigen::MatrixXcd q_dst_true = orthonormalize(dst_ref.eigenvectors.leftCols(dataset.k_v));

        auto run_arm = [&](const Eigen::MatrixXcd& src_basis, ZeroShotArm& arm) {
            Eigen::MatrixXcd q_moved = transfer_subspace(op, src_basis);
            arm.subspace[static_cast<std::size_t>(i)] = subspace_metrics(q_moved, q_dst_true);
            RitzResult ritz = reconstruct_eigenpairs(q_moved, dst_sys, k);
            arm.ritz_values.row(i) = ritz.ritz_values.transpose();
            auto& ef = arm.eigenfunction[static_cast<std::size_t>(i)];
            ef.resize(static_cast<std::size_t>(k));
            for (std::int64_t j = 0; j < k; ++j) {
                Eigen::VectorXcd u = dst_ref.eigenvectors.col(j);
                ef[static_cast<std::size_t>(j)] = eigenfunction_metrics(u, q_moved);
            }
        };

        ForwardResult fr = forward(model.params, model.basis, model.stats,
                                   input_channels(s.n, dataset.mesh.nodes));
        run_arm(fr.q_u, rep.predicted);
        run_arm(s.q_v, rep.truth);
    });

    auto mae_of = [&](const Eigen::MatrixXcd& approx) {
        std::vector<double> mae(static_cast<std::size_t>(k), 0.0);
        for (std::int64_t j = 0; j < k; ++j) {
            double acc = 0.0;
            for (std::int64_t i = 0; i < count; ++i) acc += std::abs(rep.dst_eigvals(i, j) - approx(i, j));
            mae[static_cast<std::size_t>(j)] = acc / static_cast<double>(count);
        }
        return mae;
    };
    rep.mae_predicted = mae_of(rep.predicted.ritz_values);
    rep.mae_truth = mae_of(rep.truth.ritz_values);
    rep.mae_raw = mae_of(rep.src_eigvals);
    return rep;
}

}  // namespace den
