#include "den/metrics.hpp"

#include <cmath>

#include "den/errors.hpp"
#include "den/linalg.hpp"

namespace den {

std::vector<EigenvalueMetrics> eigenvalue_metrics(const Eigen::MatrixXcd& truth,
                                                  const Eigen::MatrixXcd& predictions) {
    if (truth.rows() != predictions.rows() || truth.cols() != predictions.cols())
        throw ShapeMismatch("eigenvalue_metrics: shape mismatch");
    const Eigen::Index samples = truth.rows(), k = truth.cols();
    if (samples == 0) throw ValidationError("eigenvalue_metrics: empty input");
    std::vector<EigenvalueMetrics> out(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < k; ++j) {
        double mae = 0.0, mape = 0.0, ss_res = 0.0, ss_tot = 0.0;
        const std::complex<double> mean = truth.col(j).mean();
        for (Eigen::Index i = 0; i < samples; ++i) {
            const double err = std::abs(truth(i, j) - predictions(i, j));
            mae += err;
            mape += err / std::abs(truth(i, j));
            ss_res += err * err;
            ss_tot += std::norm(truth(i, j) - mean);
        }
        auto& m = out[static_cast<std::size_t>(j)];
        m.mae = mae / static_cast<double>(samples);
        m.mape_percent = 100.0 * mape / static_cast<double>(samples);
        if (ss_tot > 0.0)
            m.r_squared = 1.0 - ss_res / ss_tot;
        else
            m.r_squared = std::nullopt;  // degenerate variance: undefined
    }
    return out;
}

SubspaceMetrics subspace_metrics(const Eigen::MatrixXcd& q_u, const Eigen::MatrixXcd& q_v) {
    if (q_u.rows() != q_v.rows()) throw ShapeMismatch("subspace_metrics: ambient dimension mismatch");
    const Eigen::Index k_u = q_u.cols(), k_v = q_v.cols();
    SubspaceMetrics m;
    const double cross = (q_v.adjoint() * q_u).squaredNorm();
    m.l1 = static_cast<double>(k_v) - cross;
    // ||P_U - P_V||_F^2 = k_U + k_V - 2 tr(P_U P_V)
    m.d_ch = std::sqrt(std::max(0.0, 0.5 * (static_cast<double>(k_u + k_v) - 2.0 * cross)));
    if (k_u == k_v) {
        auto sines = principal_angle_sines(q_v, q_u);
        m.d_pr = sines.empty() ? 0.0 : sines.front();
    } else {
        Eigen::MatrixXcd diff = q_u * q_u.adjoint() - q_v * q_v.adjoint();
        m.d_pr = spectral_norm_dense(diff);
    }
    return m;
}

EigenfunctionMetrics eigenfunction_metrics(const Eigen::VectorXcd& u, const Eigen::MatrixXcd& q_u) {
    if (u.size() != q_u.rows()) throw ShapeMismatch("eigenfunction_metrics: dimension mismatch");
    const Eigen::VectorXcd p = q_u * (q_u.adjoint() * u);
    EigenfunctionMetrics m;
    m.max_ae = (u - p).cwiseAbs().maxCoeff();
    const double pn = p.norm(), un = u.norm();
    m.cosine_similarity = (pn < 1e-14) ? 0.0 : std::abs(u.dot(p)) / (un * pn);
    m.rel_l1 = (u - p).cwiseAbs().sum() / u.cwiseAbs().sum();
    return m;
}

}  // namespace den
