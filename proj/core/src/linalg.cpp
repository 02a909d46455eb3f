#include "den/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "den/errors.hpp"
#include "den/rng.hpp"

namespace den {

void phase_fix_columns(Eigen::MatrixXcd& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        Eigen::Index imax = 0;
        double amax = -1.0;
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            double a = std::abs(m(i, j));
            if (a > amax) {
                amax = a;
                imax = i;
            }
        }
        if (amax <= 0.0) continue;
        std::complex<double> phase = m(imax, j) / amax;
        m.col(j) *= std::conj(phase);
    }
}

Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& m, double diag_tol) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    Eigen::MatrixXcd r = qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        double a = std::abs(r(j, j));
        if (a < diag_tol) throw RankCollapse("QR diagonal collapsed at column " + std::to_string(j));
        q.col(j) *= r(j, j) / a;
    }
    return q;
}

double spectral_norm_dense(const Eigen::MatrixXcd& m, double rel_tol, int max_iter) {
    if (m.size() == 0) return 0.0;
    Pcg64Stream rng(0xd15e45eULL);
    Eigen::VectorXcd v(m.cols());
    for (Eigen::Index i = 0; i < m.cols(); ++i)
        v(i) = std::complex<double>(rng.uniform() - 0.5, rng.uniform() - 0.5);
    v.normalize();
    double sigma2 = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXcd w = m.adjoint() * (m * v);
        double next = w.norm();
        if (next == 0.0) return 0.0;
        v = w / next;
        if (it > 0 && std::abs(next - sigma2) <= rel_tol * next) {
            sigma2 = next;
            break;
        }
        sigma2 = next;
    }
    return std::sqrt(sigma2);
}

std::vector<double> principal_angle_sines(const Eigen::MatrixXcd& qa, const Eigen::MatrixXcd& qb) {
    Eigen::MatrixXcd g = qa.adjoint() * qb;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g);
    std::vector<double> sines;
    sines.reserve(static_cast<std::size_t>(svd.singularValues().size()));
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        double c = std::clamp(svd.singularValues()(i), 0.0, 1.0);
        sines.push_back(std::sqrt(std::max(0.0, 1.0 - c * c)));
    }
    std::sort(sines.rbegin(), sines.rend());
    return sines;
}

bool eig_less(const std::complex<double>& a, const std::complex<double>& b) {
    double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma < mb;
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

std::vector<Eigen::Index> eig_sort_order(const Eigen::VectorXcd& eigs) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(eigs.size()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return eig_less(eigs(i), eigs(j)); });
    return order;
}

PencilEig solve_dense_pencil(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double max_condition) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw ShapeMismatch("pencil matrices must be square and equal-sized");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= 0.0 || s(0) / s(s.size() - 1) > max_condition)
        throw ReducedPencilSingular("pencil B factor is numerically singular");
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(b);
    Eigen::MatrixXcd c = lu.solve(a);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(c);
    if (es.info() != Eigen::Success) throw SolverNoConverge("dense eigensolver failed to converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace den
