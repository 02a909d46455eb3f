#include "den/spectral_analysis.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/SparseLU>

#include "den/errors.hpp"
#include "den/linalg.hpp"
#include "den/rng.hpp"

namespace den {

void ContourSpec::validate() const {
    if (!(radius > 0.0)) throw ValidationError("contour radius must be positive");
    if (quadrature_nodes < 8 || quadrature_nodes % 2 != 0)
        throw ValidationError("quadrature_nodes must be even and >= 8");
}

double ContourSpec::circumference() const { return 2.0 * std::numbers::pi * radius; }

std::complex<double> ContourSpec::node(int j) const {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(quadrature_nodes);
    return center + radius * std::complex<double>(std::cos(th), std::sin(th));
}

ContourSpec design_contour(const SpectrumResult& spectrum, Eigen::Index k, int quadrature_nodes) {
    const Eigen::Index total = spectrum.eigenvalues.size();
    if (k < 1 || k >= total)
        throw ValidationError("design_contour needs 1 <= K < spectrum size");
    std::complex<double> center(0.0, 0.0);
    for (Eigen::Index j = 0; j < k; ++j) center += spectrum.eigenvalues(j);
    center /= static_cast<double>(k);
    double max_in = 0.0;
    for (Eigen::Index j = 0; j < k; ++j)
        max_in = std::max(max_in, std::abs(spectrum.eigenvalues(j) - center));
    double min_out = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = k; j < total; ++j)
        min_out = std::min(min_out, std::abs(spectrum.eigenvalues(j) - center));
    if (max_in >= min_out)
        throw ClusterNotSeparable("no circle separates the first " + std::to_string(k) +
                                  " eigenvalues from the rest");
    ContourSpec c;
    c.center = center;
    c.radius = 0.5 * (max_in + min_out);
    c.quadrature_nodes = quadrature_nodes;
    c.validate();
    return c;
}

namespace {

using SpLU = Eigen::SparseLU<Eigen::SparseMatrix<Complex>>;

Eigen::SparseMatrix<Complex> shifted_pencil(const AssembledSystem& sys, const std::complex<double>& z) {
    // Bz - A on the union pattern.
    SparseMatrix m = sys.b.linear_combination(z, Complex(-1.0, 0.0), sys.a);
    return m.to_eigen();
}

double resolvent_norm_factored(const SpLU& lu, const SpLU& lu_adj, Eigen::Index n, double rel_tol) {
    Pcg64Stream rng(0x7e50171eULL);
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
    v.normalize();
    double sigma2 = 0.0;
    for (int it = 0; it < 2000; ++it) {
        Eigen::VectorXcd w = lu_adj.solve(Eigen::VectorXcd(lu.solve(v)));
        if (!w.allFinite()) throw SingularResolvent("resolvent solve produced non-finite values");
        const double next = w.norm();
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

}  // namespace

double resolvent_norm(const AssembledSystem& sys, const std::complex<double>& z, double rel_tol) {
    Eigen::SparseMatrix<Complex> t = shifted_pencil(sys, z);
    SpLU lu(t);
    if (lu.info() != Eigen::Success) throw SingularResolvent("factorization of Bz - A failed");
    Eigen::SparseMatrix<Complex> ta = t.adjoint();
    SpLU lu_adj(ta);
    if (lu_adj.info() != Eigen::Success) throw SingularResolvent("factorization of (Bz - A)^H failed");
    return resolvent_norm_factored(lu, lu_adj, t.rows(), rel_tol);
}

RieszProjection riesz_projection(const AssembledSystem& sys, const ContourSpec& contour) {
    contour.validate();
    const Eigen::Index n = sys.a.rows();
    const auto& bnodes = sys.mesh->boundary_nodes;
    const auto nb = static_cast<Eigen::Index>(bnodes.size());

    // B has nonzero columns only at boundary nodes, so P does too; integrate
    // the compressed N x nb block.
    Eigen::MatrixXcd b_cols(n, nb);
    for (Eigen::Index j = 0; j < nb; ++j) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
        e(bnodes[static_cast<std::size_t>(j)]) = 1.0;
        b_cols.col(j) = sys.b * e;
    }

    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, nb);
    for (int q = 0; q < contour.quadrature_nodes; ++q) {
        const std::complex<double> z = contour.node(q);
        Eigen::SparseMatrix<Complex> t = shifted_pencil(sys, z);
        SpLU lu(t);
        if (lu.info() != Eigen::Success)
            throw SingularResolvent("factorization of Bz - A failed on the contour");
        Eigen::MatrixXcd x = lu.solve(b_cols);
        if (!x.allFinite()) throw SingularResolvent("resolvent solve produced non-finite values");
        const double th =
            2.0 * std::numbers::pi * static_cast<double>(q) / static_cast<double>(contour.quadrature_nodes);
        acc += std::complex<double>(std::cos(th), std::sin(th)) * x;
    }
    acc *= contour.radius / static_cast<double>(contour.quadrature_nodes);

    RieszProjection out;
    out.contour = contour;
    out.p = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index j = 0; j < nb; ++j) out.p.col(bnodes[static_cast<std::size_t>(j)]) = acc.col(j);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(acc);
    out.numeric_rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 0.5) ++out.numeric_rank;
    return out;
}

double idempotency_defect(const RieszProjection& proj) {
    return spectral_norm_dense(proj.p * proj.p - proj.p);
}

namespace {

double contour_gap_to_excluded(const ContourSpec& contour, const SpectrumResult& full) {
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < full.eigenvalues.size(); ++j) {
        const double d = std::abs(full.eigenvalues(j) - contour.center);
        if (d > contour.radius) gap = std::min(gap, d - contour.radius);
    }
    return gap;
}

double sup_resolvent_on_contour(const AssembledSystem& sys, const ContourSpec& contour, double rel_tol = 1e-6) {
    double sup = 0.0;
    for (int q = 0; q < contour.quadrature_nodes; ++q)
        sup = std::max(sup, resolvent_norm(sys, contour.node(q), rel_tol));
    return sup;
}

}  // namespace

std::vector<ResolventReport> verify_assumptions(const ContourSpec& contour,
                                                const AssembledSystem& system_mean,
                                                const std::vector<ParameterField>& sample_fields) {
    contour.validate();
    SpectrumResult full = full_spectrum_boundary(system_mean);
    const double delta = contour_gap_to_excluded(contour, full);
    const double r_gamma = sup_resolvent_on_contour(system_mean, contour);

    std::vector<ResolventReport> reports;
    reports.reserve(sample_fields.size());
    for (const auto& field : sample_fields) {
        SparseMatrix m_s = assemble_mass_weighted(*system_mean.mesh, field.values);
        SparseMatrix dm = m_s.linear_combination(Complex(system_mean.k_squared, 0.0),
                                                 Complex(-system_mean.k_squared, 0.0),
                                                 system_mean.mass_weighted);
        ResolventReport r;
        r.r_gamma = r_gamma;
        r.delta = delta;
        r.m_norm = dm.spectral_norm();
        r.assumption1_ok = r.delta > 0.0;
        r.assumption2_ok = std::isfinite(r.r_gamma);
        r.assumption3_ok = r.m_norm * r.r_gamma < 1.0;
        reports.push_back(r);
    }
    return reports;
}

StabilityCheck projection_stability_check(const AssembledSystem& system1, const AssembledSystem& system2,
                                          const ContourSpec& contour) {
    if (system1.mesh != system2.mesh) throw ValidationError("stability check requires a shared mesh");
    StabilityCheck out;
    out.r_gamma_1 = sup_resolvent_on_contour(system1, contour);
    SparseMatrix dm = system2.mass_weighted.linear_combination(Complex(system1.k_squared, 0.0),
                                                               Complex(-system1.k_squared, 0.0),
                                                               system1.mass_weighted);
    out.delta_m_norm = dm.spectral_norm();

    RieszProjection p1 = riesz_projection(system1, contour);
    RieszProjection p2 = riesz_projection(system2, contour);
    const auto& bnodes = system1.mesh->boundary_nodes;
    Eigen::MatrixXcd diff(p1.p.rows(), static_cast<Eigen::Index>(bnodes.size()));
    for (std::size_t j = 0; j < bnodes.size(); ++j)
        diff.col(static_cast<Eigen::Index>(j)) = p1.p.col(bnodes[j]) - p2.p.col(bnodes[j]);
    out.lhs = spectral_norm_dense(diff);

    const double b_norm = system1.b.spectral_norm();
    out.first_order_bound =
        (contour.circumference() / (2.0 * std::numbers::pi)) * out.r_gamma_1 * out.r_gamma_1 *
        out.delta_m_norm * b_norm;
    out.slack = 3.0 * out.r_gamma_1 * out.delta_m_norm;
    const double dn_inf = (system1.n_values - system2.n_values).cwiseAbs().maxCoeff();
    out.lipschitz_ratio = dn_inf > 0.0 ? out.lhs / dn_inf : 0.0;
    out.within_bound = out.lhs <= out.first_order_bound * (1.0 + out.slack);
    return out;
}

double spectral_variation(const Eigen::VectorXcd& true_eigs, const Eigen::VectorXcd& approx_eigs) {
    if (true_eigs.size() == 0 || approx_eigs.size() == 0)
        throw ValidationError("spectral_variation: empty spectra");
    double worst = 0.0;
    for (Eigen::Index i = 0; i < true_eigs.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < approx_eigs.size(); ++j)
            best = std::min(best, std::abs(approx_eigs(j) - true_eigs(i)));
        worst = std::max(worst, best);
    }
    return worst;
}

PencilConditioning pencil_condition_numbers(const Eigen::MatrixXcd& a_r, const Eigen::MatrixXcd& b_r,
                                            double max_condition) {
    PencilEig eig = solve_dense_pencil(a_r, b_r, max_condition);
    const Eigen::Index k = a_r.rows();
    // With C = B^{-1} A = X Lambda X^{-1}, the rows of X^{-1} B^{-1} are the
    // (conjugated) left eigenvectors normalized so Y^H A X = Lambda and
    // Y^H B X = I.
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(eig.right);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= 0.0 || s(0) / s(s.size() - 1) > max_condition)
        throw NotDiagonalizable("pencil eigenvector matrix is numerically singular");
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_x(eig.right);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_b(b_r);
    Eigen::MatrixXcd yh = lu_x.solve(lu_b.solve(Eigen::MatrixXcd::Identity(k, k)).eval());
    const auto order = eig_sort_order(eig.values);
    PencilConditioning out;
    out.nu.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto src = order[static_cast<std::size_t>(i)];
        const double xn = eig.right.col(src).norm();
        const double yn = yh.row(src).norm();
        const double denom = std::sqrt(std::norm(eig.values(src)) + 1.0);
        out.nu(i) = xn * yn / denom;
    }
    out.nu_max = out.nu.maxCoeff();
    return out;
}

double ritz_error_bound_norms(double a_norm, double b_norm, double nu_max, double sin_theta) {
    if (sin_theta < 0.0 || sin_theta > 1.0) throw ValidationError("sin_theta must lie in [0,1]");
    return 2.0 * std::sqrt(2.0) * nu_max * sin_theta * std::sqrt(a_norm * a_norm + b_norm * b_norm);
}

double ritz_error_bound(const AssembledSystem& system, double nu_max, double sin_theta) {
    return ritz_error_bound_norms(system.a.spectral_norm(), system.b.spectral_norm(), nu_max, sin_theta);
}

DiagApproxError diag_vs_full_error(const Eigen::MatrixXcd& a_psi) {
    if (a_psi.rows() != a_psi.cols()) throw ShapeMismatch("diag_vs_full_error expects a square matrix");
    DiagApproxError out;
    out.best_diag = a_psi.diagonal();
    Eigen::MatrixXcd off = a_psi;
    off.diagonal().setZero();
    out.eps_diag = off.norm();
    return out;
}

}  // namespace den
