#include "den/reference_solver.hpp"

#include <Eigen/SparseLU>

#include "den/errors.hpp"
#include "den/linalg.hpp"

namespace den {

namespace {

struct SchurParts {
    std::vector<std::int64_t> boundary;
    std::vector<std::int64_t> interior;
    Eigen::MatrixXcd schur;        // A_bb - A_bi A_ii^{-1} A_ib
    Eigen::MatrixXcd lift;         // -A_ii^{-1} A_ib (interior part per boundary column)
    Eigen::MatrixXd boundary_b;    // B_bb (real SPD)
};

SchurParts reduce_to_boundary(const AssembledSystem& sys) {
    const Mesh& mesh = *sys.mesh;
    SchurParts parts;
    parts.boundary = mesh.boundary_nodes;
    parts.interior = mesh.interior_nodes();
    const auto nb = static_cast<Eigen::Index>(parts.boundary.size());
    const auto ni = static_cast<Eigen::Index>(parts.interior.size());

    std::vector<std::int64_t> where(static_cast<std::size_t>(mesh.node_count()), -1);
    for (Eigen::Index i = 0; i < nb; ++i) where[static_cast<std::size_t>(parts.boundary[static_cast<std::size_t>(i)])] = i;
    for (Eigen::Index i = 0; i < ni; ++i) where[static_cast<std::size_t>(parts.interior[static_cast<std::size_t>(i)])] = nb + i;

    Eigen::MatrixXcd a_bb = Eigen::MatrixXcd::Zero(nb, nb);
    Eigen::MatrixXcd a_bi = Eigen::MatrixXcd::Zero(nb, ni);
    Eigen::MatrixXcd a_ib = Eigen::MatrixXcd::Zero(ni, nb);
    std::vector<Eigen::Triplet<Complex>> aii_t;
    const auto& a = sys.a;
    for (std::int64_t r = 0; r < a.rows(); ++r) {
        const std::int64_t pr = where[static_cast<std::size_t>(r)];
        for (std::int64_t k = a.rowptr()[static_cast<std::size_t>(r)]; k < a.rowptr()[static_cast<std::size_t>(r) + 1]; ++k) {
            const std::int64_t c = a.colidx()[static_cast<std::size_t>(k)];
            const Complex v = a.values()[static_cast<std::size_t>(k)];
            const std::int64_t pc = where[static_cast<std::size_t>(c)];
            if (pr < nb && pc < nb)
                a_bb(pr, pc) = v;
            else if (pr < nb)
                a_bi(pr, pc - nb) = v;
            else if (pc < nb)
                a_ib(pr - nb, pc) = v;
            else
                aii_t.emplace_back(static_cast<int>(pr - nb), static_cast<int>(pc - nb), v);
        }
    }
    parts.boundary_b.resize(nb, nb);
    parts.boundary_b.setZero();
    const auto& b = sys.b;
    for (std::int64_t r = 0; r < b.rows(); ++r) {
        const std::int64_t pr = where[static_cast<std::size_t>(r)];
        if (pr >= nb) continue;
        for (std::int64_t k = b.rowptr()[static_cast<std::size_t>(r)]; k < b.rowptr()[static_cast<std::size_t>(r) + 1]; ++k) {
            const std::int64_t pc = where[static_cast<std::size_t>(b.colidx()[static_cast<std::size_t>(k)])];
            if (pc < nb) parts.boundary_b(pr, pc) = b.values()[static_cast<std::size_t>(k)].real();
        }
    }

    if (ni > 0) {
        Eigen::SparseMatrix<Complex> a_ii(ni, ni);
        a_ii.setFromTriplets(aii_t.begin(), aii_t.end());
        a_ii.makeCompressed();
        Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu(a_ii);
        if (lu.info() != Eigen::Success)
            throw InteriorSingular("interior block factorization failed");
        parts.lift = -lu.solve(a_ib);
        if (lu.info() != Eigen::Success || !parts.lift.allFinite())
            throw InteriorSingular("interior solve produced non-finite values");
        parts.schur = a_bb + a_bi * parts.lift;
    } else {
        parts.lift.resize(0, nb);
        parts.schur = a_bb;
    }
    return parts;
}

}  // namespace

double residual_scale(const AssembledSystem& system, const std::complex<double>& lambda) {
    return 1e-8 * (system.a.norm_1() + std::abs(lambda) * system.b.norm_1());
}

SpectrumResult solve_steklov(const AssembledSystem& sys, std::int64_t count) {
    if (sys.mesh == nullptr) throw ValidationError("system has no mesh reference");
    const auto nb = static_cast<std::int64_t>(sys.mesh->boundary_nodes.size());
    if (count < 1 || count > nb)
        throw ValidationError("requested eigenpair count exceeds boundary dimension");

    SchurParts parts = reduce_to_boundary(sys);

    // B_bb is SPD; reduce via Cholesky to a standard complex eigenproblem.
    Eigen::LLT<Eigen::MatrixXd> llt(parts.boundary_b);
    if (llt.info() != Eigen::Success)
        throw SolverNoConverge("boundary mass Cholesky failed");
    const Eigen::MatrixXcd l = Eigen::MatrixXd(llt.matrixL()).cast<Complex>();
    Eigen::MatrixXcd c =
        l.triangularView<Eigen::Lower>().solve(parts.schur.transpose()).transpose();
    c = l.triangularView<Eigen::Lower>().solve(c);
    // c = L^{-1} A_s L^{-T}
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(c);
    if (es.info() != Eigen::Success) throw SolverNoConverge("dense complex eigensolver failed");

    const auto order = eig_sort_order(es.eigenvalues());
    const auto n = sys.mesh->node_count();
    SpectrumResult out;
    out.eigenvalues.resize(count);
    out.eigenvectors.resize(n, count);
    out.residuals.resize(count);
    for (std::int64_t j = 0; j < count; ++j) {
        const auto src = order[static_cast<std::size_t>(j)];
        out.eigenvalues(j) = es.eigenvalues()(src);
        Eigen::VectorXcd ub = l.transpose().triangularView<Eigen::Upper>().solve(
            Eigen::VectorXcd(es.eigenvectors().col(src)));
        Eigen::VectorXcd full = Eigen::VectorXcd::Zero(n);
        Eigen::VectorXcd ui = parts.lift * ub;
        for (std::size_t i = 0; i < parts.boundary.size(); ++i)
            full(parts.boundary[i]) = ub(static_cast<Eigen::Index>(i));
        for (std::size_t i = 0; i < parts.interior.size(); ++i)
            full(parts.interior[i]) = ui(static_cast<Eigen::Index>(i));
        full.normalize();
        out.eigenvectors.col(j) = full;
    }
    phase_fix_columns(out.eigenvectors);
    for (std::int64_t j = 0; j < count; ++j) {
        out.residuals(j) =
            (sys.a * Eigen::VectorXcd(out.eigenvectors.col(j)) -
             out.eigenvalues(j) * (sys.b * Eigen::VectorXcd(out.eigenvectors.col(j))))
                .norm();
    }
    return out;
}

SpectrumResult full_spectrum_boundary(const AssembledSystem& sys) {
    if (sys.mesh == nullptr) throw ValidationError("system has no mesh reference");
    return solve_steklov(sys, static_cast<std::int64_t>(sys.mesh->boundary_nodes.size()));
}

}  // namespace den
