#include "den/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "den/errors.hpp"
#include "den/rng.hpp"

namespace den {

SparseMatrix SparseMatrix::from_triplets(std::int64_t rows, std::int64_t cols, std::vector<Triplet> t,
                                         bool drop_zeros) {
    SparseMatrix m(rows, cols);
    std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    m.colidx_.reserve(t.size());
    m.values_.reserve(t.size());
    std::size_t i = 0;
    while (i < t.size()) {
        if (t[i].row < 0 || t[i].row >= rows || t[i].col < 0 || t[i].col >= cols)
            throw ShapeMismatch("triplet index out of range");
        Complex sum = t[i].value;
        std::size_t j = i + 1;
        while (j < t.size() && t[j].row == t[i].row && t[j].col == t[i].col) sum += t[j++].value;
        if (!drop_zeros || sum != Complex(0.0, 0.0)) {
            m.colidx_.push_back(t[i].col);
            m.values_.push_back(sum);
            m.rowptr_[static_cast<std::size_t>(t[i].row) + 1]++;
        }
        i = j;
    }
    for (std::size_t r = 0; r < static_cast<std::size_t>(rows); ++r) m.rowptr_[r + 1] += m.rowptr_[r];
    return m;
}

Complex SparseMatrix::coeff(std::int64_t r, std::int64_t c) const {
    for (std::int64_t k = rowptr_[static_cast<std::size_t>(r)]; k < rowptr_[static_cast<std::size_t>(r) + 1]; ++k)
        if (colidx_[static_cast<std::size_t>(k)] == c) return values_[static_cast<std::size_t>(k)];
    return {0.0, 0.0};
}

Eigen::VectorXcd SparseMatrix::operator*(const Eigen::VectorXcd& x) const {
    if (x.size() != cols_) throw ShapeMismatch("sparse matvec shape mismatch");
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(rows_);
    for (std::int64_t r = 0; r < rows_; ++r) {
        Complex acc(0.0, 0.0);
        for (std::int64_t k = rowptr_[static_cast<std::size_t>(r)]; k < rowptr_[static_cast<std::size_t>(r) + 1]; ++k)
            acc += values_[static_cast<std::size_t>(k)] * x(colidx_[static_cast<std::size_t>(k)]);
        y(r) = acc;
    }
    return y;
}

Eigen::MatrixXcd SparseMatrix::operator*(const Eigen::MatrixXcd& x) const {
    if (x.rows() != cols_) throw ShapeMismatch("sparse matmul shape mismatch");
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(rows_, x.cols());
    for (std::int64_t r = 0; r < rows_; ++r)
        for (std::int64_t k = rowptr_[static_cast<std::size_t>(r)]; k < rowptr_[static_cast<std::size_t>(r) + 1]; ++k)
            y.row(r) += values_[static_cast<std::size_t>(k)] * x.row(colidx_[static_cast<std::size_t>(k)]);
    return y;
}

Eigen::VectorXcd SparseMatrix::adjoint_multiply(const Eigen::VectorXcd& x) const {
    if (x.size() != rows_) throw ShapeMismatch("sparse adjoint matvec shape mismatch");
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(cols_);
    for (std::int64_t r = 0; r < rows_; ++r)
        for (std::int64_t k = rowptr_[static_cast<std::size_t>(r)]; k < rowptr_[static_cast<std::size_t>(r) + 1]; ++k)
            y(colidx_[static_cast<std::size_t>(k)]) += std::conj(values_[static_cast<std::size_t>(k)]) * x(r);
    return y;
}

SparseMatrix SparseMatrix::linear_combination(Complex alpha, Complex beta, const SparseMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw ShapeMismatch("linear_combination shape mismatch");
    std::vector<Triplet> t;
    t.reserve(values_.size() + other.values_.size());
    for (std::int64_t r = 0; r < rows_; ++r)
        for (std::int64_t k = rowptr_[static_cast<std::size_t>(r)]; k < rowptr_[static_cast<std::size_t>(r) + 1]; ++k)
            t.push_back({r, colidx_[static_cast<std::size_t>(k)], alpha * values_[static_cast<std::size_t>(k)]});
    for (std::int64_t r = 0; r < other.rows_; ++r)
        for (std::int64_t k = other.rowptr_[static_cast<std::size_t>(r)]; k < other.rowptr_[static_cast<std::size_t>(r) + 1]; ++k)
            t.push_back({r, other.colidx_[static_cast<std::size_t>(k)], beta * other.values_[static_cast<std::size_t>(k)]});
    // Union pattern is kept even where values cancel.
    return from_triplets(rows_, cols_, std::move(t), /*drop_zeros=*/false);
}

bool SparseMatrix::same_pattern(const SparseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && rowptr_ == other.rowptr_ &&
           colidx_ == other.colidx_;
}

double SparseMatrix::max_abs_symmetry_defect() const {
    double worst = 0.0;
    for (std::int64_t r = 0; r < rows_; ++r)
        for (std::int64_t k = rowptr_[static_cast<std::size_t>(r)]; k < rowptr_[static_cast<std::size_t>(r) + 1]; ++k)
            worst = std::max(worst,
                             std::abs(values_[static_cast<std::size_t>(k)] - coeff(colidx_[static_cast<std::size_t>(k)], r)));
    return worst;
}

double SparseMatrix::norm_1() const {
    std::vector<double> colsum(static_cast<std::size_t>(cols_), 0.0);
    for (std::int64_t r = 0; r < rows_; ++r)
        for (std::int64_t k = rowptr_[static_cast<std::size_t>(r)]; k < rowptr_[static_cast<std::size_t>(r) + 1]; ++k)
            colsum[static_cast<std::size_t>(colidx_[static_cast<std::size_t>(k)])] += std::abs(values_[static_cast<std::size_t>(k)]);
    double m = 0.0;
    for (double c : colsum) m = std::max(m, c);
    return m;
}

double SparseMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : values_) s += std::norm(v);
    return std::sqrt(s);
}

double SparseMatrix::spectral_norm(double rel_tol, int max_iter) const {
    if (values_.empty()) return 0.0;
    Pcg64Stream rng(0x5eed5eedULL);
    Eigen::VectorXcd v(cols_);
    for (std::int64_t i = 0; i < cols_; ++i) v(i) = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
    v.normalize();
    double sigma2 = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXcd w = adjoint_multiply((*this) * v);
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

Eigen::SparseMatrix<Complex> SparseMatrix::to_eigen() const {
    Eigen::SparseMatrix<Complex> m(rows_, cols_);
    std::vector<Eigen::Triplet<Complex>> t;
    t.reserve(values_.size());
    for (std::int64_t r = 0; r < rows_; ++r)
        for (std::int64_t k = rowptr_[static_cast<std::size_t>(r)]; k < rowptr_[static_cast<std::size_t>(r) + 1]; ++k)
            t.emplace_back(static_cast<int>(r), static_cast<int>(colidx_[static_cast<std::size_t>(k)]),
                           values_[static_cast<std::size_t>(k)]);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

Eigen::MatrixXcd SparseMatrix::to_dense() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows_, cols_);
    for (std::int64_t r = 0; r < rows_; ++r)
        for (std::int64_t k = rowptr_[static_cast<std::size_t>(r)]; k < rowptr_[static_cast<std::size_t>(r) + 1]; ++k)
            m(r, colidx_[static_cast<std::size_t>(k)]) = values_[static_cast<std::size_t>(k)];
    return m;
}

}  // namespace den
