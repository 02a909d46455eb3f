#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace den {

using Complex = std::complex<double>;

struct Triplet {
    std::int64_t row;
    std::int64_t col;
    Complex value;
};

/// Compressed-sparse-row matrix with complex values; the interchange format
/// for assembled FEM operators. Column indices are sorted within each row and
/// duplicate triplets are summed in (row, col) order at compression time, so
/// assembly results are bit-stable.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::int64_t rows, std::int64_t cols) : rows_(rows), cols_(cols), rowptr_(static_cast<std::size_t>(rows) + 1, 0) {}

    static SparseMatrix from_triplets(std::int64_t rows, std::int64_t cols, std::vector<Triplet> triplets,
                                      bool drop_zeros = true);

    std::int64_t rows() const { return rows_; }
    std::int64_t cols() const { return cols_; }
    std::int64_t nonzeros() const { return static_cast<std::int64_t>(values_.size()); }
    const std::vector<std::int64_t>& rowptr() const { return rowptr_; }
    const std::vector<std::int64_t>& colidx() const { return colidx_; }
    const std::vector<Complex>& values() const { return values_; }
    std::vector<Complex>& values() { return values_; }

    Complex coeff(std::int64_t r, std::int64_t c) const;

    Eigen::VectorXcd operator*(const Eigen::VectorXcd& x) const;
    Eigen::MatrixXcd operator*(const Eigen::MatrixXcd& x) const;
    /// Adjoint (conjugate-transpose) matvec.
    Eigen::VectorXcd adjoint_multiply(const Eigen::VectorXcd& x) const;

    /// alpha*this + beta*other on the union pattern (shapes must agree).
    SparseMatrix linear_combination(Complex alpha, Complex beta, const SparseMatrix& other) const;

    bool same_pattern(const SparseMatrix& other) const;
    double max_abs_symmetry_defect() const;  // max |a_ij - a_ji|

    /// Matrix 1-norm (max absolute column sum).
    double norm_1() const;
    double frobenius_norm() const;
    /// Largest singular value by power iteration on A^H A (relative
    /// tolerance; deterministic seeded start).
    double spectral_norm(double rel_tol = 1e-6, int max_iter = 5000) const;

    Eigen::SparseMatrix<Complex> to_eigen() const;
    Eigen::MatrixXcd to_dense() const;

private:
    std::int64_t rows_ = 0;
    std::int64_t cols_ = 0;
    std::vector<std::int64_t> rowptr_;
    std::vector<std::int64_t> colidx_;
    std::vector<Complex> values_;
};

}  // namespace den
