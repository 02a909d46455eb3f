#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "den/linalg.hpp"
#include "den/rng.hpp"

namespace den::test {

/// Bessel J_m by its power series; the independent oracle for the disk
/// Steklov spectrum. Converges fast for the |x| <= 2 arguments used here.
inline double bessel_j(int m, double x) {
    double term = 1.0;
    for (int i = 1; i <= m; ++i) term *= (x / 2.0) / static_cast<double>(i);
    double sum = term;
    const double q = (x / 2.0) * (x / 2.0);
    for (int s = 1; s < 64; ++s) {
        term *= -q / (static_cast<double>(s) * static_cast<double>(s + m));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

inline double bessel_j_prime(int m, double x) {
    if (m == 0) return -bessel_j(1, x);
    return bessel_j(m - 1, x) - static_cast<double>(m) / x * bessel_j(m, x);
}

/// Analytic disk Steklov eigenvalues lambda_m = -k J'_m(k) / J_m(k),
/// multiplicity two for m >= 1, sorted by the modulus convention.
inline std::vector<double> disk_steklov_eigenvalues(double k, int count) {
    std::vector<double> all;
    for (int m = 0; m <= count; ++m) {
        const double lam = -k * bessel_j_prime(m, k) / bessel_j(m, k);
        all.push_back(lam);
        if (m > 0) all.push_back(lam);
    }
    std::sort(all.begin(), all.end(), [](double a, double b) {
        return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
    });
    all.resize(static_cast<std::size_t>(count));
    return all;
}

inline Eigen::MatrixXcd random_complex(Pcg64Stream& rng, Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            m(i, j) = {2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
    return m;
}

inline Eigen::MatrixXcd random_orthonormal(Pcg64Stream& rng, Eigen::Index rows, Eigen::Index cols) {
    return orthonormalize(random_complex(rng, rows, cols));
}

/// Scratch directory for serialization tests.
class TempDir {
public:
    TempDir() {
        base_ = std::filesystem::temp_directory_path() /
                ("den_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::create_directories(base_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(base_, ec);
    }
    std::string path(const std::string& name) const { return (base_ / name).string(); }

private:
    std::filesystem::path base_;
};

inline std::string read_file_bytes(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) return {};
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof(buf), f)) > 0) out.append(buf, got);
    std::fclose(f);
    return out;
}

}  // namespace den::test
