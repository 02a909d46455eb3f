#pragma once

#include <string>
#include <vector>

#include "den/mesh.hpp"
#include "den/random_field.hpp"
#include "den/reference_solver.hpp"

namespace den {

struct DatasetSample {
    std::int64_t sample_id = 0;
    Eigen::VectorXcd n;        // nodal refractive index
    Eigen::VectorXcd eigvals;  // first K reference eigenvalues
    Eigen::MatrixXcd eigvecs;  // N x K reference eigenvectors
    Eigen::MatrixXcd q_v;      // N x k_V orthonormal target
};

struct Dataset {
    Mesh mesh;
    FieldSpec field_spec;
    double k_squared = 1.0;
    std::int64_t k = 12;    // stored eigenpairs per sample
    std::int64_t k_v = 12;  // target subspace dimension
    std::int64_t train_count = 0;
    std::vector<DatasetSample> samples;  // train split first

    std::int64_t test_count() const { return static_cast<std::int64_t>(samples.size()) - train_count; }
};

/// Generate fields, solve the reference eigenproblem, and freeze orthonormal
/// targets. Samples whose solve fails are skipped with a log line. The split
/// is deterministic: the first floor(train_fraction * S) surviving samples
/// train.
Dataset build_dataset(const Mesh& mesh, const FieldSpec& field_spec, std::int64_t sample_count,
                      std::int64_t k, double k_squared, double train_fraction, std::int64_t k_v,
                      int threads = 0);

void save_dataset(const std::string& path, const Dataset& ds);
Dataset load_dataset(const std::string& path);

}  // namespace den
