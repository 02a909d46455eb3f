#include "den/dataset.hpp"

#include <iostream>
#include <set>
#include <optional>

#include "den/container.hpp"
#include "den/errors.hpp"
#include "den/fem.hpp"
#include "den/linalg.hpp"
#include "den/threading.hpp"

namespace den {

Dataset build_dataset(const Mesh& mesh, const FieldSpec& field_spec, std::int64_t sample_count,
                      std::int64_t k, double k_squared, double train_fraction, std::int64_t k_v,
                      int threads) {
    if (sample_count < 1) throw ValidationError("sample_count must be >= 1");
    if (k_v < 1 || k_v > k) throw ValidationError("k_v must lie in [1, K]");
    if (train_fraction < 0.0 || train_fraction > 1.0)
        throw ValidationError("train_fraction must lie in [0, 1]");
    field_spec.validate();

    std::vector<std::optional<DatasetSample>> slots(static_cast<std::size_t>(sample_count));
    std::vector<std::string> failures(static_cast<std::size_t>(sample_count));
    parallel_for(sample_count, threads, [&](std::int64_t i) {
        try {
            ParameterField field = sample_parameter_field(field_spec, mesh, i);
            AssembledSystem sys = build_system(mesh, field, k_squared);
            SpectrumResult spec = solve_steklov(sys, k);
            DatasetSample s;
            s.sample_id = i;
            s.n = field.values;
            s.eigvals = spec.eigenvalues;
            s.eigvecs = spec.eigenvectors;
            s.q_v = orthonormalize(spec.eigenvectors.leftCols(k_v));
            slots[static_cast<std::size_t>(i)] = std::move(s);
        } catch (const NumericalError& e) {
            failures[static_cast<std::size_t>(i)] = e.what();
        }
    });

    Dataset ds;
    ds.mesh = mesh;
    ds.field_spec = field_spec;
    ds.k_squared = k_squared;
    ds.k = k;
    ds.k_v = k_v;
    for (std::int64_t i = 0; i < sample_count; ++i) {
        if (slots[static_cast<std::size_t>(i)].has_value()) {
            ds.samples.push_back(std::move(*slots[static_cast<std::size_t>(i)]));
        } else {
            std::cerr << "[den] sample " << i << " skipped: " << failures[static_cast<std::size_t>(i)]
                      << "\n";
        }
    }
    ds.train_count = static_cast<std::int64_t>(train_fraction * static_cast<double>(ds.samples.size()));
    return ds;
}

void save_dataset(const std::string& path, const Dataset& ds) {
    Container c;
    c.put_f64("nodes", ds.mesh.nodes);
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> tris(ds.mesh.triangle_count(), 3);
    for (std::int64_t t = 0; t < ds.mesh.triangle_count(); ++t)
        for (int j = 0; j < 3; ++j) tris(t, j) = ds.mesh.triangles[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)];
    c.put_i64("triangles", tris);
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> edges(
        static_cast<std::int64_t>(ds.mesh.boundary_edges.size()), 2);
    for (std::size_t e = 0; e < ds.mesh.boundary_edges.size(); ++e) {
        edges(static_cast<std::int64_t>(e), 0) = ds.mesh.boundary_edges[e][0];
        edges(static_cast<std::int64_t>(e), 1) = ds.mesh.boundary_edges[e][1];
    }
    c.put_i64("boundary_edges", edges);

    c.put_scalar_f64("k_squared", ds.k_squared);
    c.put_scalar_i64("K", ds.k);
    c.put_scalar_i64("k_V", ds.k_v);
    c.put_scalar_i64("train_count", ds.train_count);
    c.put_scalar_i64("sample_count", static_cast<std::int64_t>(ds.samples.size()));
    c.put_scalar_i64("field.mode_min", ds.field_spec.mode_min);
    c.put_scalar_i64("field.mode_max", ds.field_spec.mode_max);
    c.put_scalar_f64("field.beta", ds.field_spec.beta);
    c.put_scalar_f64("field.real_lo", ds.field_spec.real_lo);
    c.put_scalar_f64("field.real_hi", ds.field_spec.real_hi);
    c.put_scalar_f64("field.imag_lo", ds.field_spec.imag_lo);
    c.put_scalar_f64("field.imag_hi", ds.field_spec.imag_hi);
    c.put_scalar_i64("field.seed", static_cast<std::int64_t>(ds.field_spec.seed));
    c.put_scalar_i64("field.weight_exponent_sign", ds.field_spec.weight_exponent_sign);

    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        const auto& s = ds.samples[i];
        const std::string p = "sample" + std::to_string(i) + ".";
        c.put_scalar_i64(p + "id", s.sample_id);
        c.put_c128(p + "n", s.n);
        c.put_c128(p + "eigvals", s.eigvals);
        c.put_c128(p + "eigvecs", s.eigvecs);
        c.put_c128(p + "Q_V", s.q_v);
    }
    write_container(path, c);
}

Dataset load_dataset(const std::string& path) {
    Container c = read_container(path);
    Dataset ds;
    ds.mesh.nodes = c.get_f64("nodes");
    auto tris = c.get_i64("triangles");
    ds.mesh.triangles.resize(static_cast<std::size_t>(tris.rows()));
    for (std::int64_t t = 0; t < tris.rows(); ++t)
        ds.mesh.triangles[static_cast<std::size_t>(t)] = {tris(t, 0), tris(t, 1), tris(t, 2)};
    auto edges = c.get_i64("boundary_edges");
    ds.mesh.boundary_edges.resize(static_cast<std::size_t>(edges.rows()));
    std::set<std::int64_t> bset;
    for (std::int64_t e = 0; e < edges.rows(); ++e) {
        ds.mesh.boundary_edges[static_cast<std::size_t>(e)] = {edges(e, 0), edges(e, 1)};
        bset.insert(edges(e, 0));
        bset.insert(edges(e, 1));
    }
    ds.mesh.boundary_nodes.assign(bset.begin(), bset.end());
    validate_mesh(ds.mesh);

    ds.k_squared = c.get_scalar_f64("k_squared");
    ds.k = c.get_scalar_i64("K");
    ds.k_v = c.get_scalar_i64("k_V");
    ds.train_count = c.get_scalar_i64("train_count");
    ds.field_spec.mode_min = static_cast<int>(c.get_scalar_i64("field.mode_min"));
    ds.field_spec.mode_max = static_cast<int>(c.get_scalar_i64("field.mode_max"));
    ds.field_spec.beta = c.get_scalar_f64("field.beta");
    ds.field_spec.real_lo = c.get_scalar_f64("field.real_lo");
    ds.field_spec.real_hi = c.get_scalar_f64("field.real_hi");
    ds.field_spec.imag_lo = c.get_scalar_f64("field.imag_lo");
    ds.field_spec.imag_hi = c.get_scalar_f64("field.imag_hi");
    ds.field_spec.seed = static_cast<std::uint64_t>(c.get_scalar_i64("field.seed"));
    ds.field_spec.weight_exponent_sign = static_cast<int>(c.get_scalar_i64("field.weight_exponent_sign"));

    const std::int64_t count = c.get_scalar_i64("sample_count");
    ds.samples.resize(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        const std::string p = "sample" + std::to_string(i) + ".";
        auto& s = ds.samples[static_cast<std::size_t>(i)];
        s.sample_id = c.get_scalar_i64(p + "id");
        s.n = c.get_c128(p + "n");
        s.eigvals = c.get_c128(p + "eigvals");
        s.eigvecs = c.get_c128(p + "eigvecs");
        s.q_v = c.get_c128(p + "Q_V");
    }
    return ds;
}

}  // namespace den
