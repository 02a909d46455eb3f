#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "den/mesh.hpp"
#include "den/rng.hpp"

namespace den {

/// Parameters of the sinusoidal random-field family. `weight_exponent_sign`
/// selects between the decaying per-mode weight beta^j (+1, default) and the
/// literal growing variant beta^{-j} (-1).
struct FieldSpec {
    int mode_min = 1;
    int mode_max = 8;
    double beta = 0.5;
    double real_lo = 1.0, real_hi = 5.0;
    double imag_lo = 1.0, imag_hi = 5.0;
    std::uint64_t seed = 0;
    int weight_exponent_sign = +1;

    void validate() const;
};

/// Complex nodal refractive-index sample n(x).
struct ParameterField {
    Eigen::VectorXcd values;
    FieldSpec spec;
    std::int64_t sample_id = 0;
};

/// Superposition of randomly rotated sinusoidal modes evaluated at the given
/// coordinates; draw order per mode is (a_j, b_j, theta_j, phi_j, alpha_j).
Eigen::VectorXd sample_raw_field(const FieldSpec& spec, const Eigen::MatrixXd& node_coords,
                                 RandomStream& rng);

/// Affine map sending min -> lo and max -> hi; constant fields map to the
/// midpoint.
Eigen::VectorXd normalize_to_range(const Eigen::VectorXd& field, double lo, double hi);

/// Full complex sample: independently seeded streams for the real and
/// imaginary components, each range-normalized.
ParameterField sample_parameter_field(const FieldSpec& spec, const Mesh& mesh, std::int64_t sample_id);

/// Arithmetic mean of nodal values across samples (the reference field for
/// contour design).
Eigen::VectorXcd mean_field(const std::vector<ParameterField>& fields);

}  // namespace den
