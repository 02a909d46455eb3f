#include "den/random_field.hpp"

#include <cmath>
#include <numbers>

#include "den/errors.hpp"

namespace den {

void FieldSpec::validate() const {
    if (mode_min > mode_max) throw ValidationError("field spec: mode_min must be <= mode_max");
    if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("field spec: beta must lie in (0,1)");
    if (real_lo > real_hi || imag_lo > imag_hi)
        throw ValidationError("field spec: range lower bounds must be <= upper bounds");
    if (weight_exponent_sign != 1 && weight_exponent_sign != -1)
        throw ValidationError("field spec: weight_exponent_sign must be +1 or -1");
}

Eigen::VectorXd sample_raw_field(const FieldSpec& spec, const Eigen::MatrixXd& coords, RandomStream& rng) {
    spec.validate();
    const Eigen::Index n = coords.rows();
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (int j = spec.mode_min; j <= spec.mode_max; ++j) {
        double a, b;
        rng.normal_pair(a, b);
        const double theta = two_pi * rng.uniform();
        const double phi = two_pi * rng.uniform();
        const double alpha = two_pi * rng.uniform();
        const double w = std::pow(spec.beta, spec.weight_exponent_sign * j);
        const double f = static_cast<double>(j);
        const double ca = std::cos(alpha), sa = std::sin(alpha);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double x = coords(i, 0), y = coords(i, 1);
            const double u = (x * ca + y * sa) / 2.0;
            const double v = (x * sa + y * ca) / 2.0;
            g(i) += w * (a * std::sin(two_pi * f * u + theta) + b * std::sin(two_pi * f * v + phi));
        }
    }
    return g;
}

Eigen::VectorXd normalize_to_range(const Eigen::VectorXd& field, double lo, double hi) {
    if (lo > hi) throw ValidationError("normalize_to_range: lo must be <= hi");
    if (field.size() == 0) return field;
    const double mn = field.minCoeff();
    const double mx = field.maxCoeff();
    if (mx == mn) return Eigen::VectorXd::Constant(field.size(), 0.5 * (lo + hi));
    return ((field.array() - mn) / (mx - mn) * (hi - lo) + lo).matrix();
}

ParameterField sample_parameter_field(const FieldSpec& spec, const Mesh& mesh, std::int64_t sample_id) {
    spec.validate();
    Pcg64Stream rng_re(mix_seed(spec.seed, static_cast<std::uint64_t>(sample_id), 0));
    Pcg64Stream rng_im(mix_seed(spec.seed, static_cast<std::uint64_t>(sample_id), 1));
    Eigen::VectorXd gr = normalize_to_range(sample_raw_field(spec, mesh.nodes, rng_re), spec.real_lo, spec.real_hi);
    Eigen::VectorXd gi = normalize_to_range(sample_raw_field(spec, mesh.nodes, rng_im), spec.imag_lo, spec.imag_hi);
    ParameterField f;
    f.values = gr + std::complex<double>(0.0, 1.0) * gi;
    f.spec = spec;
    f.sample_id = sample_id;
    return f;
}

Eigen::VectorXcd mean_field(const std::vector<ParameterField>& fields) {
    if (fields.empty()) throw ValidationError("mean_field: empty sample list");
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(fields.front().values.size());
    for (const auto& f : fields) {
        if (f.values.size() != acc.size()) throw ShapeMismatch("mean_field: inconsistent sizes");
        acc += f.values;
    }
    return acc / static_cast<double>(fields.size());
}

}  // namespace den
