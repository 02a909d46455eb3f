#include <doctest.h>

#include <cmath>
#include <numbers>

#include "den/random_field.hpp"
#include "support/test_helpers.hpp"

using namespace den;

TEST_SUITE_BEGIN("random_field");

namespace {

/// Stub stream with scripted draws; normal pairs come back as (a, b) from the
/// script too.
class ScriptedStream final : public RandomStream {
public:
    explicit ScriptedStream(std::vector<double> script) : script_(std::move(script)) {}
    double uniform() override {
        REQUIRE(pos_ < script_.size());
        return script_[pos_++];
    }
    void normal_pair(double& z0, double& z1) override {
        z0 = uniform();
        z1 = uniform();
    }

private:
    std::vector<double> script_;
    std::size_t pos_ = 0;
};

}  // namespace

TEST_CASE("degenerate draws give the zero field") {
    FieldSpec spec;
    spec.mode_min = 1;
    spec.mode_max = 3;
    // Per mode: a, b, theta, phi, alpha -- all zeros.
    ScriptedStream rng(std::vector<double>(15, 0.0));
    Mesh m = generate_unit_square_mesh(3);
    Eigen::VectorXd g = sample_raw_field(spec, m.nodes, rng);
    CHECK(g.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single mode hand evaluation") {
    // j = 1, alpha = 0, theta = pi/2, a = 1, b = 0, beta = 0.5:
    // u = x/2, so the term is 0.5 * sin(pi x + pi/2) = 0.5 cos(pi x).
    FieldSpec spec;
    spec.mode_min = 1;
    spec.mode_max = 1;
    spec.beta = 0.5;
    const double theta_unit = 0.25;  // theta = 2 pi * 0.25 = pi/2
    ScriptedStream rng({1.0, 0.0, theta_unit, 0.0, 0.0});
    Mesh m = generate_unit_square_mesh(8);
    Eigen::VectorXd g = sample_raw_field(spec, m.nodes, rng);
    for (Eigen::Index i = 0; i < m.node_count(); ++i) {
        const double expect = 0.5 * std::cos(std::numbers::pi * m.nodes(i, 0));
        REQUIRE(g(i) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("literal weight variant grows with mode index") {
    FieldSpec spec;
    spec.mode_min = 2;
    spec.mode_max = 2;
    spec.beta = 0.5;
    spec.weight_exponent_sign = -1;  // beta^{-j} = 4 at j = 2
    ScriptedStream rng({1.0, 0.0, 0.25, 0.0, 0.0});
    Mesh m = generate_unit_square_mesh(4);
    Eigen::VectorXd g = sample_raw_field(spec, m.nodes, rng);
    // Amplitude 4 instead of 1/4.
    CHECK(g.cwiseAbs().maxCoeff() == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("normalize_to_range") {
    Eigen::VectorXd a(2);
    a << 0.0, 1.0;
    Eigen::VectorXd r = normalize_to_range(a, 1.0, 5.0);
    CHECK(r(0) == 1.0);
    CHECK(r(1) == 5.0);

    Eigen::VectorXd c = Eigen::VectorXd::Constant(3, 2.0);
    Eigen::VectorXd rc = normalize_to_range(c, 1.0, 5.0);
    for (int i = 0; i < 3; ++i) CHECK(rc(i) == 3.0);

    Eigen::VectorXd lin(3);
    lin << -1.0, 0.0, 1.0;
    Eigen::VectorXd rl = normalize_to_range(lin, 0.0, 2.0);
    CHECK(rl(0) == 0.0);
    CHECK(rl(1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rl(2) == 2.0);
}

TEST_CASE("parameter field ranges, determinism, distinctness") {
    Mesh m = generate_unit_square_mesh(10);
    FieldSpec spec;
    spec.seed = 99;
    ParameterField f = sample_parameter_field(spec, m, 7);
    for (Eigen::Index i = 0; i < f.values.size(); ++i) {
        REQUIRE(f.values(i).real() >= 1.0 - 1e-12);
        REQUIRE(f.values(i).real() <= 5.0 + 1e-12);
        REQUIRE(f.values(i).imag() >= 1.0 - 1e-12);
        REQUIRE(f.values(i).imag() <= 5.0 + 1e-12);
    }
    ParameterField f2 = sample_parameter_field(spec, m, 7);
    CHECK((f.values - f2.values).cwiseAbs().maxCoeff() == 0.0);

    // Distinct samples differ, pairwise over a small corpus.
    std::vector<ParameterField> corpus;
    for (int s = 0; s < 12; ++s) corpus.push_back(sample_parameter_field(spec, m, s));
    for (std::size_t a2 = 0; a2 < corpus.size(); ++a2)
        for (std::size_t b = a2 + 1; b < corpus.size(); ++b)
            CHECK((corpus[a2].values - corpus[b].values).cwiseAbs().maxCoeff() > 1e-8);
}

TEST_CASE("per-mode energy decays with the default weight") {
    Mesh m = generate_unit_square_mesh(12);
    // Mean RMS of single-mode fields over many seeds, then a log-linear fit.
    std::vector<double> log_rms;
    for (int j = 1; j <= 6; ++j) {
        double acc = 0.0;
        for (int s = 0; s < 100; ++s) {
            FieldSpec spec;
            spec.mode_min = j;
            spec.mode_max = j;
            spec.seed = 1234;
            Pcg64Stream rng(mix_seed(spec.seed, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(j)));
            Eigen::VectorXd g = sample_raw_field(spec, m.nodes, rng);
            acc += std::sqrt(g.squaredNorm() / static_cast<double>(g.size()));
        }
        log_rms.push_back(std::log(acc / 100.0));
    }
    // Least-squares slope of log RMS vs mode index must be negative.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(log_rms.size());
    for (std::size_t i = 0; i < log_rms.size(); ++i) {
        const double x = static_cast<double>(i + 1);
        sx += x;
        sy += log_rms[i];
        sxx += x * x;
        sxy += x * log_rms[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope < -0.3);
}

TEST_SUITE_END();
