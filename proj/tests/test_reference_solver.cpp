#include <doctest.h>

#include "den/fem.hpp"
#include "den/reference_solver.hpp"
#include "support/test_helpers.hpp"

using namespace den;

TEST_SUITE_BEGIN("reference_solver");

TEST_CASE("bessel oracle matches literature values") {
    // Abramowitz & Stegun table values.
    CHECK(test::bessel_j(0, 1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-14));
    CHECK(test::bessel_j(1, 1.0) == doctest::Approx(0.4400505857449335).epsilon(1e-14));
    CHECK(test::bessel_j(2, 1.0) == doctest::Approx(0.1149034849319005).epsilon(1e-14));
    CHECK(test::bessel_j(0, 2.0) == doctest::Approx(0.2238907791412357).epsilon(1e-13));
    CHECK(test::bessel_j_prime(0, 1.0) == doctest::Approx(-0.4400505857449335).epsilon(1e-14));

    auto lam = test::disk_steklov_eigenvalues(1.0, 5);
    CHECK(lam[0] == doctest::Approx(0.57508).epsilon(2e-4));
    CHECK(lam[1] == doctest::Approx(-0.7389).epsilon(2e-3));
    CHECK(lam[2] == doctest::Approx(-0.7389).epsilon(2e-3));
    CHECK(lam[3] == doctest::Approx(-1.8297).epsilon(2e-3));
    CHECK(lam[4] == doctest::Approx(-1.8297).epsilon(2e-3));
}

TEST_CASE("disk spectrum converges to the Bessel oracle") {
    auto exact = test::disk_steklov_eigenvalues(1.0, 5);
    double prev_err = 1e9;
    for (double target : {0.2, 0.1}) {
        Mesh m = generate_unit_disk_mesh(target);
        Eigen::VectorXcd ones = Eigen::VectorXcd::Constant(m.node_count(), 1.0);
        AssembledSystem sys = build_system(m, ones, 1.0);
        SpectrumResult spec = solve_steklov(sys, 5);
        double err = 0.0;
        for (int j = 0; j < 5; ++j)
            err = std::max(err, std::abs(spec.eigenvalues(j) - exact[static_cast<std::size_t>(j)]));
        CHECK(err < prev_err);  // refinement decreases the worst error
        prev_err = err;
        // Residual contract per pair.
        for (int j = 0; j < 5; ++j)
            REQUIRE(spec.residuals(j) <= residual_scale(sys, spec.eigenvalues(j)));
    }
    CHECK(prev_err < 0.05);
}

TEST_CASE("square symmetry produces modulus-degenerate clusters") {
    Mesh m = generate_unit_square_mesh(14);
    Eigen::VectorXcd n = Eigen::VectorXcd::Constant(m.node_count(), Complex(3.0, 0.0));
    AssembledSystem sys = build_system(m, n, 1.0);
    SpectrumResult spec = solve_steklov(sys, 12);
    auto rel_gap = [&](int i, int j) {
        return std::abs(std::abs(spec.eigenvalues(i)) - std::abs(spec.eigenvalues(j))) /
               std::abs(spec.eigenvalues(j));
    };
    CHECK(rel_gap(0, 1) < 1e-8);   // {1,2}
    CHECK(rel_gap(4, 5) < 1e-8);   // inside {5,6,7,8}
    CHECK(rel_gap(6, 7) < 1e-8);
    CHECK(rel_gap(4, 7) < 0.05);   // the 4-cluster is tight
    CHECK(rel_gap(3, 4) > 0.05);   // clusters are separated
}

TEST_CASE("full spectrum consistency and prefix property") {
    Mesh m = generate_unit_square_mesh(6);
    FieldSpec fs;
    fs.seed = 17;
    ParameterField f = sample_parameter_field(fs, m, 0);
    AssembledSystem sys = build_system(m, f, 1.0);
    SpectrumResult full = full_spectrum_boundary(sys);
    CHECK(full.eigenvalues.size() == static_cast<Eigen::Index>(m.boundary_nodes.size()));
    SpectrumResult head = solve_steklov(sys, 6);
    for (int j = 0; j < 6; ++j)
        CHECK(std::abs(full.eigenvalues(j) - head.eigenvalues(j)) < 1e-10);
}

TEST_CASE("selfadjoint case has a real spectrum") {
    Mesh m = generate_unit_square_mesh(8);
    Eigen::VectorXcd n = Eigen::VectorXcd::Constant(m.node_count(), Complex(2.0, 0.0));
    AssembledSystem sys = build_system(m, n, 1.0);
    SpectrumResult spec = full_spectrum_boundary(sys);
    CHECK(spec.eigenvalues.imag().cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("normalization is invariant to eigenvector rescaling") {
    Mesh m = generate_unit_square_mesh(7);
    FieldSpec fs;
    fs.seed = 23;
    ParameterField f = sample_parameter_field(fs, m, 1);
    AssembledSystem sys = build_system(m, f, 1.0);
    SpectrumResult spec = solve_steklov(sys, 4);
    Pcg64Stream rng(2);
    for (int j = 0; j < 4; ++j) {
        Eigen::VectorXcd u = spec.eigenvectors.col(j);
        const Complex scale(3.0 * rng.uniform() - 1.5, 3.0 * rng.uniform() - 1.5);
        Eigen::MatrixXcd scaled = (scale * u).eval();
        scaled.col(0).normalize();
        phase_fix_columns(scaled);
        CHECK((scaled.col(0) - u).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("shift consistency") {
    Mesh m = generate_unit_square_mesh(6);
    FieldSpec fs;
    fs.seed = 29;
    ParameterField f = sample_parameter_field(fs, m, 2);
    AssembledSystem sys = build_system(m, f, 1.0);
    SpectrumResult base = solve_steklov(sys, 8);

    const double sigma = 0.73;
    AssembledSystem shifted = sys;
    shifted.a = sys.a.linear_combination(1.0, sigma, sys.b);
    SpectrumResult moved = solve_steklov(shifted, 8);
    // Compare as sets: shifting can reorder the modulus sort.
    for (int j = 0; j < 8; ++j) {
        double best = 1e18;
        for (int i = 0; i < 8; ++i)
            best = std::min(best, std::abs(moved.eigenvalues(i) - (base.eigenvalues(j) + sigma)));
        REQUIRE(best < 1e-8);
    }
}

TEST_CASE("validation errors") {
    Mesh m = generate_unit_square_mesh(3);
    Eigen::VectorXcd n = Eigen::VectorXcd::Constant(m.node_count(), 1.0);
    AssembledSystem sys = build_system(m, n, 1.0);
    CHECK_THROWS_AS(solve_steklov(sys, 1000), ValidationError);
}

TEST_SUITE_END();
