#include <doctest.h>

#include "den/fem.hpp"
#include "den/errors.hpp"
#include "support/test_helpers.hpp"

using namespace den;

TEST_SUITE_BEGIN("fem");

TEST_CASE("stiffness kernel, diagonal, and exact quadratic form") {
    Mesh m = generate_unit_square_mesh(6);
    SparseMatrix s = assemble_stiffness(m);
    CHECK(s.max_abs_symmetry_defect() < 1e-14);

    Eigen::VectorXcd ones = Eigen::VectorXcd::Constant(m.node_count(), 1.0);
    CHECK((s * ones).cwiseAbs().maxCoeff() < 1e-12);

    Mesh m1 = generate_unit_square_mesh(1);
    SparseMatrix s1 = assemble_stiffness(m1);
    for (std::int64_t i = 0; i < m1.node_count(); ++i) CHECK(s1.coeff(i, i).real() > 0.0);

    // u = x: integral of |grad u|^2 over the unit square is 1, exactly for P1.
    Eigen::VectorXcd ux = m.nodes.col(0).cast<Complex>();
    const Complex q = ux.dot(s * ux);  // dot conjugates the first factor
    CHECK(q.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(q.imag()) < 1e-14);
}

TEST_CASE("weighted mass: patch test, homogeneity, linearity") {
    Mesh m = generate_unit_square_mesh(5);
    const std::int64_t n = m.node_count();
    Eigen::VectorXcd ones = Eigen::VectorXcd::Constant(n, 1.0);
    SparseMatrix m1 = assemble_mass_weighted(m, ones);

    double total = 0.0;
    for (const auto& v : m1.values()) total += v.real();
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // Constant weight scales the unit mass.
    SparseMatrix mc = assemble_mass_weighted(m, Eigen::VectorXcd::Constant(n, Complex(2.0, -0.5)));
    CHECK(mc.same_pattern(m1));
    for (std::size_t k = 0; k < mc.values().size(); ++k)
        CHECK(std::abs(mc.values()[k] - Complex(2.0, -0.5) * m1.values()[k]) < 1e-14);

    // Additivity in the weight (the assembly map is linear).
    Pcg64Stream rng(5);
    Eigen::VectorXcd na = test::random_complex(rng, n, 1);
    Eigen::VectorXcd nb = test::random_complex(rng, n, 1);
    SparseMatrix ma = assemble_mass_weighted(m, na);
    SparseMatrix mb = assemble_mass_weighted(m, nb);
    SparseMatrix mab = assemble_mass_weighted(m, na + nb);
    SparseMatrix sum = ma.linear_combination(1.0, 1.0, mb);
    for (std::int64_t r = 0; r < n; ++r)
        for (std::int64_t c = 0; c < n; ++c)
            REQUIRE(std::abs(mab.coeff(r, c) - sum.coeff(r, c)) < 1e-14);

    // Quadrature identity: 1^T M_n 1 equals the midpoint-rule integral of n.
    Eigen::VectorXcd quad_sum = m1 * na;
    Complex lhs = ones.transpose() * (assemble_mass_weighted(m, na) * ones);
    Complex rhs = 0.0;
    for (std::int64_t t = 0; t < m.triangle_count(); ++t) {
        const auto& tri = m.triangles[static_cast<std::size_t>(t)];
        const Complex mid = (0.5 * (na(tri[0]) + na(tri[1])) + 0.5 * (na(tri[1]) + na(tri[2])) +
                             0.5 * (na(tri[2]) + na(tri[0]))) /
                            3.0;
        rhs += mid * m.triangle_area(t);
    }
    CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("boundary mass") {
    Mesh m = generate_unit_square_mesh(4);
    SparseMatrix b = assemble_boundary_mass(m);
    double total = 0.0;
    for (const auto& v : b.values()) total += v.real();
    CHECK(total == doctest::Approx(4.0).epsilon(1e-12));

    // Interior rows vanish.
    for (auto i : m.interior_nodes())
        CHECK(b.rowptr()[static_cast<std::size_t>(i) + 1] == b.rowptr()[static_cast<std::size_t>(i)]);

    // A single unit edge contributes row sums (1/2, 1/2).
    Mesh tiny = generate_unit_square_mesh(1);
    SparseMatrix bt = assemble_boundary_mass(tiny);
    // Each boundary node of the unit square with n=1 touches two unit edges.
    Eigen::VectorXcd ones = Eigen::VectorXcd::Constant(tiny.node_count(), 1.0);
    Eigen::VectorXcd rowsum = bt * ones;
    for (auto bn : tiny.boundary_nodes) CHECK(rowsum(bn).real() == doctest::Approx(1.0));
}

TEST_CASE("build_system invariants and Lipschitz assembly") {
    Mesh m = generate_unit_square_mesh(6);
    const std::int64_t n = m.node_count();
    Pcg64Stream rng(11);

    FieldSpec spec;
    spec.seed = 3;
    ParameterField f = sample_parameter_field(spec, m, 0);
    AssembledSystem sys = build_system(m, f, 1.0);

    SUBCASE("definitions") {
        // A = -S + k^2 M_n entrywise.
        SparseMatrix expect = sys.stiffness.linear_combination(-1.0, 1.0, sys.mass_weighted);
        for (std::int64_t r = 0; r < n; ++r)
            for (std::int64_t c = 0; c < n; ++c)
                REQUIRE(std::abs(sys.a.coeff(r, c) - expect.coeff(r, c)) < 1e-14);
        CHECK(sys.mass_weighted.max_abs_symmetry_defect() < 1e-14);

        AssembledSystem sys_q = build_system(m, f, 0.25);
        SparseMatrix diff = sys_q.a.linear_combination(1.0, -1.0, sys.a);
        SparseMatrix mass_scaled = sys.mass_weighted.linear_combination(-0.75, 0.0, sys.mass_weighted);
        for (std::int64_t r = 0; r < n; ++r)
            for (std::int64_t c = 0; c < n; ++c)
                REQUIRE(std::abs(diff.coeff(r, c) - mass_scaled.coeff(r, c)) < 1e-14);
    }

    SUBCASE("pattern of A is the union pattern") {
        CHECK(sys.a.same_pattern(sys.stiffness.linear_combination(1.0, 1.0, sys.mass_weighted)));
        // B touches boundary nodes only.
        for (auto i : m.interior_nodes())
            CHECK(sys.b.rowptr()[static_cast<std::size_t>(i) + 1] ==
                  sys.b.rowptr()[static_cast<std::size_t>(i)]);
    }

    SUBCASE("Lipschitz constant from brute force") {
        // C_mesh: max spectral norm of M_e over unit-sup-norm weights,
        // estimated by random probing.
        double c_mesh = 0.0;
        for (int trial = 0; trial < 40; ++trial) {
            Eigen::VectorXcd e = test::random_complex(rng, n, 1);
            e /= e.cwiseAbs().maxCoeff();
            c_mesh = std::max(c_mesh, assemble_mass_weighted(m, e).spectral_norm());
        }
        const double k2 = 1.7;
        for (int pair = 0; pair < 20; ++pair) {
            ParameterField f1 = sample_parameter_field(spec, m, 100 + 2 * pair);
            ParameterField f2 = sample_parameter_field(spec, m, 101 + 2 * pair);
            AssembledSystem s1 = build_system(m, f1, k2);
            AssembledSystem s2 = build_system(m, f2, k2);
            SparseMatrix diff = s1.a.linear_combination(1.0, -1.0, s2.a);
            const double lhs = diff.spectral_norm();
            const double rhs =
                1.02 * c_mesh * k2 * (f1.values - f2.values).cwiseAbs().maxCoeff();
            REQUIRE(lhs <= rhs);
        }
    }
}

TEST_CASE("degenerate triangle raises") {
    Mesh m = generate_unit_square_mesh(1);
    m.nodes.row(3) = m.nodes.row(0);  // collapse a vertex
    CHECK_THROWS_AS(assemble_stiffness(m), DegenerateTriangle);
}

TEST_SUITE_END();
