#include <doctest.h>

#include "den/errors.hpp"
#include "den/mesh.hpp"
#include "den/rng.hpp"
#include "support/test_helpers.hpp"

using namespace den;

TEST_SUITE_BEGIN("mesh");

TEST_CASE("unit square counts") {
    Mesh m1 = generate_unit_square_mesh(1);
    CHECK(m1.node_count() == 4);
    CHECK(m1.triangle_count() == 2);
    CHECK(m1.boundary_edges.size() == 4);

    Mesh m2 = generate_unit_square_mesh(2);
    CHECK(m2.node_count() == 9);
    CHECK(m2.triangle_count() == 8);
    CHECK(m2.boundary_edges.size() == 8);

    Mesh m38 = generate_unit_square_mesh(38);
    CHECK(m38.node_count() == 1521);
    validate_mesh(m38);
}

TEST_CASE("square area and perimeter are exact") {
    Mesh m = generate_unit_square_mesh(7);
    validate_mesh(m);
    double area = 0.0;
    for (std::int64_t t = 0; t < m.triangle_count(); ++t) area += m.triangle_area(t);
    CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
    double perim = 0.0;
    for (const auto& e : m.boundary_edges)
        perim += (m.nodes.row(e[0]) - m.nodes.row(e[1])).norm();
    CHECK(perim == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("disk mesh structure") {
    Mesh hex = generate_unit_disk_mesh(1.0);
    CHECK(hex.node_count() == 7);
    CHECK(hex.triangle_count() == 6);
    validate_mesh(hex);

    Mesh m = generate_unit_disk_mesh(0.2);
    validate_mesh(m);
    for (auto b : m.boundary_nodes)
        CHECK(std::abs(m.nodes.row(b).squaredNorm() - 1.0) < 1e-12);

    // Edge lengths within [0.5, 2] x target.
    auto check_edges = [](const Mesh& mesh, double target) {
        for (const auto& tri : mesh.triangles)
            for (int k = 0; k < 3; ++k) {
                const double len =
                    (mesh.nodes.row(tri[static_cast<std::size_t>(k)]) -
                     mesh.nodes.row(tri[static_cast<std::size_t>((k + 1) % 3)]))
                        .norm();
                CHECK(len >= 0.5 * target);
                CHECK(len <= 2.0 * target);
            }
    };
    check_edges(m, 0.2);

    // Halving the target roughly doubles the boundary node count.
    Mesh fine = generate_unit_disk_mesh(0.1);
    const double ratio = static_cast<double>(fine.boundary_nodes.size()) /
                         static_cast<double>(m.boundary_nodes.size());
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.25));

    // Total area approaches pi from below under refinement.
    auto total_area = [](const Mesh& mesh) {
        double a = 0.0;
        for (std::int64_t t = 0; t < mesh.triangle_count(); ++t) a += mesh.triangle_area(t);
        return a;
    };
    const double a_coarse = total_area(m), a_fine = total_area(fine);
    CHECK(a_coarse < 3.14159265358979);
    CHECK(a_fine < 3.14159265358979);
    CHECK(a_fine > a_coarse);
}

TEST_CASE("locate_point basics") {
    Mesh m = generate_unit_square_mesh(4);
    SUBCASE("vertex gives a permutation of (1,0,0)") {
        auto loc = locate_point(m, m.nodes.row(7));
        double mx = *std::max_element(loc.barycentric.begin(), loc.barycentric.end());
        double sum = loc.barycentric[0] + loc.barycentric[1] + loc.barycentric[2];
        CHECK(mx == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("centroid of a triangle") {
        const auto& tri = m.triangles[5];
        Eigen::Vector2d c = (m.nodes.row(tri[0]) + m.nodes.row(tri[1]) + m.nodes.row(tri[2])) / 3.0;
        auto loc = locate_point(m, c);
        CHECK(loc.triangle == 5);
        for (double b : loc.barycentric) CHECK(b == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("outside point throws") {
        Mesh disk = generate_unit_disk_mesh(0.5);
        CHECK_THROWS_AS(locate_point(disk, {1.5, 0.0}), PointOutsideMesh);
        CHECK_THROWS_AS(locate_point(disk, {0.9, 0.9}), PointOutsideMesh);
    }
}

TEST_CASE("locate_point round trip on random interior points") {
    Mesh m = generate_unit_disk_mesh(0.25);
    Pcg64Stream rng(41);
    int checked = 0;
    while (checked < 1000) {
        Eigen::Vector2d p(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
        if (p.norm() > 0.9) continue;  // stay well inside the polygon
        auto loc = locate_point(m, p);
        const auto& tri = m.triangles[static_cast<std::size_t>(loc.triangle)];
        Eigen::Vector2d q = loc.barycentric[0] * m.nodes.row(tri[0]) +
                            loc.barycentric[1] * m.nodes.row(tri[1]) +
                            loc.barycentric[2] * m.nodes.row(tri[2]);
        REQUIRE((q - p).norm() < 1e-10);
        REQUIRE(std::min({loc.barycentric[0], loc.barycentric[1], loc.barycentric[2]}) >= -1e-10);
        ++checked;
    }
}

TEST_CASE("mesh container round trip") {
    test::TempDir tmp;
    Mesh m = generate_unit_disk_mesh(0.3);
    save_mesh(tmp.path("disk.denm"), m);
    Mesh r = load_mesh(tmp.path("disk.denm"));
    CHECK(r.node_count() == m.node_count());
    CHECK(r.triangles == m.triangles);
    CHECK(r.boundary_edges == m.boundary_edges);
    CHECK((r.nodes - m.nodes).norm() == 0.0);
}

TEST_SUITE_END();
